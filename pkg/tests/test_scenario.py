import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from whichpath import MirrorConfig, MirrorTiming, Scenario, moments, validate
from whichpath.units import CHARGE, DimensionError, LENGTH, MASS, planck


def test_em_dipole_is_charge_times_separation():
    s = Scenario("em", d=2.0, D=100.0, T_A=1.0, T_B=1.0, q_A=5.0)
    dipole = moments(s).dipole
    assert dipole.value == 10.0
    assert dipole.dim == CHARGE * LENGTH


def test_gr_dipole_vanishes_exactly():
    for m_a, d in [(3.0, 2.0), (1e30, 1e-3), (1e-20, 7.0)]:
        s = Scenario("gr", d=d, D=1e6, T_A=1.0, T_B=1.0, m_A=m_a)
        assert moments(s).dipole.value == 0.0


def _two_point_quadrupole(m_a, d, m_lab):
    # particle displaced by d, lab recoils to keep the centre of mass at the origin
    x = np.array([d, -m_a * d / m_lab])
    m = np.array([m_a, m_lab])
    com = (m * x).sum() / m.sum()
    return (m * (x - com)).sum(), (m * (x - com) ** 2).sum()


def test_gr_quadrupole_matches_point_mass_oracle():
    s = Scenario("gr", d=2.0, D=100.0, T_A=1.0, T_B=1.0, m_A=3.0)
    q = moments(s).quadrupole
    assert q.dim == MASS * LENGTH ** 2
    dipoles, quads = zip(*(_two_point_quadrupole(3.0, 2.0, M) for M in (1e6, 1e9, 1e12)))
    assert all(abs(p) < 1e-9 for p in dipoles)
    # oracle converges to m_A d^2 as the lab mass grows
    assert abs(quads[-1] - 12.0) < 1e-9
    assert abs(quads[0] - 12.0) > abs(quads[-1] - 12.0)
    assert q.value == 12.0


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 1e3), st.integers(1, 6), st.sampled_from(["em", "gr"]))
def test_moments_homogeneous_in_d(lam, n, field):
    if field == "gr" and n == 1:
        n = 2
    base = Scenario(field, d=0.01, D=1e6, T_A=1.0, T_B=1.0, q_A=3.0 if field == "em" else 0.0, m_A=3.0)
    scaled = base.replace(d=0.01 * lam)
    ladder, ladder_s = moments(base), moments(scaled)
    assert ladder_s.higher(n).value == pytest.approx(lam ** n * ladder.higher(n).value, rel=1e-12)
    if field == "em":
        assert ladder_s.dipole.value == pytest.approx(lam * ladder.dipole.value, rel=1e-12)


def test_validate_gr_charge():
    s = Scenario("gr", d=0.01, D=1.0, T_A=0.5, T_B=0.5, q_A=2.0)
    msgs = [v.message for v in validate(s)]
    assert "gravitational version requires q_A = q_B = 0" in msgs


def test_validate_separation():
    s = Scenario("em", d=0.5, D=1.0, T_A=0.5, T_B=0.5, q_A=1.0)
    assert any("requires D ≫ d" in v.message for v in validate(s))
    # cutoff is configurable
    assert validate(s.replace(separation_cutoff=0.6)) == []


def test_validate_ok(em_quiet):
    assert validate(em_quiet) == []


def test_validate_collects_every_violation():
    s = Scenario("gr", d=-1.0, D=1.0, T_A=0.0, T_B=-2.0, m_A=0.0, q_B=1.0, multipole_order=1)
    fields = {v.field for v in validate(s)}
    assert {"d", "T_A", "T_B", "m_A", "q_A", "multipole_order"} <= fields


def test_mirror_validation():
    bad = Scenario("em", d=0.01, D=1.0, T_A=0.5, T_B=0.5, q_A=1.0,
                   mirror=MirrorConfig(0.5, MirrorTiming.ERECTED_DURING, 2.0))
    assert any(v.field == "mirror.erection_time" for v in validate(bad))
    missing = bad.replace(mirror=MirrorConfig(0.5, MirrorTiming.ERECTED_DURING))
    assert any("erection time" in v.message for v in validate(missing))


def test_quantity_inputs_are_dimension_checked():
    s = Scenario("em", d=planck(0.01, LENGTH), D="1@l_P", T_A=0.5, T_B=0.5, q_A=1.0)
    assert s.D == pytest.approx(1.0)
    with pytest.raises(DimensionError):
        Scenario("em", d=planck(0.01, MASS), D=1.0, T_A=0.5, T_B=0.5)


def test_to_dict_round_trip(em_quiet):
    d = em_quiet.to_dict()
    again = Scenario(**{k: v for k, v in d.items()})
    assert again == em_quiet
