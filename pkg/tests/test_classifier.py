import json

import numpy as np
import pytest

from whichpath import MirrorConfig, MirrorTiming, Outcome, Scenario, classify, classify_mirror, outcomes
from whichpath.classifier import Case, ParadoxError, UnsupportedConfiguration, ValidationError, decide
from whichpath.config import load_scenario
from conftest import GOLDEN

CASE_FILES = sorted((GOLDEN / "cases").glob("*.toml")) + sorted((GOLDEN / "extra").glob("*.toml"))


def _expected(path):
    return json.loads(path.with_name(path.stem + ".expected.json").read_text())


@pytest.mark.parametrize("path", CASE_FILES, ids=lambda p: p.stem)
def test_golden_case(path):
    want = _expected(path)
    report = classify(load_scenario(path))
    assert report.outcome.value == want["outcome"]
    if "case" in want:
        assert report.case.name == want["case"]
    for name in ("recoherence", "which_path", "recoherence_mirror"):
        if name in want:
            np.testing.assert_allclose(report.criterion(name).ratio, want[name], rtol=1e-9)


def test_matrix_has_eleven_fixtures():
    assert len(list((GOLDEN / "cases").glob("*.toml"))) == 11


def test_report_json_round_trips(em_quiet):
    d = json.loads(classify(em_quiet).to_json())
    assert d["outcome"] == "AliceRecoheres_NoWhichPath"
    assert {c["name"] for c in d["criteria"]} >= {"recoherence", "which_path", "alice_spacelike", "bob_spacelike"}
    assert d["model"]["signaling_meaningful"] is True


@pytest.mark.parametrize("path", CASE_FILES, ids=lambda p: p.stem)
def test_narrative_cites_deciding_criteria(path):
    report = classify(load_scenario(path))
    cited = [name for name in ("recoherence", "which_path", "alice_spacelike", "recoherence_mirror", "mirror_inside")
             if name in report.narrative]
    assert cited, report.narrative


def test_bob_is_irrelevant_when_alice_is_spacelike():
    # T_A < D: flipping Bob's choice or timing never changes the outcome
    rng = np.random.default_rng(2)
    n = 5000
    ta = 10.0 ** rng.uniform(-3, -0.01, n)
    base = dict(d=0.01, D=1.0, T_A=ta, q_A=10.0 ** rng.uniform(-4, 4, n), q_B=1.0)
    for tb in (0.01, 0.5, 0.99):
        open_ = outcomes(Scenario("em", T_B=np.full(n, tb), bob_opens=True, **base))
        closed = outcomes(Scenario("em", T_B=np.full(n, tb), bob_opens=False, **base))
        np.testing.assert_array_equal(open_, closed)
        ref = outcomes(Scenario("em", T_B=np.full(n, 0.5), **base))
        np.testing.assert_array_equal(open_, ref)


def test_no_paradox_over_random_batch():
    # decide() raises ParadoxError if any spacelike point satisfies both criteria
    rng = np.random.default_rng(8)
    n = 100_000
    s = Scenario("em", d=0.01, D=1.0, T_A=10.0 ** rng.uniform(-3, 1, n), T_B=10.0 ** rng.uniform(-3, 1, n),
                 q_A=10.0 ** rng.uniform(-4, 6, n), q_B=10.0 ** rng.uniform(-3, 3, n), m_B=10.0 ** rng.uniform(-3, 3, n),
                 slack=(1.0, 1.0))
    out = outcomes(s)
    assert len(out) == n


def test_every_point_gets_exactly_one_outcome():
    rng = np.random.default_rng(9)
    n = 20_000
    valid = {o.value for o in Outcome}
    for field, src in (("em", "q_A"), ("gr", "m_A")):
        kw = {src: 10.0 ** rng.uniform(-4, 8, n)}
        s = Scenario(field, d=0.01, D=1.0, T_A=10.0 ** rng.uniform(-3, 2, n), T_B=10.0 ** rng.uniform(-3, 2, n),
                     bob_opens=bool(rng.integers(2)), **kw)
        out = outcomes(s)
        assert out.shape == (n,)
        assert set(out) <= valid


def test_batch_agrees_with_scalar_classification():
    ta = np.array([0.05, 0.5, 2.0, 5.0])
    s = Scenario("em", d=0.01, D=1.0, T_A=ta, T_B=2.0, q_A=50.0, q_B=1.0)
    batch = outcomes(s)
    for i, t in enumerate(ta):
        assert batch[i] == classify(s.replace(T_A=t, T_B=2.0)).outcome.value


def test_paradox_guard_raises(monkeypatch):
    # no physical scenario trips the guard, so feed it an inconsistent which-path estimate
    import whichpath.classifier as clf

    monkeypatch.setattr(clf.estimators, "which_path_criterion", lambda s, **k: clf.Criterion("which_path", 5.0, ">"))
    with pytest.raises(ParadoxError):
        decide(Scenario("em", d=0.01, D=1.0, T_A=0.5, T_B=0.5, q_A=1.0))


def test_validation_error_lists_violations():
    with pytest.raises(ValidationError) as exc:
        classify(Scenario("gr", d=0.01, D=1.0, T_A=0.5, T_B=0.5, q_A=1.0))
    assert any("q_A = q_B = 0" in str(v) for v in exc.value.violations)


def test_mirror_on_gravity_unsupported():
    s = Scenario("gr", d=0.01, D=1.0, T_A=0.5, T_B=0.5, m_A=1.0, mirror=MirrorConfig(0.5))
    with pytest.raises(UnsupportedConfiguration):
        classify_mirror(s)


def test_mirror_quiet_erection_shields():
    s = Scenario("em", d=0.01, D=1.0, T_A=0.5, T_B=0.9, q_A=1.0,
                 mirror=MirrorConfig(0.5, MirrorTiming.ERECTED_DURING, 0.5))
    r = classify_mirror(s)
    assert r.case is Case.MIRROR_IIA_QUIET
    assert r.outcome is Outcome("AliceRecoheres_BobShielded")


def test_classify_rejects_batches():
    with pytest.raises(TypeError):
        classify(Scenario("em", d=0.01, D=1.0, T_A=np.array([0.1, 0.2]), T_B=0.5, q_A=1.0))
