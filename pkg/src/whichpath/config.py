"""TOML scenario and grid configuration files.

Numbers are Planck units; a string ``"<number>@<unit>"`` is an SI value
converted on load (see ``units.SI_UNITS`` for the accepted tags).  The schema
is documented in ``docs/config.md``.
"""

from __future__ import annotations

from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .scenario import MirrorConfig, MirrorTiming, Scenario
from .sweep import Axis, ConfigurationError, GridSpec
from .units import as_planck, LENGTH, TIME

SCENARIO_KEYS = {
    "field", "q_A", "q_B", "m_A", "m_B", "d", "D", "T_A", "T_B", "bob_opens",
    "multipole_order", "sigma_B", "separation_cutoff",
}
MIRROR_KEYS = {"mirror_timing", "mirror_radius", "mirror_erection_time"}
SLACK_KEYS = {"slack_min", "slack_max"}
GRID_KEYS = {"axes", "seed", "workers", "chunk_size"}


class ConfigError(ValueError):
    """Unreadable or malformed configuration file."""


def read_config(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None


def _slack(raw: dict) -> tuple:
    return (float(raw.get("slack_min", 0.1)), float(raw.get("slack_max", 10.0)))


def _check_keys(raw: dict, allowed: set) -> None:
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(unknown)}")


def scenario_from_dict(raw: dict) -> Scenario:
    _check_keys(raw, SCENARIO_KEYS | MIRROR_KEYS | SLACK_KEYS)
    if "field" not in raw:
        raise ConfigError("missing required key 'field'")
    missing = [k for k in ("d", "D", "T_A", "T_B") if k not in raw]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    params = {k: raw[k] for k in SCENARIO_KEYS if k in raw}
    if "mirror_radius" in raw or "mirror_timing" in raw:
        if "mirror_radius" not in raw:
            raise ConfigError("mirror settings need mirror_radius")
        params["mirror"] = MirrorConfig(
            radius=raw["mirror_radius"],
            timing=MirrorTiming(raw.get("mirror_timing", "always")),
            erection_time=raw.get("mirror_erection_time"),
        )
    try:
        return Scenario(slack=_slack(raw), **params)
    except (TypeError, KeyError) as exc:
        raise ConfigError(str(exc)) from None


def load_scenario(path) -> Scenario:
    return scenario_from_dict(read_config(path))


def grid_from_dict(raw: dict) -> tuple[GridSpec, dict]:
    """Return the grid and run options (``workers``, ``chunk_size``)."""
    _check_keys(raw, SCENARIO_KEYS | MIRROR_KEYS | SLACK_KEYS | GRID_KEYS)
    if "field" not in raw:
        raise ConfigError("missing required key 'field'")
    axes = []
    for name, table in raw.get("axes", {}).items():
        if not isinstance(table, dict):
            raise ConfigError(f"axis {name} must be a table with min, max, points, spacing")
        _check_keys(table, {"min", "max", "points", "spacing"})
        dim = LENGTH if name in ("d", "D", "R_M") else TIME if name in ("T_A", "T_B", "T_M") else None
        lo, hi = table.get("min"), table.get("max")
        if dim is not None:
            lo, hi = as_planck(lo, dim), as_planck(hi, dim)
        try:
            axes.append(Axis(name, float(lo), float(hi), int(table.get("points", 2)), table.get("spacing", "log")))
        except TypeError:
            raise ConfigError(f"axis {name} needs numeric min and max") from None
    fixed = {k: raw[k] for k in (SCENARIO_KEYS | MIRROR_KEYS) - {"field"} if k in raw}
    grid = GridSpec(raw["field"], tuple(axes), fixed, _slack(raw), raw.get("seed"))
    options = {"workers": int(raw.get("workers", 1)), "chunk_size": int(raw.get("chunk_size", 4096))}
    return grid, options


def load_grid(path) -> tuple[GridSpec, dict]:
    return grid_from_dict(read_config(path))


__all__ = ["ConfigError", "ConfigurationError", "load_scenario", "load_grid", "scenario_from_dict", "grid_from_dict"]
