"""Command-line interface.

Exit codes: 0 success, 1 I/O or usage error, 2 scenario validation failure,
3 theorem failure (a counterexample was found, or an expected witness was not).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import consistency
from .classifier import ParadoxError, UnsupportedConfiguration, ValidationError, classify
from .config import ConfigError, load_grid, load_scenario
from .scenario import FieldKind
from .sweep import ConfigurationError, sweep_to_csv
from .units import DimensionError

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_THEOREM = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def _fail(code: int, message: str) -> int:
    print(message, file=sys.stderr)
    return code


def cmd_classify(args) -> int:
    try:
        s = load_scenario(args.config)
        report = classify(s)
    except ConfigError as exc:
        return _fail(EXIT_IO, str(exc))
    except ValidationError as exc:
        lines = ["scenario failed validation:"] + [f"  - {v}" for v in exc.violations]
        return _fail(EXIT_INVALID, "\n".join(lines))
    except (DimensionError, UnsupportedConfiguration, ValueError) as exc:
        return _fail(EXIT_INVALID, f"scenario failed validation:\n  - {exc}")
    print(report.to_json())
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        grid, options = load_grid(args.config)
        workers = args.workers if args.workers is not None else options["workers"]
        text = sweep_to_csv(grid, workers=workers, chunk_size=options["chunk_size"])
    except (ConfigError, ConfigurationError) as exc:
        return _fail(EXIT_IO, str(exc))
    except ValidationError as exc:
        lines = ["grid contains invalid scenarios:"] + [f"  - {v}" for v in exc.violations]
        return _fail(EXIT_INVALID, "\n".join(lines))
    except (DimensionError, UnsupportedConfiguration, ValueError) as exc:
        return _fail(EXIT_INVALID, str(exc))
    try:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write {args.output}: {exc.strerror or exc}")
    return EXIT_OK


def cmd_signaling(args) -> int:
    try:
        if args.config:
            grid, _ = load_grid(args.config)
        else:
            grid = consistency.default_signaling_grid(args.field)
        curve = consistency.signaling_sweep(grid.field, args.margins, grid)
    except (ConfigError, ConfigurationError) as exc:
        return _fail(EXIT_IO, str(exc))
    except ValidationError as exc:
        return _fail(EXIT_INVALID, str(exc))
    text = consistency.signaling_to_csv(curve)
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            return _fail(EXIT_IO, f"cannot write {args.output}: {exc.strerror or exc}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _fields(choice: str) -> list[FieldKind]:
    return [FieldKind.ELECTROMAGNETIC, FieldKind.GRAVITATIONAL] if choice == "both" else [FieldKind.parse(choice)]


def cmd_theorems(args) -> int:
    if args.trials < 1:
        return _fail(EXIT_IO, "--trials must be at least 1")
    theorems, witnesses = [], []
    try:
        for field in _fields(args.field):
            orders = [1] if field is FieldKind.ELECTROMAGNETIC else [2, 3, 4, 5, 6]
            if args.drop:
                witnesses.append(consistency.counterfactual_probe(field, consistency.Ingredient(args.drop)))
                continue
            for n in orders:
                theorems.append(consistency.no_paradox_theorem(field, n, trials=args.trials, seed=args.seed))
            for ingredient in consistency.Ingredient:
                witnesses.append(consistency.counterfactual_probe(field, ingredient))
    except ParadoxError as exc:
        return _fail(EXIT_THEOREM, f"paradox detected: {exc}")
    report = {
        "seed": args.seed,
        "trials": args.trials,
        "theorems": [t.to_dict() for t in theorems],
        "counterfactuals": [w.to_dict() for w in witnesses],
    }
    ok = all(t.passed for t in theorems) and all(w.found for w in witnesses)
    report["passed"] = ok
    print(json.dumps(report, indent=2))
    if args.csv:
        try:
            Path(args.csv).write_text(consistency.theorems_to_csv(theorems), encoding="utf-8")
        except OSError as exc:
            return _fail(EXIT_IO, f"cannot write {args.csv}: {exc.strerror or exc}")
    if not ok:
        dump = [t.counterexample for t in theorems if not t.passed]
        missing = [f"{w.field.value}/{w.dropped.value}" for w in witnesses if not w.found]
        return _fail(EXIT_THEOREM, f"theorem failure; counterexamples: {json.dumps(dump)}; missing witnesses: {missing}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="whichpath", description="Which-path / recoherence consistency engine (Planck units).")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="Classify one scenario and print a JSON report.")
    c.add_argument("config")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("sweep", help="Evaluate a parameter grid and write a CSV phase diagram.")
    s.add_argument("config")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--workers", type=int, default=None, help="Worker processes (default: config value or 1).")
    s.set_defaults(func=cmd_sweep)

    t = sub.add_parser("theorems", help="Run the no-paradox theorems and counterfactual probes.")
    t.add_argument("--field", choices=["em", "gr", "both"], default="both")
    t.add_argument("--trials", type=int, default=100_000)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--drop", choices=[i.value for i in consistency.Ingredient], default=None)
    t.add_argument("--csv", default=None, help="Also write theorem results as CSV.")
    t.set_defaults(func=cmd_theorems)

    g = sub.add_parser("signaling", help="Signaling-residue curve over separation margins.")
    g.add_argument("config", nargs="?", default=None, help="Grid config (default: built-in log grid).")
    g.add_argument("--field", choices=["em", "gr"], default="em")
    g.add_argument("--margins", type=float, nargs="+", default=[1, 2, 4, 8, 16])
    g.add_argument("-o", "--output", default=None)
    g.set_defaults(func=cmd_signaling)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
