"""Command line: ``isogeo list-models | verify | export-alpha``.

Exit codes: 0 all checks pass, 1 some check fails, 2 usage or configuration error."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import homog6
from .errors import InputError, IsogeoError, ModelLookupError
from .models.geometry import jet as make_jet, sample_points
from .models.registry import list_models, registry_get
from .numkit import FIRST_DERIVATIVE, StepPolicy
from .quadric import invariant_set
from .report import build_report, render_markdown, to_json
from .residual import Residual
from .suites import SUITES, RunContext, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
EXPORT_THRESHOLD = 1e-9


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    model: str
    suites: tuple = SUITES
    points: int = 4
    seed: int = 0
    tol_overrides: dict = field(default_factory=dict)
    fd_step: float | None = None
    out: str | None = None

    def __post_init__(self):
        if self.points < 1:
            raise UsageError("--points must be at least 1")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise UsageError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}")
        if not self.suites:
            raise UsageError("no suites selected")

    def echo(self) -> dict:
        out = asdict(self)
        out["suites"] = list(self.suites)
        out.pop("out")
        return out


def _override(r: Residual, overrides: dict) -> Residual:
    for key in (r.name, r.name.split(".")[0]):
        if key in overrides:
            return Residual(r.name, r.value, overrides[key], r.context, r.note, r.skipped)
    return r


def run_verify(config: RunConfig) -> dict:
    spec = registry_get(config.model)
    policy = FIRST_DERIVATIVE if config.fd_step is None else StepPolicy(base_step=config.fd_step)
    ctx = RunContext(spec, config.points, config.seed, policy)
    results = []
    for name in config.suites:
        results += run_suite(name, ctx)
    results = [_override(r, config.tol_overrides) for r in results]
    used = {r.name for r in results} | {r.name.split(".")[0] for r in results}
    warnings = [f"tolerance override {k!r} matched no check" for k in sorted(config.tol_overrides) if k not in used]
    warnings += [f"{r.name}: {r.note}" for r in results if r.note and not r.skipped and "convention" in r.note]
    return build_report({**config.echo(), "model_summary": spec.summary()}, results, warnings)


# -- export ---------------------------------------------------------------------------------

def export_alpha(model: str, point: int | None = None, seed: int = 0) -> dict:
    spec = registry_get(model)
    if not spec.has_geometry:
        if point is not None:
            raise UsageError(f"model {model} is tabulated; a point cannot be requested")
        table = homog6.table_from_spec(spec)
        return {"model": model, "kind": "table", "m": table.m, "n": table.n,
                "frame_labels": table.labels.tolist(), "components": table.components()}
    index = 0 if point is None else point
    if index < 0:
        raise UsageError("--point must be non-negative")
    p = sample_points(spec, index + 1, seed)[index]
    jet = make_jet(spec, p)
    inv = invariant_set(jet)
    comps = []
    n = inv.n
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                v = float(inv.alpha[i, j, k])
                if abs(v) > EXPORT_THRESHOLD:
                    comps.append({"i": i + 1, "j": j + 1, "k": k + 1, "value": v})
    return {
        "model": model,
        "kind": "point",
        "point_index": index,
        "seed": seed,
        "point": p.x.tolist(),
        "frame": "e",
        "frame_labels": inv.labels.tolist(),
        "ghat": inv.ghat.tolist(),
        "components": comps,
        "B0": {"re": np.real(inv.B0).tolist(), "im": np.imag(inv.B0).tolist()},
    }


# -- argument handling --------------------------------------------------------------------

def _tol_pairs(items) -> dict:
    out = {}
    for item in items or []:
        name, sep, val = item.partition("=")
        if not sep or not name:
            raise UsageError(f"--tol expects name=value, got {item!r}")
        try:
            out[name] = float(val)
        except ValueError:
            raise UsageError(f"--tol value for {name!r} is not a number") from None
        if not out[name] > 0:
            raise UsageError(f"--tol value for {name!r} must be positive")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isogeo", description="Numerical verification of isoparametric identities.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list-models", help="list registered models")

    v = sub.add_parser("verify", help="run verification suites on a model")
    v.add_argument("--model", required=True)
    v.add_argument("--suites", default=",".join(SUITES), help="comma separated subset of " + ",".join(SUITES))
    v.add_argument("--points", type=int, default=4)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", action="append", metavar="NAME=VALUE")
    v.add_argument("--fd-step", type=float, default=None)
    v.add_argument("--out", default=None, help="report path (.json, or .md for markdown)")

    e = sub.add_parser("export-alpha", help="dump alpha of a table or of a sampled point")
    e.add_argument("--model", required=True)
    e.add_argument("--point", type=int, default=None, help="index of the sampled point")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out", default=None)
    return parser


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _list_models() -> str:
    rows = [("name", "kind", "n", "g", "multiplicities")]
    for spec in list_models():
        rows.append((spec.name, spec.kind, str(spec.n), str(spec.g), ",".join(map(str, spec.multiplicities))))
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "list-models":
            sys.stdout.write(_list_models())
            return EXIT_OK
        if args.command == "export-alpha":
            data = export_alpha(args.model, args.point, args.seed)
            _write(json.dumps(data, indent=2, sort_keys=True) + "\n", args.out)
            return EXIT_OK
        suites = tuple(s.strip() for s in args.suites.split(",") if s.strip())
        config = RunConfig(args.model, suites, args.points, args.seed, _tol_pairs(args.tol), args.fd_step, args.out)
        if config.fd_step is not None:
            StepPolicy(base_step=config.fd_step)
        registry_get(config.model)
    except (UsageError, InputError, ModelLookupError) as exc:
        print(f"isogeo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IsogeoError as exc:
        print(f"isogeo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    report = run_verify(config)
    if config.out:
        text = render_markdown(report) if config.out.endswith(".md") else to_json(report)
        Path(config.out).write_text(text)
    s = report["summary"]
    print(f"{config.model}: {s['passed']} passed, {s['failed']} failed, {s['skipped']} skipped, "
          f"{s['warnings']} warnings")
    for row in report["results"]:
        if row["status"] == "fail":
            print(f"  FAIL {row['name']} value={row['value']} tol={row['tol']} {row['context']}")
    return EXIT_FAIL if s["failed"] else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
