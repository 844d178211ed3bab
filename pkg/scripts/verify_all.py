"""Run every suite on every registered model and write JSON and markdown reports.

usage: python3 scripts/verify_all.py [--points 4] [--seed 0] [--out reports]
"""
import argparse
import sys
from pathlib import Path

from isogeo.cli import RunConfig, run_verify
from isogeo.models import model_names
from isogeo.report import render_markdown, to_json


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--points", type=int, default=4)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="reports")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for name in model_names():
        report = run_verify(RunConfig(name, points=args.points, seed=args.seed))
        (out / f"{name}.json").write_text(to_json(report))
        (out / f"{name}.md").write_text(render_markdown(report))
        s = report["summary"]
        failed += s["failed"]
        print(f"{name:12s} passed {s['passed']:4d}  failed {s['failed']:3d}  skipped {s['skipped']:2d}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
