"""Run every verification suite on every builtin model and every p; print a summary grid.

Exit status is 1 if any suite fails.  Usage: python scripts/run_all_suites.py [model ...]
"""
import argparse
import time

from fpcone.cli import SUITES, run_suite
from fpcone.identities import DEFAULT_SAMPLES, DEFAULT_SEED
from fpcone.models import builtin_models


def main(argv=None):
    ms = builtin_models()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("models", nargs="*", default=sorted(ms), choices=sorted(ms))
    ap.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = ap.parse_args(argv)
    bad = 0
    print(f"{'model':6} {'p':>2} " + " ".join(f"{s:>10}" for s in SUITES) + "   seconds")
    for name in args.models:
        m = ms[name]
        for p in range(m.n + 1):
            start = time.time()
            cells = []
            for suite in SUITES:
                reports = run_suite(suite, m, p, args.samples, args.seed)
                ok = all(r.passed for r in reports)
                bad += not ok
                cells.append("ok" if ok else "FAIL")
            print(f"{name:6} {p:>2} " + " ".join(f"{c:>10}" for c in cells) + f"   {time.time() - start:7.1f}",
                  flush=True)
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
