"""Run every verification suite and write one JSON report per suite."""
import argparse
import sys
import time
from pathlib import Path

from isolift.suites import SUITES, SuiteConfig, report_json, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--sample", type=int, default=30)
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="reports")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = SuiteConfig(seed=args.seed, sample=args.sample, max_n=args.max_n, workers=args.workers)
    failed = 0
    for suite in SUITES:
        t0 = time.perf_counter()
        rep = run_suite(suite, cfg)
        (out / f"{suite}.json").write_text(report_json(rep))
        s = rep["summary"]
        failed += s["fail"]
        print(f"{suite:<11} pass={s['pass']:<5} fail={s['fail']:<3} skipped={s['skipped']:<3} "
              f"{time.perf_counter() - t0:6.1f}s")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
