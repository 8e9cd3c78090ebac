"""Run both symbolic verifications and write the JSON reports next to a text log."""

import argparse
import json
from pathlib import Path
from time import perf_counter

from cuspcob.verify import verify_appendix1, verify_appendix2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--r", type=int, default=4)
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    ok = True
    for name, run in (
        ("appendix1", verify_appendix1),
        ("appendix2", lambda: verify_appendix2(r=args.r, samples=args.samples, seed=args.seed)),
    ):
        t0 = perf_counter()
        report = run()
        dt = perf_counter() - t0
        (args.out / f"{name}.json").write_text(json.dumps(report.to_json(), ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
        print(report.render())
        print(f"[{name}: {dt:.2f}s]\n")
        ok &= report.passed
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
