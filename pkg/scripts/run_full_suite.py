"""Run every identity family on its default grid and write a JSON-lines report.

    python3 scripts/run_full_suite.py --digits 50 --max-weight 11 --threads 4 --out suite.jsonl
"""
import argparse
import json
import sys
import time
from dataclasses import dataclass

from eulersums.cli import render_records
from eulersums.verifier import IdentityId, VerifyConfig, summary, verify_grid


@dataclass
class SuiteConfig:
    digits: int = 50
    max_weight: int = 11
    threads: int = 4
    out: str = "suite.jsonl"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--digits", type=int, default=SuiteConfig.digits)
    ap.add_argument("--max-weight", type=int, default=SuiteConfig.max_weight)
    ap.add_argument("--threads", type=int, default=SuiteConfig.threads)
    ap.add_argument("--out", default=SuiteConfig.out)
    ns = ap.parse_args(argv)
    cfg = SuiteConfig(ns.digits, ns.max_weight, ns.threads, ns.out)

    vc = VerifyConfig(target_digits=cfg.digits, max_weight=cfg.max_weight, threads=cfg.threads)
    records = []
    for identity in IdentityId:
        start = time.perf_counter()
        recs = verify_grid(identity, None, vc)
        s = summary(recs)
        print(f"{identity.value:<13s} {s['passed']:>6d}/{s['total']:<6d} {time.perf_counter() - start:6.1f}s")
        records += recs

    with open(cfg.out, "w", encoding="utf-8") as fh:
        fh.write(render_records(records, "json"))
    s = summary(records)
    print(f"total {s['passed']}/{s['total']} passed, report in {cfg.out}")
    print(json.dumps(s["by_identity"], indent=1))
    return 0 if s["failed"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
