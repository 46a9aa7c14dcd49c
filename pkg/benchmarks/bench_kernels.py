#!/usr/bin/env python3
"""Compare the compiled hash kernel against the pure-Python fallback.

Two views:
  * microbenchmark of fnv1a_64 on canonical-string-sized payloads
  * end-to-end ingest rate (parse + dedup + register + log append), where
    the second view re-executes this script with TRACELIGHT_PURE=1 so the
    whole pipeline runs on the fallback kernel.

Usage: python benchmarks/bench_kernels.py [--reports 20000] [--frames 30]
"""

import argparse
import os
import random
import subprocess
import sys
import tempfile
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

import synth  # noqa: E402


def bench_hash(payloads: list[bytes]) -> list[tuple[str, float]]:
    from tracelight._kernels import _pure

    impls = [("pure", _pure.fnv1a_64)]
    try:
        from tracelight._kernels import _native

        impls.append(("native", _native.fnv1a_64))
    except ImportError:
        print("note: compiled kernel not built; hash table shows fallback only")

    total_bytes = sum(len(p) for p in payloads)
    rows = []
    for name, fnv in impls:
        start = time.perf_counter()
        acc = 0
        for p in payloads:
            acc ^= fnv(p)
        elapsed = time.perf_counter() - start
        rows.append((name, total_bytes / elapsed / 1e6))
        assert acc is not None
    return rows


def bench_ingest(reports: list[str]) -> float:
    from tracelight.parser import RawReport
    from tracelight.store import TriageStore

    with tempfile.TemporaryDirectory() as d:
        store = TriageStore.open(d)
        start = time.perf_counter()
        for text in reports:
            store.ingest_report(RawReport(text))
        elapsed = time.perf_counter() - start
        store.close()
    return len(reports) / elapsed


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reports", type=int, default=20_000)
    parser.add_argument("--frames", type=int, default=30)
    parser.add_argument("--ingest-only", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    rng = random.Random(42)
    reports = synth.throughput_corpus(rng, args.reports, n_frames=args.frames)

    from tracelight._kernels import BACKEND

    if args.ingest_only:
        rate = bench_ingest(reports)
        print(f"ingest[{BACKEND}]: {rate:,.0f} reports/s")
        return 0

    payloads = [r.encode() for r in reports[:5000]]
    print(f"hash kernel, {len(payloads)} payloads, "
          f"{sum(len(p) for p in payloads) / 1e6:.1f} MB total:")
    for name, mbs in bench_hash(payloads):
        print(f"  fnv1a_64[{name:6s}]: {mbs:8.1f} MB/s")

    print(f"\nend-to-end ingest, {args.reports} reports x ~{args.frames} frames:")
    rate = bench_ingest(reports)
    print(f"  ingest[{BACKEND}]: {rate:,.0f} reports/s")

    if BACKEND == "native":
        sys.stdout.flush()
        env = dict(os.environ, TRACELIGHT_PURE="1")
        subprocess.run(
            [sys.executable, __file__, "--ingest-only",
             "--reports", str(args.reports), "--frames", str(args.frames)],
            env=env,
            check=True,
            stdout=sys.stdout,
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
