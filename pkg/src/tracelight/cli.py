"""Command-line entry point: serve, ingest, score, stats.

Configuration comes from flags first, then TRACELIGHT_* environment
variables, then defaults. Exit codes: 0 success, 1 environment/recovery
failures (bind, lock, unreadable data dir), 2 parse failures.
"""

from __future__ import annotations

import argparse
import fcntl
import json
import os
import signal
import socket
import sys
from pathlib import Path

from . import payloads
from .dedup import load_subsystem_rules, trace_frame_keys
from .errors import ParseError, TracelightError
from .highlight import DEFAULT_K
from .parser import RawReport, coerce_text, parse
from .store import TriageStore

LOCK_NAME = ".lock"


class LockHeld(TracelightError):
    """Another process is writing to the data directory."""


class DataDirLock:
    """Advisory single-writer lock (flock on ``.lock`` in the data dir)."""

    def __init__(self, data_dir: str | Path) -> None:
        self.path = Path(data_dir) / LOCK_NAME
        self._fh = None

    def acquire(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fh = open(self.path, "a")
        try:
            fcntl.flock(fh, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            fh.close()
            raise LockHeld(f"data dir is locked by another process: {self.path}")
        self._fh = fh

    def release(self) -> None:
        if self._fh is not None:
            fcntl.flock(self._fh, fcntl.LOCK_UN)
            self._fh.close()
            self._fh = None


def writer_active(data_dir: str | Path) -> bool:
    """Check the lock without creating it (read paths must not touch files)."""
    path = Path(data_dir) / LOCK_NAME
    if not path.exists():
        return False
    with open(path) as fh:
        try:
            fcntl.flock(fh, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            return True
        fcntl.flock(fh, fcntl.LOCK_UN)
    return False


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    env = os.environ
    if args.data is None:
        args.data = env.get("TRACELIGHT_DATA", "./data")
    if getattr(args, "addr", None) is None:
        args.addr = env.get("TRACELIGHT_ADDR", "127.0.0.1:8321")
    if getattr(args, "k", None) is None:
        args.k = int(env.get("TRACELIGHT_K", DEFAULT_K))
    if getattr(args, "rules", None) is None:
        args.rules = env.get("TRACELIGHT_RULES")
    return args


def _load_rules(args: argparse.Namespace):
    if getattr(args, "rules", None):
        return load_subsystem_rules(args.rules)
    return []


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    host, _, port_s = args.addr.rpartition(":")
    try:
        port = int(port_s)
    except ValueError:
        print(f"invalid --addr {args.addr!r}, expected host:port", file=sys.stderr)
        return 1
    host = host or "127.0.0.1"

    if args.k < 1:
        print("--k must be >= 1", file=sys.stderr)
        return 1

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
        sock.listen(128)
    except OSError as e:
        sock.close()
        print(f"cannot bind {args.addr}: {e}", file=sys.stderr)
        return 1

    lock = DataDirLock(args.data)
    try:
        lock.acquire()
    except LockHeld as e:
        sock.close()
        print(str(e), file=sys.stderr)
        return 1

    try:
        rules = _load_rules(args)
        store = TriageStore.open(args.data)
    except TracelightError as e:
        sock.close()
        lock.release()
        print(f"cannot recover state: {e}", file=sys.stderr)
        return 1

    cors = os.environ.get("TRACELIGHT_CORS")
    app = create_app(
        store,
        k=args.k,
        rules=rules,
        cors_origins=cors.split(",") if cors else None,
        ui_dir=os.environ.get("TRACELIGHT_UI"),
    )
    config = uvicorn.Config(app, log_level="warning")
    server = uvicorn.Server(config)

    # uvicorn re-raises the shutdown signal after a graceful stop, which
    # would kill us before the snapshot write; absorb it instead.
    def absorb(signum, frame):
        server.should_exit = True

    signal.signal(signal.SIGINT, absorb)
    signal.signal(signal.SIGTERM, absorb)

    print(f"tracelight serving on {host}:{port}, data dir {args.data}")
    try:
        server.run(sockets=[sock])
    finally:
        store.write_snapshot()
        store.close()
        sock.close()
        lock.release()
    return 0


def _iter_report_chunks(text: str):
    """Split a file into reports on lines containing only ``%%``."""
    chunk: list[str] = []
    for line in text.splitlines():
        if line.strip() == "%%":
            yield "\n".join(chunk)
            chunk = []
        else:
            chunk.append(line)
    yield "\n".join(chunk)


def cmd_ingest(args: argparse.Namespace) -> int:
    lock = DataDirLock(args.data)
    try:
        lock.acquire()
    except LockHeld as e:
        print(str(e), file=sys.stderr)
        return 1

    summary = {"files": 0, "reports": 0, "new_groups": 0, "duplicates": 0, "parse_errors": 0}
    try:
        store = TriageStore.open(args.data)
    except TracelightError as e:
        lock.release()
        print(f"cannot open data dir: {e}", file=sys.stderr)
        return 1

    try:
        files: list[Path] = []
        for raw_path in args.paths:
            path = Path(raw_path)
            if path.is_dir():
                files.extend(sorted(p for p in path.rglob("*") if p.is_file()))
            elif path.is_file():
                files.append(path)
            else:
                print(f"unreadable path: {path}", file=sys.stderr)
                summary["parse_errors"] += 1
        for path in files:
            try:
                text = coerce_text(path.read_bytes())
            except OSError as e:
                print(f"unreadable file {path}: {e}", file=sys.stderr)
                summary["parse_errors"] += 1
                continue
            summary["files"] += 1
            for chunk in _iter_report_chunks(text):
                if not chunk.strip():
                    continue
                try:
                    result = store.ingest_report(
                        RawReport(text=chunk, format_hint=args.format)
                    )
                except ParseError as e:
                    print(f"parse error in {path}: {e}", file=sys.stderr)
                    summary["parse_errors"] += 1
                    continue
                summary["reports"] += 1
                if result.is_new_group:
                    summary["new_groups"] += 1
                else:
                    summary["duplicates"] += 1
    finally:
        store.close()
        lock.release()

    print(json.dumps(summary))
    return 0 if summary["parse_errors"] == 0 else 2


def cmd_score(args: argparse.Namespace) -> int:
    if writer_active(args.data):
        print("data dir is locked by a writer; try again later", file=sys.stderr)
        return 1
    try:
        if args.input == "-":
            data = sys.stdin.buffer.read()
        else:
            data = Path(args.input).read_bytes()
    except OSError as e:
        print(f"cannot read input: {e}", file=sys.stderr)
        return 2

    try:
        rules = _load_rules(args)
        store = TriageStore.open(args.data, read_only=True)
    except TracelightError as e:
        print(f"cannot open data dir: {e}", file=sys.stderr)
        return 1

    try:
        trace = parse(RawReport(text=coerce_text(data), format_hint=args.format))
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2

    keys = trace_frame_keys(trace)
    suggestions = store.suggest_for_keys(keys, args.k)

    if args.json:
        print(
            json.dumps(
                {
                    "frames": payloads.frames_payload(trace, keys, rules),
                    "suggestions": payloads.suggestions_payload(suggestions),
                },
                indent=2,
            )
        )
        return 0

    by_index = {s.index: (rank, s.idf) for rank, s in enumerate(suggestions.suggested, 1)}
    labels = (
        [row.get("subsystem") for row in payloads.frames_payload(trace, keys, rules)]
        if rules
        else [None] * len(keys)
    )
    for i, frame in enumerate(trace.all_frames):
        parts = [f"{i:4d}"]
        if i in by_index:
            rank, idf = by_index[i]
            parts.append(f"! rank={rank} idf={idf:.4f}")
        if labels[i]:
            parts.append(f"[{labels[i]}]")
        parts.append(frame.raw.strip())
        print("  ".join(parts))
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    if writer_active(args.data):
        print("data dir is locked by a writer; try again later", file=sys.stderr)
        return 1
    try:
        store = TriageStore.open(args.data, read_only=True)
    except TracelightError as e:
        print(f"cannot read data dir: {e}", file=sys.stderr)
        return 1

    n_groups, n_reports, distinct = store.corpus_size()
    print(f"n_groups: {n_groups}")
    print(f"n_reports: {n_reports}")
    print(f"distinct_frames: {distinct}")
    entries = store.stats.df.items()
    most = sorted(entries, key=lambda kv: (-kv[1], kv[0]))[:20]
    least = sorted(entries, key=lambda kv: (kv[1], kv[0]))[:20]
    print("top 20 most frequent frames:")
    for key, df in most:
        print(f"  df={df}  {key}")
    print("top 20 least frequent frames:")
    for key, df in least:
        print(f"  df={df}  {key}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="tracelight",
        description="Crash triage: stack-trace dedup and rare-frame highlighting.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--data", help="data directory (default ./data)")

    p = sub.add_parser("serve", help="run the HTTP API service")
    common(p)
    p.add_argument("--addr", help="bind address host:port")
    p.add_argument("--k", type=int, help="suggestion count (default 3)")
    p.add_argument("--rules", help="subsystem rules JSON file")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("ingest", help="batch-ingest trace files")
    common(p)
    p.add_argument("--format", choices=["auto", "jvm", "python"], default="auto")
    p.add_argument("paths", nargs="+", help="trace files or directories")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("score", help="score one trace against the corpus (read-only)")
    common(p)
    p.add_argument("--k", type=int, help="suggestion count (default 3)")
    p.add_argument("--format", choices=["auto", "jvm", "python"], default="auto")
    p.add_argument("--rules", help="subsystem rules JSON file")
    p.add_argument("--json", action="store_true", help="emit the API frames+suggestions JSON")
    p.add_argument("input", nargs="?", default="-", help="trace file, or - for stdin")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("stats", help="print corpus statistics")
    common(p)
    p.set_defaults(func=cmd_stats)
    return top


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args = _resolve(args)
    except ValueError as e:
        print(f"bad TRACELIGHT_* environment value: {e}", file=sys.stderr)
        return 1
    if getattr(args, "k", None) is not None and args.k < 1:
        print("k must be >= 1", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except TracelightError as e:
        print(str(e), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
