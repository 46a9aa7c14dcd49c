"""Stack-trace parsing for JVM and Python (CPython) trace formats.

Raw report text is turned into a structured ``StackTrace``: a flat list of
exception segments, each holding ordered frames. The canonical frame order
is innermost-first (``all_frames[0]`` is the point of failure) regardless
of the source format; JVM traces already print innermost-first while
Python prints outermost-first, so Python segments are reversed when
flattened.

Parsing is lenient: malformed lines are skipped and counted, never fatal.
A parse only fails when zero frames can be recovered from the whole text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError, UnrecognizedFormat

PYTHON_TB_HEADER = "Traceback (most recent call last):"

# Chained-traceback separators, printed verbatim by CPython.
PYTHON_SEPARATORS = frozenset(
    [
        "During handling of the above exception, another exception occurred:",
        "The above exception was the direct cause of the following exception:",
    ]
)

#   File "/app/util.py", line 3, in helper
PYTHON_FRAME_RE = re.compile(
    r'^\s*File "(?P<path>[^"]+)", line (?P<line>\d+), in (?P<func>.+?)\s*$'
)

# ValueError: bad   /   socket.gaierror: [Errno -2]   /   KeyboardInterrupt
PYTHON_EXC_RE = re.compile(r"^(?P<exc>[A-Za-z_][\w.]*)(?::\s?(?P<msg>.*))?$")

#   at com.example.Foo.bar(Foo.java:42)  — trailing "~[jar:ver]" noise tolerated
JVM_FRAME_RE = re.compile(r"^\s*at\s+(?P<qual>[^\s(]+)\((?P<loc>[^)]*)\)")

JVM_CAUSED_RE = re.compile(r"^\s*Caused by:\s+(?P<exc>[^\s:]+)(?::\s?(?P<msg>.*))?$")
JVM_SUPPRESSED_RE = re.compile(r"^\s*Suppressed:\s+(?P<exc>[^\s:]+)(?::\s?(?P<msg>.*))?$")

#   ... 12 more
JVM_ELIDED_RE = re.compile(r"^\s*\.\.\.\s+(?P<n>\d+)\s+more\s*$")

# java.io.IOException: boom  — a dotted type name, optional thread prefix
JVM_HEADER_RE = re.compile(
    r'^(?:Exception in thread "[^"]*":?\s+)?'
    r"(?P<exc>[A-Za-z_$][\w$]*(?:\.[\w$]+)+)(?::\s?(?P<msg>.*))?$"
)

JVM_FILE_LINE_RE = re.compile(r"^(?P<file>.+):(?P<line>\d+)$")


@dataclass(frozen=True)
class RawReport:
    """One incoming report: opaque text plus ingest metadata."""

    text: str
    format_hint: str = "auto"  # auto | jvm | python
    product: str | None = None
    received_at: str | None = None  # ISO-8601 UTC, seconds precision


@dataclass(frozen=True, slots=True)
class StackFrame:
    location: str  # JVM: fully-qualified class; Python: source path
    function: str
    file: str | None
    line: int | None
    raw: str  # original frame line, verbatim


@dataclass
class ExceptionSegment:
    kind: str  # root | caused_by | suppressed | chained
    exception_type: str
    message: str | None = None
    frames: list[StackFrame] = field(default_factory=list)
    elided_count: int = 0


@dataclass
class StackTrace:
    segments: list[ExceptionSegment]
    source_format: str  # jvm | python
    skipped_lines: int = 0
    all_frames: tuple[StackFrame, ...] = field(init=False)

    def __post_init__(self) -> None:
        # Canonical order is innermost-first. JVM segments already print
        # innermost-first; Python prints outermost-first within a segment.
        flat: list[StackFrame] = []
        for seg in self.segments:
            if self.source_format == "python":
                flat.extend(reversed(seg.frames))
            else:
                flat.extend(seg.frames)
        self.all_frames = tuple(flat)


def coerce_text(data: bytes | str) -> str:
    """Decode raw bytes as UTF-8, replacing invalid sequences."""
    if isinstance(data, bytes):
        return data.decode("utf-8", errors="replace")
    return data


def detect_format(text: str) -> str:
    """Classify trace text as ``jvm`` or ``python``.

    Python patterns win over JVM ones: a Python traceback can quote
    JVM-looking text in messages, but not the other way around.
    """
    saw_jvm = False
    for line in text.splitlines():
        if line.lstrip().startswith(PYTHON_TB_HEADER) or PYTHON_FRAME_RE.match(line):
            return "python"
        if not saw_jvm and JVM_FRAME_RE.match(line):
            saw_jvm = True
    if saw_jvm:
        return "jvm"
    raise UnrecognizedFormat("text matches neither JVM nor Python trace patterns")


def parse(report: RawReport) -> StackTrace:
    """Parse a report, dispatching on its format hint (detecting when auto)."""
    fmt = report.format_hint
    if fmt == "auto":
        fmt = detect_format(report.text)
    if fmt == "jvm":
        return parse_jvm(report.text)
    if fmt == "python":
        return parse_python(report.text)
    raise ValueError(f"unknown format hint: {report.format_hint!r}")


def parse_jvm(text: str) -> StackTrace:
    """Parse a JVM-style stack trace (``at pkg.Class.method(File.java:42)``)."""
    segments: list[ExceptionSegment] = []
    current: ExceptionSegment | None = None
    skipped = 0
    n_frames = 0

    def push(seg: ExceptionSegment) -> ExceptionSegment:
        # The first segment is always root, whatever line opened it.
        seg.kind = "root" if not segments else seg.kind
        segments.append(seg)
        return seg

    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue

        m = JVM_FRAME_RE.match(line)
        if m:
            qual = m.group("qual")
            dot = qual.rfind(".")
            if dot <= 0 or dot == len(qual) - 1:
                skipped += 1
                continue
            loc_match = JVM_FILE_LINE_RE.match(m.group("loc"))
            if current is None:
                current = push(ExceptionSegment(kind="root", exception_type=""))
            current.frames.append(
                StackFrame(
                    location=qual[:dot],
                    function=qual[dot + 1 :],
                    file=loc_match.group("file") if loc_match else None,
                    line=int(loc_match.group("line")) if loc_match else None,
                    raw=line.rstrip("\r"),
                )
            )
            n_frames += 1
            continue

        m = JVM_ELIDED_RE.match(line)
        if m:
            if current is not None:
                current.elided_count = int(m.group("n"))
            else:
                skipped += 1
            continue

        m = JVM_CAUSED_RE.match(line)
        if m:
            current = push(
                ExceptionSegment(
                    kind="caused_by",
                    exception_type=m.group("exc"),
                    message=m.group("msg"),
                )
            )
            continue

        m = JVM_SUPPRESSED_RE.match(line)
        if m:
            current = push(
                ExceptionSegment(
                    kind="suppressed",
                    exception_type=m.group("exc"),
                    message=m.group("msg"),
                )
            )
            continue

        if current is None:
            m = JVM_HEADER_RE.match(stripped)
            if m:
                current = push(
                    ExceptionSegment(
                        kind="root",
                        exception_type=m.group("exc"),
                        message=m.group("msg"),
                    )
                )
                continue

        skipped += 1

    if n_frames == 0:
        raise ParseError("no JVM frames recovered")
    return StackTrace(segments=segments, source_format="jvm", skipped_lines=skipped)


def parse_python(text: str) -> StackTrace:
    """Parse a CPython traceback, including chained-exception blocks.

    Source-snippet echo lines (and other indented annotations such as
    caret markers or repeat notices) are ignored; they are not part of
    frame identity.
    """
    segments: list[ExceptionSegment] = []
    current: ExceptionSegment | None = None
    skipped = 0
    n_frames = 0

    def open_segment() -> ExceptionSegment:
        kind = "root" if not segments else "chained"
        return ExceptionSegment(kind=kind, exception_type="")

    def close_segment() -> None:
        # Drop frameless segments: Python has no frame elision, so an empty
        # segment carries no identity (e.g. tracebacklimit=0 output).
        nonlocal current
        if current is not None and current.frames:
            segments.append(current)
        current = None

    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue

        if stripped == PYTHON_TB_HEADER:
            close_segment()
            current = open_segment()
            continue

        if stripped in PYTHON_SEPARATORS:
            close_segment()
            continue

        m = PYTHON_FRAME_RE.match(line)
        if m:
            if current is None:
                current = open_segment()
            lineno = int(m.group("line"))
            current.frames.append(
                StackFrame(
                    location=m.group("path"),
                    function=m.group("func"),
                    file=None,
                    line=lineno if lineno >= 1 else None,
                    raw=line.rstrip("\r"),
                )
            )
            n_frames += 1
            continue

        if line[:1] in (" ", "\t"):
            continue  # snippet / caret / annotation line

        if current is not None and current.frames:
            m = PYTHON_EXC_RE.match(stripped)
            if m:
                current.exception_type = m.group("exc")
                current.message = m.group("msg")
                close_segment()
                continue

        skipped += 1

    close_segment()
    if n_frames == 0:
        raise ParseError("no Python frames recovered")
    return StackTrace(segments=segments, source_format="python", skipped_lines=skipped)
