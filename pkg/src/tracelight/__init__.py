"""Crash triage: stack-trace dedup, frame rarity scoring, shared selections."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .dedup import (
    FrameKey,
    GroupStore,
    SubsystemRule,
    TraceFingerprint,
    TraceGroup,
    assign_subsystems,
    canonical_string,
    dedup_ingest,
    fingerprint,
    normalize_frame,
    trace_frame_keys,
)
from .errors import (
    CorruptSnapshot,
    IndexOutOfRange,
    InvalidK,
    IoFailure,
    ParseError,
    StoreUnavailable,
    TracelightError,
    UnknownGroup,
    UnrecognizedFormat,
)
from .highlight import DEFAULT_K, FrameScore, SuggestionSet, score_trace, suggest_top_k
from .idf import CorpusStats
from .parser import (
    ExceptionSegment,
    RawReport,
    StackFrame,
    StackTrace,
    detect_format,
    parse,
    parse_jvm,
    parse_python,
)
from .store import FrameSelection, IngestResult, TriageStore

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "FrameKey",
    "GroupStore",
    "SubsystemRule",
    "TraceFingerprint",
    "TraceGroup",
    "assign_subsystems",
    "canonical_string",
    "dedup_ingest",
    "fingerprint",
    "normalize_frame",
    "trace_frame_keys",
    "CorruptSnapshot",
    "IndexOutOfRange",
    "InvalidK",
    "IoFailure",
    "ParseError",
    "StoreUnavailable",
    "TracelightError",
    "UnknownGroup",
    "UnrecognizedFormat",
    "DEFAULT_K",
    "FrameScore",
    "SuggestionSet",
    "score_trace",
    "suggest_top_k",
    "CorpusStats",
    "ExceptionSegment",
    "RawReport",
    "StackFrame",
    "StackTrace",
    "detect_format",
    "parse",
    "parse_jvm",
    "parse_python",
    "FrameSelection",
    "IngestResult",
    "TriageStore",
    "__version__",
]
