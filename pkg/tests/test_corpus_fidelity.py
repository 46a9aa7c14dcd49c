"""Parser output must agree with the hand-labeled corpus on every field."""

import pytest

import trace_corpus
from tracelight.parser import parse_jvm, parse_python


def check_case(case, parse_fn):
    trace = parse_fn(case["text"])
    got_segments = [
        (s.kind, s.exception_type, s.message, s.elided_count, len(s.frames))
        for s in trace.segments
    ]
    assert got_segments == case["segments"], f"{case['name']}: segments differ"
    got_frames = [(f.location, f.function, f.file, f.line) for f in trace.all_frames]
    assert got_frames == case["frames"], f"{case['name']}: frames differ"
    assert trace.skipped_lines == case["skipped"], f"{case['name']}: skipped differs"
    for frame in trace.all_frames:
        assert frame.raw in case["text"]


def test_corpus_is_large_enough():
    assert len(trace_corpus.JVM_CASES) >= 30
    assert len(trace_corpus.PYTHON_CASES) >= 20


@pytest.mark.parametrize("case", trace_corpus.JVM_CASES, ids=lambda c: c["name"])
def test_jvm_case(case):
    check_case(case, parse_jvm)


@pytest.mark.parametrize("case", trace_corpus.PYTHON_CASES, ids=lambda c: c["name"])
def test_python_case(case):
    check_case(case, parse_python)
