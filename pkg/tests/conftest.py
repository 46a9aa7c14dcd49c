import random

import pytest

from tracelight.parser import RawReport, parse
from tracelight.store import TriageStore

JVM_SAMPLE = """java.io.IOException: boom
\tat com.example.Foo.bar(Foo.java:42)
\tat com.example.Baz.qux(Baz.java:10)
\tat com.example.Main.main(Main.java:5)
"""

PY_SAMPLE = """Traceback (most recent call last):
  File "/app/main.py", line 10, in main
    helper()
  File "/app/util.py", line 3, in helper
    raise ValueError("bad")
ValueError: bad
"""


@pytest.fixture
def rng():
    return random.Random(1337)


@pytest.fixture
def jvm_trace():
    return parse(RawReport(JVM_SAMPLE))


@pytest.fixture
def py_trace():
    return parse(RawReport(PY_SAMPLE))


@pytest.fixture
def store(tmp_path):
    st = TriageStore.open(tmp_path / "data")
    yield st
    st.close()
