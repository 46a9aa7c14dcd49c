import math
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from tracelight.idf import CorpusStats


class TestRegisterGroup:
    def test_first_group(self):
        stats = CorpusStats()
        stats.register_group({"A", "B"})
        assert stats.n_groups == 1
        assert stats.df == {"A": 1, "B": 1}

    def test_second_group_overlaps(self):
        stats = CorpusStats()
        stats.register_group({"A", "B"})
        stats.register_group({"B", "C"})
        assert stats.n_groups == 2
        assert stats.df == {"A": 1, "B": 2, "C": 1}

    def test_replay_matches_brute_force_recount(self, rng):
        groups = [
            frozenset(f"k{rng.randrange(60)}" for _ in range(rng.randrange(1, 12)))
            for _ in range(500)
        ]
        stats = CorpusStats()
        for keys in groups:
            stats.register_group(keys)
        recount: dict[str, int] = {}
        for keys in groups:
            for k in keys:
                recount[k] = recount.get(k, 0) + 1
        assert stats.df == recount
        assert stats.n_groups == len(groups)

    def test_order_independence(self, rng):
        groups = [
            frozenset(f"k{rng.randrange(40)}" for _ in range(rng.randrange(1, 8)))
            for _ in range(200)
        ]
        a = CorpusStats()
        for keys in groups:
            a.register_group(keys)
        shuffled = groups[:]
        rng.shuffle(shuffled)
        b = CorpusStats()
        for keys in shuffled:
            b.register_group(keys)
        assert a.n_groups == b.n_groups
        assert a.df == b.df


class TestIdf:
    def test_formula_values(self):
        stats = CorpusStats(n_groups=10, df={"seen": 1, "common": 10})
        assert math.isclose(stats.idf("seen"), math.log(11 / 2) + 1, abs_tol=1e-12)
        assert stats.idf("common") == 1.0
        assert math.isclose(stats.idf("unseen"), math.log(11) + 1, abs_tol=1e-12)

    def test_small_corpus_value(self):
        stats = CorpusStats(n_groups=4, df={"rare": 1})
        assert math.isclose(stats.idf("rare"), math.log(5 / 2) + 1, abs_tol=1e-12)
        assert round(stats.idf("rare"), 5) == 1.91629

    def test_unseen_attains_maximum(self):
        stats = CorpusStats(n_groups=25, df={"a": 1})
        assert stats.idf("nope") == math.log(26) + 1
        assert stats.idf("nope") > stats.idf("a")

    @given(st.integers(min_value=1, max_value=500))
    @settings(deadline=None)
    def test_strict_monotonicity(self, n):
        stats = CorpusStats(n_groups=n)
        values = []
        for df in range(0, n + 1):
            stats.df = {"k": df} if df else {}
            values.append(stats.idf("k"))
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_bounds_for_seen_keys(self, rng):
        for _ in range(200):
            n = rng.randrange(1, 400)
            df = rng.randrange(1, n + 1)
            stats = CorpusStats(n_groups=n, df={"k": df})
            v = stats.idf("k")
            assert 1.0 <= v <= math.log(1 + n) + 1


class TestCorpusSize:
    def test_empty(self):
        assert CorpusStats().corpus_size() == (0, 0, 0)

    def test_after_two_registrations(self):
        stats = CorpusStats()
        stats.note_report()
        stats.register_group({"A", "B"})
        stats.note_report()
        stats.register_group({"B", "C"})
        n_groups, n_reports, distinct = stats.corpus_size()
        assert n_groups == 2
        assert n_reports >= 2
        assert distinct == 3

    def test_distinct_count_matches_set_oracle(self, rng):
        stats = CorpusStats()
        seen = set()
        for _ in range(300):
            keys = frozenset(f"k{rng.randrange(80)}" for _ in range(rng.randrange(1, 10)))
            stats.note_report()
            stats.register_group(keys)
            seen |= keys
        assert stats.corpus_size()[2] == len(seen)
        assert all(1 <= v <= stats.n_groups for v in stats.df.values())
