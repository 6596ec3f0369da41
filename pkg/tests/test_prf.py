import collections

import numpy as np
import pytest

from treeagg.prf import Stream


def test_streams_are_deterministic():
    a = Stream(7, "plan", 3)
    b = Stream(7, "plan", 3)
    assert a.take(100) == b.take(100)
    assert a.u64() == b.u64()


def test_distinct_labels_distinct_streams():
    assert Stream(0, "x").take(32) != Stream(0, "y").take(32)
    assert Stream(0, "ab", "c").take(32) != Stream(0, "a", "bc").take(32)
    assert Stream(1).take(32) != Stream(2).take(32)


def test_take_crosses_block_boundaries():
    whole = Stream(5).take(200000)
    s = Stream(5)
    pieces = b"".join(s.take(n) for n in (1, 7, 65535, 65536, 68921))
    assert pieces == whole


def test_randbelow_bounds_and_rough_uniformity():
    s = Stream("bounds")
    counts = collections.Counter(s.randbelow(5) for _ in range(5000))
    assert set(counts) == {0, 1, 2, 3, 4}
    assert all(830 <= c <= 1170 for c in counts.values())
    with pytest.raises(ValueError):
        s.randbelow(0)


def test_permutation_is_a_permutation():
    for n in (1, 2, 17, 1000):
        perm = Stream("perm", n).permutation(n)
        assert sorted(perm.tolist()) == list(range(n))
        assert perm.dtype == np.int64


def test_permutation_varies_with_seed():
    a = Stream("perm", 0).permutation(64)
    b = Stream("perm", 1).permutation(64)
    assert a.tolist() != b.tolist()


def test_sample_distinct_and_full_range():
    s = Stream("sample")
    got = s.sample(1000, 128)
    assert len(got) == len(set(got)) == 128
    assert all(0 <= v < 1000 for v in got)
    exhaustive = Stream("sample2").sample(16, 16)
    assert sorted(exhaustive) == list(range(16))
    with pytest.raises(ValueError):
        s.sample(4, 5)


def test_shuffle_in_place():
    items = list(range(50))
    Stream("shuffle").shuffle(items)
    assert sorted(items) == list(range(50))
    assert items != list(range(50))


def test_choice():
    s = Stream("choice")
    seq = ["a", "b", "c"]
    assert all(s.choice(seq) in seq for _ in range(20))
    with pytest.raises(ValueError):
        s.choice([])
