import itertools

import pytest

from lamchoose.partitions import Partition, enumerate_partitions, le, refines

from oracles import brute_le, brute_partitions

P = Partition.parse
SMALL = [p for k in range(1, 7) for p in enumerate_partitions(k)]


def test_partition_normalises():
    lam = P("1,3,1")
    assert lam.parts == (3, 1, 1)
    assert lam.k == 5 and lam.q == 3
    assert str(lam) == "{1, 1, 3}"
    assert lam.to_text() == "1,1,3"
    with pytest.raises(ValueError):
        P("2,0")
    with pytest.raises(ValueError):
        P("")


@pytest.mark.parametrize("fine, coarse, expected", [
    ("2,3,4", "4,5", True),
    ("4,5", "4,5", True),
    ("2", "1,1", False),
    ("1,1", "2", True),
    ("3,3", "2,4", False),
])
def test_refines(fine, coarse, expected):
    ok, mapping = refines(P(fine), P(coarse))
    assert ok is expected
    if ok:
        assert sorted(x for _, b in mapping for x in b) == sorted(P(fine).parts)
        assert all(sum(b) == t for t, b in mapping)


def test_le_two_two_below_ones_and_three():
    ok, w = le(P("2,2"), P("1,1,1,3"))
    assert ok
    assert w.lambda_pp == P("2,4")
    assert w.check(P("2,2"), P("1,1,1,3"))


@pytest.mark.parametrize("lam, lam_p, expected", [
    ("1,1", "2", False),
    ("2", "1,1", True),
    ("1,2", "3", False),
    ("3", "3", True),
])
def test_le_small_cases(lam, lam_p, expected):
    assert le(P(lam), P(lam_p))[0] is expected
    assert brute_le(P(lam).parts, P(lam_p).parts) is expected


def test_le_witness_for_two_into_ones():
    ok, w = le(P("2"), P("1,1"))
    assert ok and w.lambda_pp == P("2")


@pytest.mark.parametrize("k, count", [(1, 1), (4, 5), (7, 15), (8, 22)])
def test_enumerate_partitions_counts(k, count):
    got = enumerate_partitions(k)
    assert len(got) == count == len(brute_partitions(k))
    assert [p.parts for p in got] == brute_partitions(k)
    assert len(set(got)) == count


def test_enumeration_is_descending_lex():
    parts = [p.parts for p in enumerate_partitions(6)]
    assert parts == sorted(parts, reverse=True)


def test_reflexive():
    for lam in SMALL:
        assert le(lam, lam)[0]


def test_transitive_exhaustive():
    rel = {(a, b) for a in SMALL for b in SMALL if le(a, b)[0]}
    for a, b in rel:
        for c in SMALL:
            if (b, c) in rel:
                assert (a, c) in rel, (a, b, c)


def test_antisymmetric_on_equal_sums():
    for a, b in itertools.product(SMALL, repeat=2):
        if a.k == b.k and le(a, b)[0] and le(b, a)[0]:
            assert a == b


def test_refinement_implies_le():
    for a, b in itertools.product(SMALL, repeat=2):
        if refines(b, a)[0]:
            assert le(a, b)[0]


def test_single_part_below_everything_larger():
    for k in range(1, 6):
        for lam_p in SMALL:
            if lam_p.k >= k:
                ok, w = le(Partition.of(k), lam_p)
                assert ok and w.lambda_pp == Partition.of(lam_p.k)


def test_all_ones_characterisation():
    for lam in (p for k in range(1, 9) for p in enumerate_partitions(k)):
        for kp in range(1, 9):
            ones = Partition((1,) * kp)
            expected = kp >= lam.k and lam.q <= kp
            assert le(lam, ones)[0] is expected
            assert brute_le(lam.parts, ones.parts) is expected


def test_witnesses_revalidate():
    for a, b in itertools.product(SMALL, repeat=2):
        ok, w = le(a, b)
        if ok:
            assert w.check(a, b)
            assert all(x >= y for x, y in w.alignment)
