"""Rank formula, residue reduction, classification rules, and the growth
comparison, each checked against an independent brute-force oracle or a
frozen known value.
"""

import itertools
import random

import pytest

from kwaring.polynomials import Monomial
from kwaring.rank import (
    KInstance,
    classify,
    compare_bounds,
    lower_bound,
    monomial_rank,
    reduce_mod_k,
    residue_classes,
    upper_bound,
)

# Frozen values for the product formula (checked against the construction
# size in the decomposition tests as well).
KNOWN_RANKS = {
    (1, 1): 2,
    (1, 2): 3,
    (2, 2): 3,
    (1, 3): 4,
    (2, 3): 4,
    (1, 1, 1): 4,
    (2, 1): 3,
    (1, 1, 2): 6,
    (1, 1, 1, 1): 8,
    (1, 1, 1, 1, 1): 16,
    (2, 2, 2): 9,
}


def test_monomial_rank_known_values():
    for exps, value in KNOWN_RANKS.items():
        assert monomial_rank(exps) == value, exps


def test_monomial_rank_binary_family():
    # x*y^(k-1) has rank k for every k
    for k in range(2, 11):
        assert monomial_rank((1, k - 1)) == k


def test_monomial_rank_permutation_invariance():
    rng = random.Random(7)
    for _ in range(30):
        exps = [rng.randrange(1, 6) for _ in range(rng.randrange(1, 5))]
        base = monomial_rank(tuple(exps))
        rng.shuffle(exps)
        assert monomial_rank(tuple(exps)) == base


def test_monomial_rank_rejects_bad_input():
    with pytest.raises(ValueError):
        monomial_rank(())
    with pytest.raises(ValueError):
        monomial_rank((2, 0))
    with pytest.raises(ValueError):
        monomial_rank((1, -2))


def test_instance_validation():
    with pytest.raises(ValueError):
        KInstance(Monomial((1, 1)), 1)
    with pytest.raises(ValueError):
        KInstance(Monomial((1, 1)), 3)  # 3 does not divide 2
    inst = KInstance(Monomial((5, 7)), 3)
    residue, cofactor = reduce_mod_k(inst)
    assert residue.exponents == (2, 1)
    assert cofactor.exponents == (1, 2)


def test_reduce_mod_k_reassembles():
    rng = random.Random(11)
    for _ in range(40):
        k = rng.randrange(2, 6)
        nv = rng.randrange(1, 5)
        exps = [rng.randrange(0, 9) for _ in range(nv)]
        shift = (k - sum(exps)) % k
        exps[0] += shift
        inst = KInstance(Monomial(tuple(exps)), k)
        residue, cofactor = reduce_mod_k(inst)
        assert (cofactor ** k) * residue == inst.monomial


def _classes_oracle(n, k):
    seen = {
        tuple(sorted(t))
        for t in itertools.product(range(k), repeat=n + 1)
        if sum(t) % k == 0
    }
    return sorted(seen)


def test_residue_classes_frozen_lists():
    assert residue_classes(1, 4) == [(0, 0), (1, 3), (2, 2)]
    assert residue_classes(2, 3) == [(0, 0, 0), (0, 1, 2), (1, 1, 1), (2, 2, 2)]
    assert residue_classes(3, 3) == [
        (0, 0, 0, 0),
        (0, 0, 1, 2),
        (0, 1, 1, 1),
        (0, 2, 2, 2),
        (1, 1, 2, 2),
    ]


def test_residue_classes_against_oracle():
    for n in range(0, 5):
        for k in range(2, 6):
            assert residue_classes(n, k) == _classes_oracle(n, k), (n, k)


def test_lower_bound_cases():
    assert lower_bound(KInstance(Monomial((2, 4)), 2)) == 1
    assert lower_bound(KInstance(Monomial((1, 1)), 2)) == 2
    assert lower_bound(KInstance(Monomial((1, 2)), 3)) == 3


CLASSIFY_CASES = [
    # (exponents, k, lower, upper, exact)
    ((2, 4), 3, 3, 3, True),
    ((4, 1, 1), 3, 3, 3, True),
    ((1, 1, 1), 3, 4, 4, True),
    ((1, 2), 3, 3, 3, True),
    ((3, 1, 1, 1), 3, 3, 4, False),
    ((1, 1, 1, 1, 2), 3, 3, 4, False),
    ((2, 2), 4, 3, 3, True),
    ((1, 3), 4, 4, 4, True),
    ((1, 7), 4, 4, 4, True),
    ((3, 5), 4, 4, 4, True),
    ((1, 1, 1, 1), 4, 8, 8, True),
    ((1, 1, 1, 1, 1), 5, 16, 16, True),
    ((5, 5), 5, 1, 1, True),
    ((6, 3), 3, 1, 1, True),
    ((2, 2, 2), 3, 3, 3, True),
    ((1, 1, 2, 2), 3, 3, 3, True),
    ((1, 2, 2, 2, 2), 3, 3, 3, True),
]


def test_classify_cases():
    for exps, k, lo, hi, exact in CLASSIFY_CASES:
        b = classify(KInstance(Monomial(exps), k))
        assert (b.lower, b.upper, b.exact) == (lo, hi, exact), (exps, k)


def test_classify_trace_is_consistent():
    for exps, k, _, _, _ in CLASSIFY_CASES:
        b = classify(KInstance(Monomial(exps), k))
        assert b.trace, (exps, k)
        for rec in b.trace:
            assert rec.kind in ("lower", "upper", "exact")
            assert rec.bound >= b.lower
            if rec.kind in ("upper", "exact"):
                assert rec.bound >= b.upper


def test_classify_permutation_and_padding_invariance():
    rng = random.Random(23)
    for _ in range(40):
        k = rng.randrange(2, 5)
        nv = rng.randrange(1, 5)
        exps = [rng.randrange(0, 7) for _ in range(nv)]
        shift = (k - sum(exps)) % k
        exps[0] += shift
        base = classify(KInstance(Monomial(tuple(exps)), k))
        rng.shuffle(exps)
        shuffled = classify(KInstance(Monomial(tuple(exps)), k))
        padded = classify(KInstance(Monomial(tuple(exps) + (0, 0)), k))
        assert (base.lower, base.upper) == (shuffled.lower, shuffled.upper)
        assert (base.lower, base.upper) == (padded.lower, padded.upper)


def test_classify_never_worse_after_kth_power_factor():
    # multiplying in a k-th power cannot raise the upper bound
    rng = random.Random(31)
    for _ in range(60):
        k = rng.randrange(2, 5)
        nv = rng.randrange(1, 4)
        exps = [rng.randrange(0, 6) for _ in range(nv)]
        shift = (k - sum(exps)) % k
        exps[0] += shift
        before = classify(KInstance(Monomial(tuple(exps)), k))
        extra = tuple(rng.randrange(0, 3) * k for _ in range(nv))
        grown = tuple(e + x for e, x in zip(exps, extra))
        after = classify(KInstance(Monomial(grown), k))
        assert after.upper <= before.upper, (exps, extra, k)


def test_upper_bound_generic_rule():
    value, trace = upper_bound(KInstance(Monomial((1, 1, 1, 1, 1, 1)), 6))
    assert value <= 2 ** 5
    assert any(r.rule == "generic-split" for r in trace)


def _compare_oracle(n):
    best = None
    for k in range(2, 40 * n + 40):
        if 2 ** (k - 1) <= k ** n:
            best = k
    assert best is not None
    # past the scan window the left side has outgrown the right for good
    return best


def test_compare_bounds_values():
    assert compare_bounds(1) == 2
    assert compare_bounds(2) == 6
    assert compare_bounds(3) == 11
    assert compare_bounds(10) == 60


def test_compare_bounds_against_oracle():
    for n in range(1, 12):
        v = compare_bounds(n)
        assert v == _compare_oracle(n), n
        assert 2 ** (v - 1) <= v ** n
        assert 2 ** v > (v + 1) ** n
