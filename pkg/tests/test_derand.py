import math

import pytest

from lce_tradeoff.derand import (
    PhiTuple,
    build_derand_mc,
    comparison_size,
    query_sets,
    count_b_id,
    count_b_phi,
    derandomize,
)
from lce_tradeoff.fingerprint import is_prime
from lce_tradeoff.mc import mc_query
from lce_tradeoff.text import Text, generate
from lce_tradeoff.verify import verify_phi

from oracles import horner, lce_matrix


def _brute_b(t, A, L, xs, p):
    """Count (a, i, l) whose windows agree on every base, by direct evaluation."""
    seq, n = t.seq, t.n
    total = 0
    for l in L:
        for a in A:
            if a + l > n:
                continue
            for i in range(n - l + 1):
                if all(horner(seq[a:a + l], p, x) == horner(seq[i:i + l], p, x) if x else seq[a] == seq[i]
                       for x in xs):
                    total += 1
    return total


def test_count_b_id_examples():
    assert count_b_id(generate("constant", 8), [0], [2]) == 7
    assert count_b_id(Text("banana"), [1], [3]) == 2
    t = generate("random", 30, seed=1)
    assert count_b_id(t, [0], [30]) == 1


def test_count_b_id_against_matrix():
    t = generate("fibonacci", 60)
    m = lce_matrix(t.seq)
    A, L = [0, 7, 20, 33], [1, 4, 9, 30]
    expected = sum(int((m[a, : 60 - l + 1] >= l).sum()) for l in L for a in A if a + l <= 60)
    assert count_b_id(t, A, L) == expected


def test_empty_tuple_counts_everything():
    t = generate("random", 50, seed=2)
    A, L = [0, 5, 10], [2, 8, 45]
    assert count_b_phi(t, A, L, ()) == comparison_size(50, A, L)
    assert comparison_size(50, A, L) == sum(sum(a + l <= 50 for a in A) * (50 - l + 1) for l in L)


@pytest.mark.parametrize("xs", [(3,), (3, 0), (0,), (5, 11, 2)])
def test_count_b_phi_brute_and_partition_invariant(xs):
    t = generate("random", 40, sigma=3, seed=6)
    A, L = [0, 4, 8, 12, 30], [1, 2, 4, 8]
    p = 13
    expected = _brute_b(t, A, L, xs, p)
    for space in (1, 2, 5):
        assert count_b_phi(t, A, L, xs, p, space=space) == expected


def test_monotone_in_components():
    t = generate("thue_morse", 64)
    A, L = list(range(0, 64, 4)), [4, 8, 16]
    counts = [count_b_phi(t, A, L, (3, 7, 10)[:k], 17) for k in range(4)]
    assert counts == sorted(counts, reverse=True)
    assert counts[-1] >= count_b_id(t, A, L)


def test_constant_text_needs_no_rounds():
    t = generate("constant", 64)
    A, L = query_sets(64, 4)
    phi = derandomize(t, A, L, 0.5)
    assert phi.xs == () and phi.b_id == comparison_size(64, A, L)


def test_random_text_certificate():
    n = 1024
    t = generate("random", n, sigma=2, seed=0)
    A, L = query_sets(n, 8)
    phi = derandomize(t, A, L, 0.5)
    assert is_prime(phi.p)
    assert max(L) * n ** 0.5 <= phi.p <= 2 * max(L) * n ** 0.5
    assert phi.k == 8 and 1 <= len(phi.xs) <= 8
    b_id = count_b_id(t, A, L)
    assert count_b_phi(t, A, L, phi.xs, phi.p) == b_id == phi.b_id
    for r in phi.rounds:
        assert r.after - b_id <= (r.before - b_id) / n ** 0.5


def test_first_qualifying_base_is_taken():
    n = 256
    t = generate("random", n, sigma=2, seed=3)
    A, L = query_sets(n, 8)
    phi = derandomize(t, A, L, 0.5)
    first = phi.rounds[0]
    allowed = (first.before - phi.b_id) / n ** 0.5
    for x in range(1, first.x):
        assert count_b_phi(t, A, L, (x,), phi.p) - phi.b_id > allowed
    assert first.candidates == first.x


def test_input_validation():
    t = generate("random", 32, seed=1)
    with pytest.raises(ValueError):
        derandomize(t, [0], [4], 1.0)
    with pytest.raises(ValueError):
        count_b_id(t, [40], [2])
    with pytest.raises(ValueError):
        count_b_id(t, [0], [0])
    with pytest.raises(ValueError):
        count_b_phi(t, [0], [2], (3,))
    assert derandomize(t, [], [4], 0.5).xs == ()


@pytest.mark.parametrize("tau", [2, 4, 8])
@pytest.mark.parametrize("kind", ["random", "fibonacci", "periodic"])
def test_derand_structure_exhaustive(kind, tau):
    n = 96
    t = generate(kind, n, sigma=2, seed=tau)
    ms = build_derand_mc(t, tau, 0.5)
    assert isinstance(ms.certificate, PhiTuple)
    truth = lce_matrix(t.seq)
    for i in range(n):
        for j in range(n):
            assert mc_query(ms, t, i, j, debug=True) == truth[i, j]
    report = verify_phi(t, tau, ms.certificate)
    assert report.collision_free
    again = build_derand_mc(t, tau, 0.5)
    assert again.xs == ms.xs and again.values == ms.values


def test_tuple_length_bound():
    for eps in (0.5, 0.25, 0.3):
        assert PhiTuple(7, (), eps).k == math.ceil(4 / eps)
