import json

import pytest

from lce_tradeoff.fingerprint import PhiParams, pick_random_phi
from lce_tradeoff.mc import BitGeometry, mc_query
from lce_tradeoff.text import generate, naive_lce
from lce_tradeoff.verify import VerificationFailed, build_las_vegas, verify_phi, window_fingerprints

from oracles import horner


def _true_collision(t, phi, a, b, length):
    seq = t.seq
    return (horner(seq[a:a + length], phi.p, phi.x) == horner(seq[b:b + length], phi.p, phi.x)
            and seq[a:a + length] != seq[b:b + length])


def _brute_collision_free(t, tau, phi) -> bool:
    g = BitGeometry(t.n, tau)
    seq = t.seq
    for lvl in range(g.lg_blocks):
        length = g.tau << lvl
        if length > t.n:
            break
        fps = [horner(seq[j:j + length], phi.p, phi.x) for j in range(t.n - length + 1)]
        for k in range(0, t.n - length + 1, g.tau):
            for j in range(t.n - length + 1):
                if fps[k] == fps[j] and seq[k:k + length] != seq[j:j + length]:
                    return False
    return True


def test_constant_text_is_collision_free():
    t = generate("constant", 64)
    for seed in range(3):
        assert verify_phi(t, 4, pick_random_phi(64, 1.0, seed=seed)).collision_free


def test_tiny_modulus_yields_rechecked_witness():
    t = generate("random", 256, sigma=2, seed=1)
    phi = PhiParams(5, 2)
    report = verify_phi(t, 4, phi)
    assert not report.collision_free and report.outcome == "collision"
    assert _true_collision(t, phi, *report.witness)


def test_window_fingerprints_match_direct():
    t = generate("random", 120, sigma=26, seed=4)
    phi = pick_random_phi(120, 1.0, seed=2)
    for length in (1, 8, 64, 120):
        assert window_fingerprints(phi, t, length) == [
            horner(t.seq[j:j + length], phi.p, phi.x) for j in range(120 - length + 1)
        ]


@pytest.mark.parametrize("p", [11, 13, 101, 257])
@pytest.mark.parametrize("kind", ["random", "fibonacci", "thue_morse"])
def test_certificate_agrees_with_brute_force(p, kind):
    for n in (17, 40):
        t = generate(kind, n, sigma=2, seed=n)
        for tau in (1, 2, 4):
            for x in (2, 3, 7):
                phi = PhiParams(p, x)
                report = verify_phi(t, tau, phi)
                assert report.collision_free == _brute_collision_free(t, tau, phi)
                if not report.collision_free:
                    assert _true_collision(t, phi, *report.witness)


def test_level_stats():
    t = generate("fibonacci", 256)
    report = verify_phi(t, 4, pick_random_phi(256, 1.0, seed=0))
    assert [s.length for s in report.levels] == [4 << k for k in range(6)]
    assert all(s.windows == 256 - s.length + 1 for s in report.levels)
    data = json.loads(report.to_json())
    assert data["outcome"] == "collision-free" and len(data["levels"]) == 6


def test_las_vegas_pinned_and_deterministic():
    t = generate("random", 256, sigma=2, seed=4)
    ms, report = build_las_vegas(t, 4, seed=0)
    assert report.trials == 1
    assert (ms.p, ms.xs) == (1858044079037, (332911083382,))
    again, _ = build_las_vegas(t, 4, seed=0)
    assert again.values == ms.values
    for i, j in [(0, 1), (10, 100), (255, 3)]:
        assert mc_query(ms, t, i, j) == naive_lce(t, i, j)


def test_las_vegas_retries_with_small_modulus():
    t = generate("random", 256, sigma=2, seed=4)
    ms, report = build_las_vegas(t, 4, seed=7, modulus=10007)
    assert report.trials == 2
    assert ms.xs == (2310,)
    assert report.collision_free


def test_las_vegas_budget_exhausted():
    t = generate("random", 256, sigma=2, seed=4)
    with pytest.raises(VerificationFailed) as info:
        build_las_vegas(t, 4, seed=7, modulus=1009)
    assert info.value.report.trials == 32
    assert not info.value.report.collision_free
