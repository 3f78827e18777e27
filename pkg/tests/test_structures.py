import pytest

from lce_tradeoff.stats import QueryStats
from lce_tradeoff.structures import KINDS, build_structure
from lce_tradeoff.text import generate

from oracles import lce_matrix


@pytest.mark.parametrize("kind", [k for k in KINDS if k not in ("nearby", "dc")])
@pytest.mark.parametrize("tau", [1, 3, 8, "n"])
def test_every_kind_matches_oracle(kind, tau):
    t = generate("random", 80, sigma=2, seed=11)
    tau = t.n if tau == "n" else tau
    built = build_structure(kind, t, tau)
    truth = lce_matrix(t.seq)
    for i in range(t.n):
        for j in range(t.n):
            st = QueryStats()
            assert built.query(i, j, st, debug=True) == truth[i, j]
            assert st.path


def test_dc_kind_reports_certificates():
    t = generate("random", 80, sigma=2, seed=11)
    built = build_structure("dc", t, 3)
    truth = lce_matrix(t.seq)
    seen = set()
    for i in range(t.n):
        for j in range(t.n):
            st = QueryStats()
            got = built.query(i, j, st)
            seen.add(st.path)
            if st.path == "dc":
                assert got == truth[i, j]
            else:
                assert st.path == "dc-certificate" and truth[i, j] <= got == 9
    assert seen == {"dc", "dc-certificate"}


def test_effective_tau_reported():
    t = generate("fibonacci", 100)
    assert build_structure("mc", t, 5).tau == 8
    assert build_structure("det", t, 5).tau == 5
    combined = build_structure("combined", t, 5)
    assert combined.parts["dc"].tau == combined.parts["mc"].tau == 8


def test_invalid_requests():
    t = generate("fibonacci", 10)
    with pytest.raises(ValueError):
        build_structure("tree", t, 2)
    with pytest.raises(ValueError):
        build_structure("det", t, 0)
    with pytest.raises(ValueError):
        build_structure("nearby", t, 11)
