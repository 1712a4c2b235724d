import json
import random
from itertools import permutations

import pytest

from oracles import dual_numbers, exact_h2_finite, free_algebra, plane_algebra, truncated_h2_graded
from qpermcoh import (
    build_as,
    build_asd,
    cycle_graph_adjacency,
    h2_truncated,
    linear_part_system,
    low_degree_cohomology,
)
from qpermcoh.cocycle import Functional, delta1, star_defect
from qpermcoh.errors import UnstableWindow, WindowTooSmall
from qpermcoh.lowcoh import centered_linear_part
from qpermcoh.ncalg import Gen, Q
from qpermcoh.presentations import free_presentation

DUAL = free_presentation(["x"], ["x*x"], label="k[x]/(x^2)")
PLANE = free_presentation(["x", "y"], ["x*y - y*x"], label="plane")


def free(k):
    return free_presentation(["x", "y", "z"][:k])


def test_as4_h0_h1(as4):
    rep = low_degree_cohomology(as4[0], 3)
    assert (rep.h0, rep.h1, rep.tor1_basis, rep.stable) == (1, 0, [], True)


def test_free_algebra_h1():
    rep = low_degree_cohomology(free(2), 3)
    assert rep.h1 == 2
    assert [str(g) for g in rep.tor1_basis] == ["x", "y"]


def test_group_algebra_of_integers():
    P = free_presentation(["g", "h"], ["g*h - 1", "h*g - 1"], {"g": 1, "h": 1})
    assert low_degree_cohomology(P, 3).h1 == 1


def test_centered_linear_part_by_hand():
    g, h = Gen("g"), Gen("h")
    # (v_g + 1)(v_h + 1) - 1 has linear part v_g + v_h
    lin = centered_linear_part({(g, h): Q(1), (): Q(-1)}, {g: Q(1), h: Q(1)})
    assert lin == {g: 1, h: 1}


def test_linear_part_system_rank(as4):
    lps = linear_part_system(as4[0], 3)
    assert lps.rank == 16 and lps.survivors() == []


def test_report_json(as4):
    data = json.loads(low_degree_cohomology(as4[0], 3, with_h2=True).to_json())
    assert {"h0", "h1", "tor1_basis", "degree_window", "stable", "h2_truncated"} <= set(data)
    assert data["h2_truncated"]["label"] == "diagnostic"


def test_raw_relators_already_span_linear_parts(as4, c4):
    # lin(a r b) = ε(a)ε(b) lin(r), so completion adds no new linear parts
    from qpermcoh.linalg import rank
    for P in (as4[0], c4[0]):
        raw = [centered_linear_part(r.terms, P.epsilon) for r in P.relators]
        assert rank([v for v in raw if v]) == linear_part_system(P, 4).rank


def test_unstable_window_warns(monkeypatch, as4):
    import qpermcoh.lowcoh as lowcoh
    real = lowcoh._h1
    monkeypatch.setattr(lowcoh, "_h1", lambda P, D: (1, []) if D == 4 else real(P, D))
    with pytest.warns(UnstableWindow):
        rep = lowcoh.low_degree_cohomology(as4[0], 3)
    assert not rep.stable and (rep.h1, rep.h1_next) == (0, 1)


@pytest.mark.parametrize("D", [2, 3, 4])
def test_h2_dual_numbers_matches_oracle(D):
    assert h2_truncated(DUAL, D)["dim"] == truncated_h2_graded(*dual_numbers(D), D) == 1


def test_h2_dual_numbers_matches_exact():
    assert exact_h2_finite(["x"], lambda a, b: {}, {}) == h2_truncated(DUAL, 4)["dim"]


@pytest.mark.parametrize("D", [2, 3, 4])
def test_h2_plane_matches_oracle(D):
    assert h2_truncated(PLANE, D)["dim"] == truncated_h2_graded(*plane_algebra(D), D) == 1


@pytest.mark.parametrize("k,D", [(1, 3), (1, 4), (2, 3), (2, 4), (3, 3)])
def test_h2_free_matches_oracle(k, D):
    assert h2_truncated(free(k), D)["dim"] == truncated_h2_graded(*free_algebra(k, D), D) == 0


def test_h2_free_three_generators_window_four():
    assert h2_truncated(free(3), 4)["dim"] == 0


def test_h2_small_function_algebras_match_exact():
    # A_s(3) = C(S_3): normal words stop at degree 2, so window 6 sees every triple
    perms = [p for p in permutations((1, 2, 3)) if p != (1, 2, 3)]
    exact = exact_h2_finite(perms, lambda a, b: {a: 1} if a == b else {}, {})
    assert h2_truncated(build_as(3)[0], 6)["dim"] == exact == 0
    P = build_asd(4, cycle_graph_adjacency(1, 4))[0]
    assert h2_truncated(P, 3)["dim"] == 0


def test_h2_as4_window_three(as4):
    out = h2_truncated(as4[0], 3)
    assert out["dim"] == 0 and out["label"] == "diagnostic"


def test_window_too_small(as4):
    with pytest.raises(WindowTooSmall):
        h2_truncated(as4[0], 1)


def test_delta_delta_is_zero(A4):
    rng = random.Random(11)
    values = {}

    def psi(w):
        return values.setdefault(w, Q(rng.randint(-4, 4)))

    c = delta1(Functional(A4, psi))
    words = [w for k in range(3) for w in A4.normal_words(k)]
    for _ in range(200):
        a, b, x = rng.choice(words), rng.choice(words), rng.choice(words)
        if len(a) + len(b) + len(x) <= 4:
            assert star_defect(c, a, b, x) == 0


def test_stability_never_increases_h1():
    for P in (build_as(4)[0], build_asd(4, cycle_graph_adjacency(1, 4))[0]):
        r3 = low_degree_cohomology(P, 3)
        assert r3.stable and r3.h1_next <= r3.h1
