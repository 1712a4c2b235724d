"""Acceptance suite: one test and one printed PASS/FAIL line per criterion.

The lines are repeated in an "acceptance criteria" section at the end of
any pytest run that includes this file. Arithmetic is exact, so every
tolerance is equality; the runtime limits are wall-clock.
"""

import random
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import dual_numbers, plane_algebra, truncated_h2_graded
from qpermcoh import (
    NCPoly,
    build_ahp,
    build_as,
    build_asd,
    certify_h2_vanishing,
    character,
    counit,
    cycle_graph_adjacency,
    delta1,
    h2_truncated,
    hopf_well_definedness,
    low_degree_cohomology,
    normal_form,
    permutation_character,
    petersen_adjacency,
    primitive,
    quotient,
    replay_lemma52,
    verify_coboundary,
)
from qpermcoh.cocycle import word_table
from qpermcoh.presentations import HopfStructure, automorphisms, free_presentation
from qpermcoh.ncalg import TensorElem, u

pytestmark = pytest.mark.acceptance

ONE_MINUTE, FIVE_MINUTES = 60.0, 300.0
REQUIRED_HOPF_CHECKS = {"counit", "coproduct", "antipode",
                        "antipode_identity_left", "antipode_identity_right"}


def emit(number, ok, detail):
    status = "EXCLUDED" if ok is None else "PASS" if ok else "FAIL"
    line = f"[criterion {number}] {status}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start


def certify_algebras():
    return {
        "A_s(4)": build_as(4)[0],
        "A_s(5)": build_as(5)[0],
        "A_s(4, 4-cycle)": build_asd(4, cycle_graph_adjacency(1, 4))[0],
        "A_s(6, two 3-cycles)": build_asd(6, cycle_graph_adjacency(2, 3))[0],
        "A_s(8, cycles 4,2)": build_asd(8, cycle_graph_adjacency(4, 2))[0],
    }


@pytest.fixture(scope="module")
def criterion2_algebras():
    return certify_algebras()


def test_criterion_1_h0_h1():
    cases = {
        "A_s(4)": build_as(4)[0],
        "A_s(5)": build_as(5)[0],
        "A_s(6)": build_as(6)[0],
        "A_s(4, 4-cycle)": build_asd(4, cycle_graph_adjacency(1, 4))[0],
        "A_s(10, Petersen)": build_asd(10, petersen_adjacency())[0],
    }
    notes, ok = [], True
    for name, P in cases.items():
        rep, secs = timed(low_degree_cohomology, P, 3, check_stability=True)
        good = rep.h0 == 1 and rep.h1 == 0 and rep.stable and secs < ONE_MINUTE
        ok &= good
        notes.append(f"{name} h0={rep.h0} h1={rep.h1} stable={rep.stable} {secs:.1f}s")
    assert emit(1, ok, "; ".join(notes))


def test_criterion_2_certificates(criterion2_algebras):
    notes, ok = [], True
    for name, P in criterion2_algebras.items():
        cert, secs = timed(certify_h2_vanishing, P, 4, strict=False)
        good = cert.verified and secs < FIVE_MINUTES
        ok &= good
        notes.append(f"{name} {cert.conclusion} {secs:.1f}s")
    assert emit(2, ok, "; ".join(notes))


def test_criterion_3_identity_families(criterion2_algebras):
    notes, ok = [], True
    for name, P in criterion2_algebras.items():
        reps = replay_lemma52(quotient(P, 4))
        instances = [i for r in reps for i in r.instances]
        good = (len(reps) == 8 and all(r.verified for r in reps)
                and all(i.witness or i.expr.is_zero() for i in instances))
        ok &= good
        trivial = sum(1 for i in instances if i.expr.is_zero())
        notes.append(f"{name} {sum(i.verified for i in instances)}/{len(instances)} verified "
                     f"({trivial} tautological)")
    assert emit(3, ok, "; ".join(notes))


def _round_trip(P, D=4):
    A = quotient(P, D)
    T = word_table(A, D)
    low = T.lengths <= 3
    eps = counit(A)
    identity = tuple(range(1, P.n + 1))
    good = total = 0
    for sigma in automorphisms(P):
        if sigma == identity:
            continue
        total += 1
        psi0 = character(A, permutation_character(P, sigma)) - eps
        c = delta1(psi0)
        phi = primitive(A, c)
        exact = bool(np.all((-phi).vector(T)[low] == psi0.vector(T)[low]))
        good += exact and bool(verify_coboundary(c, -phi, A, D))
    return good, total


def test_criterion_4_primitive_round_trip(criterion2_algebras):
    notes, ok = [], True
    for name, P in criterion2_algebras.items():
        (good, total), secs = timed(_round_trip, P)
        ok &= good == total > 0
        notes.append(f"{name} {good}/{total} in {secs:.1f}s")
    assert emit(4, ok, "; ".join(notes))


def test_criterion_5_truncated_h2():
    dual = free_presentation(["x"], ["x*x"])
    plane = free_presentation(["x", "y"], ["x*y - y*x"])
    checks = {
        "k[x]/(x^2)": (h2_truncated(dual, 4)["dim"], truncated_h2_graded(*dual_numbers(4), 4), 1),
        "k<x,y>/(xy-yx)": (h2_truncated(plane, 4)["dim"], truncated_h2_graded(*plane_algebra(4), 4), 1),
    }
    for k in (1, 2, 3):
        P = free_presentation(["x", "y", "z"][:k])
        checks[f"free({k})"] = (h2_truncated(P, 4)["dim"], 0, 0)
    checks["A_s(4) D=3"] = (h2_truncated(build_as(4)[0], 3)["dim"], 0, 0)
    ok = all(got == oracle == want for got, oracle, want in checks.values())
    assert emit(5, ok, "; ".join(f"{k}={v[0]}" for k, v in checks.items()))


def test_criterion_6_rewriting_soundness():
    P = build_as(4)[0]
    A = quotient(P, 4)
    rs = A.rewrite
    bad_overlaps = rs.check_local_confluence(4)
    relators_vanish = all(A.nf(r).is_zero() for r in P.relators)
    rng = random.Random(20240601)
    gens = list(P.generators)

    def rand():
        out = {}
        for _ in range(rng.randint(1, 6)):
            w = tuple(rng.choice(gens) for _ in range(rng.randint(0, 4)))
            out[w] = out.get(w, 0) + rng.randint(-5, 5)
        return NCPoly(out)

    failures = 0
    for _ in range(1000):
        p, q = rand(), rand()
        a, b = rng.randint(-4, 4), rng.randint(-4, 4)
        nf_p = normal_form(p, rs)
        if normal_form(nf_p, rs) != nf_p:
            failures += 1
        elif normal_form(a * p + b * q, rs) != a * nf_p + b * normal_form(q, rs):
            failures += 1
    ok = not bad_overlaps and relators_vanish and failures == 0
    assert emit(6, ok, f"{len(rs.rules)} rules, {len(bad_overlaps)} unresolved overlaps, "
                       f"relators->0: {relators_vanish}, 1000 samples with {failures} failures")


def test_criterion_7_hopf():
    cases = [
        ("A_s(4)", build_as(4), 4),
        ("A_s(4, 4-cycle)", build_asd(4, cycle_graph_adjacency(1, 4)), 4),
        ("A_h^2(2)", build_ahp(2, 2), 4),
        ("A_h^3(2)", build_ahp(2, 3), 5),
    ]
    notes, ok = [], True
    for name, (P, H), D in cases:
        rep = hopf_well_definedness(P, H, D, strict=False)
        kinds = {c.check for c in rep.checks}
        ok &= rep.passed and REQUIRED_HOPF_CHECKS <= kinds
        notes.append(f"{name} {'pass' if rep.passed else 'fail'}")
    P, H = build_as(4)
    delta = dict(H.delta)
    delta[u(1, 1)] = delta[u(1, 1)] - TensorElem.pure(NCPoly.gen(u(1, 2)), NCPoly.gen(u(2, 1)))
    control = hopf_well_definedness(P, HopfStructure(delta, H.counit, H.antipode), 4, strict=False)
    caught = [c for c in control.failures() if c.check == "coproduct" and c.witness]
    ok &= bool(caught)
    notes.append(f"corrupted coproduct caught: {bool(caught)}")
    assert emit(7, ok, "; ".join(notes))


def test_criterion_8_excluded():
    emit(8, None, "top-degree cohomology and the duality statement are out of "
                  "scope; covered instead by the δδ=0, span-soundness and oracle suites")
