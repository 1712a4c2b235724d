"""H^0, H^1 and a windowed H^2 diagnostic with trivial coefficients.

H^1 is computed as the dual of Tor_1 = A+/(A+)^2.  Writing every generator
in centred form ``v_g = g - eps(g)``, the degree-one parts of ideal elements
span the relations of Tor_1 inside ``V = span{v_g}``.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from itertools import product

from .errors import UnstableWindow, WindowTooSmall
from .linalg import Echelon
from .ncalg import ONE, ZERO
from .presentations import Presentation, quotient


@dataclass(frozen=True)
class LinearPartSystem:
    basis: tuple
    relation_rows: tuple
    degree_window: int

    @property
    def rank(self) -> int:
        return self._echelon().rank

    def _echelon(self) -> Echelon:
        order = {g: k for k, g in enumerate(self.basis)}
        ech = Echelon(key=order.__getitem__)
        ech.extend(self.relation_rows)
        return ech

    def survivors(self) -> list:
        """Centred generators spanning the quotient ``V / span(rows)``."""
        pivots = self._echelon().rows
        return [g for g in self.basis if g not in pivots]


@dataclass
class CohReport:
    h0: int
    h1: int
    tor1_basis: list
    degree_window: int
    stable: bool
    h1_next: int | None = None
    h2_truncated: dict | None = None
    completion: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "h0": self.h0,
            "h1": self.h1,
            "tor1_basis": [f"v({g})" for g in self.tor1_basis],
            "degree_window": self.degree_window,
            "stable": self.stable,
        }
        if self.h1_next is not None:
            out["h1_next_window"] = self.h1_next
        if self.h2_truncated is not None:
            out["h2_truncated"] = self.h2_truncated
        if self.completion:
            out["completion"] = self.completion
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def centered_linear_part(terms: dict, epsilon: dict) -> dict:
    """Degree-one part of a polynomial after substituting ``g = v_g + eps(g)``.

    For a word ``g1...gk`` this is ``sum_i (prod_{j != i} eps(gj)) v_{gi}``.
    """
    out: dict = {}
    for w, c in terms.items():
        k = len(w)
        if k == 0:
            continue
        eps = [epsilon[g] for g in w]
        zeros = [i for i, e in enumerate(eps) if not e]
        if len(zeros) > 1:
            continue
        if zeros:
            i = zeros[0]
            coef = c
            for j, e in enumerate(eps):
                if j != i:
                    coef *= e
            out[w[i]] = out.get(w[i], ZERO) + coef
            continue
        total = c
        for e in eps:
            total *= e
        for i, g in enumerate(w):
            out[g] = out.get(g, ZERO) + total / eps[i]
    return {g: a for g, a in out.items() if a}


def linear_part_system(P: Presentation, D: int) -> LinearPartSystem:
    """Linear parts of the raw relators and of every rule completed through ``D``."""
    A = quotient(P, D)
    rows = []
    for r in P.relators:
        rows.append(centered_linear_part(r.terms, P.epsilon))
    for lhs, rhs in A.rewrite._red.rules.items():
        rel = {lhs: ONE}
        for w, c in rhs.items():
            rel[w] = rel.get(w, ZERO) - c
        rows.append(centered_linear_part(rel, P.epsilon))
    return LinearPartSystem(tuple(P.generators), tuple(r for r in rows if r), D)


def _h1(P: Presentation, D: int):
    lps = linear_part_system(P, D)
    basis = lps.survivors()
    return len(basis), basis


def low_degree_cohomology(P: Presentation, D: int = 3, check_stability: bool = True,
                          with_h2: bool = False) -> CohReport:
    """H^0 and H^1 of ``P`` with trivial coefficients, read off the window ``D``."""
    h1, basis = _h1(P, D)
    A = quotient(P, D)
    stable, h1_next = True, None
    if check_stability:
        h1_next, _ = _h1(P, D + 1)
        stable = h1_next == h1
        if not stable:
            warnings.warn(
                f"H^1 changes between windows {D} ({h1}) and {D + 1} ({h1_next})",
                UnstableWindow,
                stacklevel=2,
            )
    report = CohReport(
        h0=1,
        h1=h1,
        tor1_basis=basis,
        degree_window=D,
        stable=stable,
        h1_next=h1_next,
        completion=A.certificate.to_dict(),
    )
    if with_h2:
        report.h2_truncated = h2_truncated(P, D)
    return report


def h2_truncated(P: Presentation, D: int) -> dict:
    """Windowed count of normalised 2-cocycles modulo coboundaries.

    A diagnostic only: constraints that leave the window are not imposed.
    """
    if D < 2:
        raise WindowTooSmall("the H^2 diagnostic needs a window of at least 2")
    A = quotient(P, D)
    words = {k: A.normal_words(k) for k in range(1, D + 1)}
    eps = A.eps_word
    unknowns = {}
    for d1 in range(1, D):
        for d2 in range(1, D - d1 + 1):
            for a, b in product(words[d1], words[d2]):
                unknowns[(a, b)] = len(unknowns)

    def nf(w):
        return {x: c for x, c in A.nf_word(w).items() if x}

    def star(a, b, x) -> dict:
        row: dict = {}

        def put(key, c):
            v = row.get(key, ZERO) + c
            if v:
                row[key] = v
            else:
                row.pop(key, None)

        ea, ex = eps(a), eps(x)
        if ea:
            put((b, x), ea)
        for w, c in nf(a + b).items():
            put((w, x), -c)
        for w, c in nf(b + x).items():
            put((a, w), c)
        if ex:
            put((a, b), -ex)
        return row

    cons = Echelon(key=unknowns.__getitem__)
    n_constraints = 0
    for d1 in range(1, D - 1):
        for d2 in range(1, D - d1):
            for d3 in range(1, D - d1 - d2 + 1):
                for a, b, x in product(words[d1], words[d2], words[d3]):
                    n_constraints += 1
                    cons.add(star(a, b, x))

    # delta(psi) for psi dual to each normal word, with psi(1) = 0
    cols: dict = {w: {} for d in range(1, D + 1) for w in words[d]}
    for a, b in unknowns:
        for key, c in ((b, eps(a)), (a, eps(b))):
            if c:
                col = cols[key]
                col[(a, b)] = col.get((a, b), ZERO) + c
        for x, c in nf(a + b).items():
            col = cols[x]
            col[(a, b)] = col.get((a, b), ZERO) - c
    cob = Echelon(key=unknowns.__getitem__)
    for w, col in cols.items():
        col = {k: c for k, c in col.items() if c}
        if not col:
            continue
        if any(_dot(row, col) for row in cons.rows.values()):
            raise ArithmeticError(f"coboundary of {w} violates a windowed constraint")
        cob.add(col)
    n = len(unknowns)
    dim = n - cons.rank - cob.rank
    return {
        "dim": dim,
        "unknowns": n,
        "constraints": n_constraints,
        "constraint_rank": cons.rank,
        "coboundary_rank": cob.rank,
        "degree_window": D,
        "label": "diagnostic",
    }


def _dot(u: dict, v: dict):
    if len(u) > len(v):
        u, v = v, u
    return sum((c * v[k] for k, c in u.items() if k in v), ZERO)
