"""Symbolic calculus for normalised 2-cocycles with trivial coefficients.

A normalised 2-cocycle ``c`` on ``A = F/I`` is encoded through the map
``D(p)(x) = c(p ⊗ x)``.  On words it satisfies the left-slot recursion

    D(g w)(x) = ε(g) D(w)(x) + c(g ⊗ w x) - c(g ⊗ w) ε(x),

which is the cocycle identity (★) with ``a = g``.  Symbols therefore carry a
single generator on the left and a normal word on the right.  Two sorts
exist: *closed* symbols ``c(g ⊗ v)`` are unknown scalars, *open* symbols
``c(g ⊗ w·-)`` are unknown functionals on ``A+`` (where ``ε(-)`` vanishes).

Every constraint row built here is ``D(p)(x)`` for an element ``p`` of the
ideal, so it holds for every cocycle regardless of how much of the ideal the
rewrite system has found.
"""

from __future__ import annotations

import json
import random
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Mapping, NamedTuple

import numpy as np

from .errors import (
    IdentityNotDerivable,
    IllFormed,
    NotACocycle,
    RelationFails,
    RepresentativeMismatch,
)
from .linalg import Echelon
from .ncalg import ONE, ZERO, Gen, NCPoly, Q, Word, scalar_str, u, word_key, word_str
from .presentations import Presentation, QuotientAlgebra, quotient, x_element

DEFAULT_WINDOW = 4
OPEN = "open"


# ---------------------------------------------------------------------------
# symbols and expressions


class FunctionalSym(NamedTuple):
    sort: str  # "closed" | "open"
    left: Gen
    right: Word

    def __str__(self):
        if self.sort == "open":
            if not self.right:
                return f"c({self.left} ⊗ -)"
            return f"c({self.left} ⊗ {word_str(self.right)}·-)"
        return f"c({self.left} ⊗ {word_str(self.right)})"


def _sym_key(s: FunctionalSym):
    # higher right-slot degree pivots first
    return (len(s.right), s.right, s.left)


def _add(acc: dict, key, c):
    v = acc.get(key, ZERO) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class FunctionalExpr:
    """A finite combination of symbols plus a multiple of ``ε(-)``.

    For open expressions the ``ε(-)`` part is dropped, since such
    expressions are read as functionals on ``A+``.
    """

    __slots__ = ("terms", "epsilon_term", "sort")

    def __init__(self, terms=None, epsilon_term=ZERO, sort: str = "closed"):
        self.terms = {s: Q(c) for s, c in (terms or {}).items() if c}
        self.sort = sort
        self.epsilon_term = ZERO if sort == "open" else Q(epsilon_term)

    @classmethod
    def zero(cls, sort="closed"):
        return cls({}, ZERO, sort)

    def is_zero(self) -> bool:
        return not self.terms and not self.epsilon_term

    def __bool__(self):
        return not self.is_zero()

    def _check(self, other):
        if self.sort != other.sort:
            raise IllFormed(f"cannot combine {self.sort} and {other.sort} expressions")

    def __add__(self, other: "FunctionalExpr"):
        self._check(other)
        t = dict(self.terms)
        for s, c in other.terms.items():
            _add(t, s, c)
        return FunctionalExpr(t, self.epsilon_term + other.epsilon_term, self.sort)

    def __neg__(self):
        return FunctionalExpr({s: -c for s, c in self.terms.items()}, -self.epsilon_term, self.sort)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        k = Q(k)
        return FunctionalExpr({s: k * c for s, c in self.terms.items()}, k * self.epsilon_term,
                              self.sort)

    def __eq__(self, other):
        return (isinstance(other, FunctionalExpr) and self.sort == other.sort
                and self.terms == other.terms and self.epsilon_term == other.epsilon_term)

    def __hash__(self):
        return hash((self.sort, frozenset(self.terms.items()), self.epsilon_term))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for s in sorted(self.terms, key=_sym_key, reverse=True):
            c = self.terms[s]
            parts.append(f"{scalar_str(c)}*{s}")
        if self.epsilon_term:
            parts.append(f"{scalar_str(self.epsilon_term)}*ε(-)")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__

    def to_dict(self):
        return {
            "sort": self.sort,
            "terms": [[str(s), scalar_str(c)] for s, c in
                      sorted(self.terms.items(), key=lambda kv: _sym_key(kv[0]), reverse=True)],
            "epsilon_term": scalar_str(self.epsilon_term),
        }


# ---------------------------------------------------------------------------
# the derivation D(p)(x)


def _as_algebra(P_or_A, D: int | None = None) -> QuotientAlgebra:
    if isinstance(P_or_A, QuotientAlgebra):
        return P_or_A
    window = D if D is not None else max(DEFAULT_WINDOW, P_or_A.max_relator_degree + 2)
    return quotient(P_or_A, window)


def _terms(p) -> dict:
    if isinstance(p, NCPoly):
        return p._t
    if isinstance(p, Gen):
        return {(p,): ONE}
    if isinstance(p, tuple):
        return {p: ONE}
    if isinstance(p, dict):
        return p
    raise TypeError(f"cannot read {type(p).__name__} as a polynomial")


class Calculus:
    """Memoised evaluation of ``D(p)(x)`` over one quotient algebra."""

    def __init__(self, A: QuotientAlgebra):
        self.A = A
        self._closed: dict = {}
        self._open: dict = {}

    def nf(self, terms: dict) -> dict:
        return self.A.nf_terms(terms)

    def closed_word(self, w: Word, x: Word) -> dict:
        """``c(w ⊗ x)`` for words ``w`` and ``x``."""
        key = (w, x)
        hit = self._closed.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        if w and x:
            A = self.A
            g, rest = w[0], w[1:]
            e = A.eps_word((g,))
            if e:
                for s, c in self.closed_word(rest, x).items():
                    _add(out, s, e * c)
            for v, c in A.nf_word(rest + x).items():
                if v:
                    _add(out, FunctionalSym("closed", g, v), c)
            ex = A.eps_word(x)
            if ex and rest:
                for v, c in A.nf_word(rest).items():
                    if v:
                        _add(out, FunctionalSym("closed", g, v), -c * ex)
        self._closed[key] = out
        return out

    def open_word(self, w: Word, y: Word = ()) -> dict:
        """The functional ``m -> c(w ⊗ y m)`` on ``A+``."""
        key = (w, y)
        hit = self._open.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        if w:
            A = self.A
            g, rest = w[0], w[1:]
            e = A.eps_word((g,))
            if e:
                for s, c in self.open_word(rest, y).items():
                    _add(out, s, e * c)
            for v, c in A.nf_word(rest + y).items():
                _add(out, FunctionalSym("open", g, v), c)
        self._open[key] = out
        return out

    def closed(self, p, x) -> dict:
        out: dict = {}
        xs = _terms(x)
        for w, a in _terms(p).items():
            for y, b in xs.items():
                for s, c in self.closed_word(w, y).items():
                    _add(out, s, a * b * c)
        return out

    def open(self, p, y=()) -> dict:
        out: dict = {}
        ys = _terms(y)
        for w, a in _terms(p).items():
            for z, b in ys.items():
                for s, c in self.open_word(w, z).items():
                    _add(out, s, a * b * c)
        return out

    def row(self, p, point) -> dict:
        """``D(p)`` at a closed point, or as a functional on ``A+`` when ``point`` is OPEN."""
        if point is OPEN:
            return self.open(p)
        return self.closed(p, point)

    def ideal_element(self, a, b) -> dict:
        """``a*b - NF(a*b)`` in the free algebra."""
        ab: dict = {}
        for w1, c1 in _terms(a).items():
            for w2, c2 in _terms(b).items():
                _add(ab, w1 + w2, c1 * c2)
        for w, c in self.nf(ab).items():
            _add(ab, w, -c)
        return ab


_CALCULI: dict = {}


def calculus(A: QuotientAlgebra) -> Calculus:
    hit = _CALCULI.get(id(A))
    if hit is None or hit.A is not A:
        if len(_CALCULI) > 16:
            _CALCULI.clear()
        hit = _CALCULI[id(A)] = Calculus(A)
    return hit


def star_constraint(a, b, x, P) -> FunctionalExpr:
    """The (★) row ``ε(a)c(b⊗x) - c(ab⊗x) + c(a⊗bx) - c(a⊗b)ε(x)``.

    ``x`` is a word, a polynomial or :data:`OPEN`; in the open case the last
    term is dropped.  Left slots are reduced to single generators.
    """
    A = _as_algebra(P)
    K = calculus(A)
    ta = A.nf_terms(_terms(a))
    tb = A.nf_terms(_terms(b))
    ab = A.nf_terms(_product(ta, tb))
    ea = A.eps(ta)
    out: dict = {}
    if x is OPEN:
        for s, c in K.open(tb).items():
            _add(out, s, ea * c)
        for s, c in K.open(ab).items():
            _add(out, s, -c)
        for s, c in K.open(ta, tb).items():
            _add(out, s, c)
        return FunctionalExpr(out, ZERO, "open")
    tx = A.nf_terms(_terms(x))
    ex = A.eps(tx)
    for s, c in K.closed(tb, tx).items():
        _add(out, s, ea * c)
    for s, c in K.closed(ab, tx).items():
        _add(out, s, -c)
    for s, c in K.closed(ta, A.nf_terms(_product(tb, tx))).items():
        _add(out, s, c)
    if ex:
        for s, c in K.closed(ta, tb).items():
            _add(out, s, -ex * c)
    return FunctionalExpr(out, ZERO, "closed")


def _product(p: dict, q: dict) -> dict:
    out: dict = {}
    for w1, c1 in p.items():
        for w2, c2 in q.items():
            _add(out, w1 + w2, c1 * c2)
    return out


# ---------------------------------------------------------------------------
# constraint spans


class Provenance(NamedTuple):
    source: str
    point: str

    def to_dict(self):
        return {"source": self.source, "point": self.point}


class ConstraintSpan:
    """Exact spans of open and closed constraint rows with per-row provenance."""

    def __init__(self, A: QuotientAlgebra):
        self.A = A
        self.echelons = {"open": Echelon(key=_sym_key), "closed": Echelon(key=_sym_key)}
        self.rows: list = []  # (sort, row, provenance)
        self._by_symbol: dict = defaultdict(list)
        self.saturation: list = []

    def add(self, sort: str, row: dict, provenance: Provenance) -> bool:
        """Record a row; returns ``True`` when it enlarged the span."""
        if not row:
            return False
        rid = len(self.rows)
        self.rows.append((sort, row, provenance))
        for s in row:
            self._by_symbol[s].append(rid)
        return self.echelons[sort].add(row) is not None

    @property
    def open_rank(self) -> int:
        return self.echelons["open"].rank

    @property
    def closed_rank(self) -> int:
        return self.echelons["closed"].rank

    @property
    def identity_rank(self) -> int:
        """Independent closed identities among symbols with a one-letter right slot."""
        return sum(1 for s in self.echelons["closed"].rows if len(s.right) == 1)

    def residue(self, expr: FunctionalExpr) -> dict:
        if expr.epsilon_term:
            raise IllFormed("a closed identity cannot carry a bare ε term")
        return self.echelons[expr.sort].reduce(expr.terms)

    def contains(self, expr: FunctionalExpr) -> bool:
        return not self.residue(expr)

    def witness(self, expr: FunctionalExpr, limit: int = 400):
        """A combination of recorded rows equal to ``expr``, found near its symbols.

        The search starts with ``limit`` rows around the symbols of ``expr``
        and widens the budget while it keeps running out. Returns a list of
        ``(coefficient, Provenance)``, or ``None`` when no combination of the
        reachable rows works.
        """
        if not expr.terms:
            return []
        budget = limit
        while True:
            combo, exhausted = self._witness_within(expr, budget)
            if combo is not None or not exhausted:
                return combo
            budget *= 4

    def _witness_within(self, expr: FunctionalExpr, limit: int):
        chosen: list = []
        seen_rows: set = set()
        seen_syms: set = set(expr.terms)
        frontier = list(expr.terms)
        while frontier and len(chosen) < limit:
            nxt = []
            for s in sorted(frontier, key=_sym_key, reverse=True):
                for rid in self._by_symbol.get(s, ()):
                    if rid in seen_rows or self.rows[rid][0] != expr.sort:
                        continue
                    seen_rows.add(rid)
                    chosen.append(rid)
                    for t in self.rows[rid][1]:
                        if t not in seen_syms:
                            seen_syms.add(t)
                            nxt.append(t)
                    if len(chosen) >= limit:
                        break
                if len(chosen) >= limit:
                    break
            combo = self._solve(expr.terms, chosen)
            if combo is not None:
                return combo, False
            frontier = nxt
        return None, len(chosen) >= limit

    def _solve(self, target: dict, rids: list):
        def key(k):
            return (1, _sym_key(k)) if isinstance(k, FunctionalSym) else (0, k)

        ech = Echelon(key=key)
        for rid in rids:
            row = dict(self.rows[rid][1])
            row[("tag", rid)] = ONE
            ech.add(row)
        rem = ech.reduce(target)
        if any(isinstance(k, FunctionalSym) for k in rem):
            return None
        combo = [(-c, self.rows[k[1]][2]) for k, c in sorted(rem.items(), key=lambda kv: kv[0][1])]
        return combo

    def summary(self) -> dict:
        return {
            "rows": len(self.rows),
            "open_rank": self.open_rank,
            "closed_rank": self.closed_rank,
            "identity_rank": self.identity_rank,
            "saturation_batches": self.saturation,
        }


def _matrix_data(P: Presentation):
    if not P.n or any(g.name != "u" for g in P.generators):
        raise IllFormed("the cocycle engine needs a presentation on matrix generators u[i,j]")
    return P.n, P.matrix


def _x_elements(P: Presentation) -> dict:
    n, d = _matrix_data(P)
    if d is None or d.is_zero():
        return {}
    out = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            x = x_element(d, i, j, "left")
            if x:
                out[(i, j)] = x
    return out


def derive_identity_span(P, D: int | None = None, saturate: bool = True, seed: int = 0,
                         batch: int = 32, max_batches: int = 24) -> ConstraintSpan:
    """Rows ``D(p)(x)`` for ideal elements ``p`` mirroring the proof schedule.

    Sources: the raw relators, the completed rules of degree <= 2 and the
    elements ``a X_ij - NF(a X_ij)``, ``X_ij a - NF(X_ij a)`` for
    ``a in {u_ii, u_jj}``.  Points: open, and every free generator.  An
    optional saturation pass adds random (★) instances with points of degree
    up to 2 until two consecutive batches leave the identity rank unchanged.
    """
    A = _as_algebra(P, D)
    P = A.presentation
    n, _ = _matrix_data(P)
    K = calculus(A)
    span = ConstraintSpan(A)
    sources = []
    for k, r in enumerate(P.relators):
        sources.append((f"relator #{k}: {r}", r._t))
    for rule in A.rewrite.rules:
        if len(rule.lhs) <= 2:
            sources.append((f"rule {rule}", rule.relation._t))
    for (i, j), x in sorted(_x_elements(P).items()):
        for a in dict.fromkeys((u(i, i), u(j, j))):
            ga = {(a,): ONE}
            sources.append((f"star({a}, X[{i},{j}])", K.ideal_element(ga, x._t)))
            sources.append((f"star(X[{i},{j}], {a})", K.ideal_element(x._t, ga)))
    points = [OPEN] + [(g,) for g in A.free_generators()]
    for label, p in sources:
        if not p:
            continue
        for pt in points:
            sort = "open" if pt is OPEN else "closed"
            span.add(sort, K.row(p, pt), Provenance(label, "open" if pt is OPEN else word_str(pt)))
    if saturate:
        _saturate(span, K, seed, batch, max_batches)
    return span


def _saturate(span: ConstraintSpan, K: Calculus, seed: int, batch: int, max_batches: int):
    A = span.A
    rng = random.Random(seed)
    gens = list(A.generators)
    pts = [w for k in (1, 2) for w in A.normal_words(k)]
    quiet = 0
    for _ in range(max_batches):
        before = span.identity_rank
        for _ in range(batch):
            a, b = rng.choice(gens), rng.choice(gens)
            x = rng.choice(pts)
            p = K.ideal_element({(a,): ONE}, {(b,): ONE})
            span.add("closed", K.closed(p, x),
                     Provenance(f"saturation star({a}, {b})", word_str(x)))
        gained = span.identity_rank - before
        span.saturation.append(gained)
        quiet = quiet + 1 if gained == 0 else 0
        if quiet >= 2:
            break


# ---------------------------------------------------------------------------
# the eight identity families


@dataclass
class IdentityInstance:
    family: int
    label: str
    expr: FunctionalExpr
    verified: bool = False
    witness: list | None = None

    def to_dict(self):
        out = {"family": self.family, "instance": self.label, "verified": self.verified}
        if self.expr.is_zero():
            out["trivial"] = True
        if self.witness is not None:
            out["witness"] = [{"coefficient": scalar_str(c), **p.to_dict()} for c, p in self.witness]
        return out


@dataclass
class FamilyReport:
    family: int
    statement: str
    instances: list = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return all(i.verified for i in self.instances)

    @property
    def count(self) -> int:
        return len(self.instances)

    def to_dict(self):
        return {
            "family": self.family,
            "statement": self.statement,
            "instances": self.count,
            "verified": sum(1 for i in self.instances if i.verified),
            "status": "pass" if self.verified else "fail",
            "details": [i.to_dict() for i in self.instances],
        }


STATEMENTS = {
    1: "δ_ij c(u_ik⊗-) + c(u_ij⊗u_ik-) = 0 on A+ (j≠k)",
    2: "δ_ij c(u_ki⊗-) + c(u_ji⊗u_ki-) = 0 on A+ (j≠k)",
    3: "c(u_ij⊗u_ik) = 0 = c(u_ji⊗u_ki) (i, j, k distinct)",
    4: "c(u_ij⊗u_ii) = c(u_ii⊗u_ij) = c(u_ij⊗u_jj) = c(u_jj⊗u_ij)",
    5: "δ_ij c(u_ij⊗-) - c(u_ij⊗-) + c(u_ij⊗u_ij-) = 0 on A+",
    6: "2c(u_ii⊗u_ii) = Σ_j c(u_ij⊗u_ij) = Σ_j c(u_ji⊗u_ji)",
    7: "c(u_ji⊗u_ji) = -c(u_ii⊗u_ji) (i≠j)",
    8: "c(u_ii⊗X_ij) = c(X_ij⊗u_ii) = c(X_ij⊗u_jj) = c(u_jj⊗X_ij)",
}


def identity_instances(P) -> Iterable[IdentityInstance]:
    A = _as_algebra(P)
    P = A.presentation
    n, _ = _matrix_data(P)
    K = calculus(A)
    rng = range(1, n + 1)

    def g(i, j):
        return {(u(i, j),): ONE}

    def closed(a, b):
        return FunctionalExpr(K.closed(a, A.nf_terms(b)), ZERO, "closed")

    def opened(a, b=None):
        return FunctionalExpr(K.open(a, A.nf_terms(b) if b is not None else ()), ZERO, "open")

    def d(i, j):
        return 1 if i == j else 0

    for i, j, k in product(rng, rng, rng):
        if j != k:
            yield IdentityInstance(1, f"i={i} j={j} k={k}",
                                   d(i, j) * opened(g(i, k)) + opened(g(i, j), g(i, k)))
    for i, j, k in product(rng, rng, rng):
        if j != k:
            yield IdentityInstance(2, f"i={i} j={j} k={k}",
                                   d(i, j) * opened(g(k, i)) + opened(g(j, i), g(k, i)))
    for i, j, k in product(rng, rng, rng):
        if len({i, j, k}) == 3:
            yield IdentityInstance(3, f"c(u{i}{j}⊗u{i}{k}) i={i} j={j} k={k}", closed(g(i, j), g(i, k)))
            yield IdentityInstance(3, f"c(u{j}{i}⊗u{k}{i}) i={i} j={j} k={k}", closed(g(j, i), g(k, i)))
    for i, j in product(rng, rng):
        if i != j:
            chain = [closed(g(i, j), g(i, i)), closed(g(i, i), g(i, j)),
                     closed(g(i, j), g(j, j)), closed(g(j, j), g(i, j))]
            for s in range(3):
                yield IdentityInstance(4, f"i={i} j={j} equality {s + 1}", chain[s] - chain[s + 1])
    for i, j in product(rng, rng):
        yield IdentityInstance(5, f"i={i} j={j}",
                               (d(i, j) - 1) * opened(g(i, j)) + opened(g(i, j), g(i, j)))
    for i in rng:
        two = 2 * closed(g(i, i), g(i, i))
        rows = FunctionalExpr.zero()
        cols = FunctionalExpr.zero()
        for j in rng:
            rows = rows + closed(g(i, j), g(i, j))
            cols = cols + closed(g(j, i), g(j, i))
        yield IdentityInstance(6, f"i={i} row sum", two - rows)
        yield IdentityInstance(6, f"i={i} column sum", two - cols)
    for i, j in product(rng, rng):
        if i != j:
            yield IdentityInstance(7, f"i={i} j={j}", closed(g(j, i), g(j, i)) + closed(g(i, i), g(j, i)))
    for (i, j), x in sorted(_x_elements(P).items()):
        chain = [closed(g(i, i), x._t), closed(x._t, g(i, i)),
                 closed(x._t, g(j, j)), closed(g(j, j), x._t)]
        for s in range(3):
            yield IdentityInstance(8, f"i={i} j={j} equality {s + 1}", chain[s] - chain[s + 1])


def replay_lemma52(P, span: ConstraintSpan | None = None, strict: bool = True,
                   witness_limit: int | None = None) -> list:
    """Check every identity instance against the span; one report per family.

    Witnesses are searched for every instance, or for the first
    ``witness_limit`` instances of each family when a limit is given.
    """
    A = _as_algebra(P)
    if span is None:
        span = derive_identity_span(A)
    reports = {f: FamilyReport(f, STATEMENTS[f]) for f in STATEMENTS}
    for inst in identity_instances(A):
        rep = reports[inst.family]
        inst.verified = span.contains(inst.expr)
        if inst.verified and (witness_limit is None or rep.count < witness_limit):
            inst.witness = span.witness(inst.expr)
        rep.instances.append(inst)
        if strict and not inst.verified:
            raise IdentityNotDerivable(
                f"identity ({inst.family}) instance {inst.label} is not in the span", inst
            )
    return [reports[f] for f in sorted(reports)]


# ---------------------------------------------------------------------------
# the triangular algebra T3(A)


def _scale(terms: dict, k) -> dict:
    if not k:
        return {}
    return {w: k * c for w, c in terms.items()}


def _poly_dict(terms: dict) -> list:
    return [[word_str(w), scalar_str(c)] for w, c in sorted(terms.items(), key=lambda kv: word_key(kv[0]))]


@dataclass
class T3Elem:
    """``(lam f mu; 0 a b; 0 0 gam)`` acting on ``C ⊕ A+ ⊕ C``.

    ``f`` is an open expression, ``mu`` a closed one; ``a`` and ``b`` are
    normal-form term dicts with ``ε(b) = 0``.
    """

    lam: object
    f: FunctionalExpr
    mu: FunctionalExpr
    a: dict
    b: dict
    gam: object

    @classmethod
    def identity(cls) -> "T3Elem":
        return cls(ONE, FunctionalExpr.zero("open"), FunctionalExpr.zero("closed"),
                   {(): ONE}, {}, ONE)

    @classmethod
    def zero(cls) -> "T3Elem":
        return cls(ZERO, FunctionalExpr.zero("open"), FunctionalExpr.zero("closed"), {}, {}, ZERO)

    def __add__(self, other: "T3Elem") -> "T3Elem":
        a = dict(self.a)
        for w, c in other.a.items():
            _add(a, w, c)
        b = dict(self.b)
        for w, c in other.b.items():
            _add(b, w, c)
        return T3Elem(self.lam + other.lam, self.f + other.f, self.mu + other.mu,
                      a, b, self.gam + other.gam)

    def __rmul__(self, k) -> "T3Elem":
        k = Q(k)
        return T3Elem(k * self.lam, k * self.f, k * self.mu, _scale(self.a, k),
                      _scale(self.b, k), k * self.gam)

    def __sub__(self, other: "T3Elem") -> "T3Elem":
        return self + (-1) * other

    def entries(self) -> dict:
        return {"(1,1)": self.lam, "(1,2)": self.f, "(1,3)": self.mu,
                "(2,2)": self.a, "(2,3)": self.b, "(3,3)": self.gam}

    def to_dict(self) -> dict:
        return {
            "(1,1)": scalar_str(self.lam),
            "(1,2)": self.f.to_dict(),
            "(1,3)": self.mu.to_dict(),
            "(2,2)": _poly_dict(self.a),
            "(2,3)": _poly_dict(self.b),
            "(3,3)": scalar_str(self.gam),
        }


def _open_times(f: FunctionalExpr, a: dict, A: QuotientAlgebra) -> FunctionalExpr:
    """``m -> f(a m)``: ``c(g ⊗ w·-)`` becomes ``c(g ⊗ NF(w a)·-)``."""
    out: dict = {}
    for s, c in f.terms.items():
        for v, k in a.items():
            for x, e in A.nf_word(s.right + v).items():
                _add(out, FunctionalSym("open", s.left, x), c * k * e)
    return FunctionalExpr(out, ZERO, "open")


def _open_at(f: FunctionalExpr, b: dict, A: QuotientAlgebra) -> FunctionalExpr:
    """``f(b)`` for ``b`` in ``A+``; unit right slots vanish since ``c(g ⊗ 1) = 0``."""
    out: dict = {}
    for s, c in f.terms.items():
        for v, k in b.items():
            for x, e in A.nf_word(s.right + v).items():
                if x:
                    _add(out, FunctionalSym("closed", s.left, x), c * k * e)
    return FunctionalExpr(out, ZERO, "closed")


def t3_multiply(x: T3Elem, y: T3Elem, P) -> T3Elem:
    """Triangular matrix product, entries reduced in the quotient."""
    A = _as_algebra(P)
    if A.eps(y.b):
        raise IllFormed(f"(2,3) entry has ε = {scalar_str(A.eps(y.b))}, expected 0")
    lam = x.lam * y.lam
    f = x.lam * y.f + _open_times(x.f, y.a, A)
    mu = x.lam * y.mu + _open_at(x.f, y.b, A) + y.gam * x.mu
    a = A.nf_terms(_product(x.a, y.a))
    b = A.nf_terms(_product(x.a, y.b))
    for w, c in x.b.items():
        _add(b, w, c * y.gam)
    return T3Elem(lam, f, mu, a, b, x.gam * y.gam)


def rho_generator(A: QuotientAlgebra, g: Gen) -> T3Elem:
    """``ρ_c(u_ij) = (δ_ij, c(u_ij⊗-), λ_ij; u_ij, u_ij - δ_ij; δ_ij)``, ``λ_ij = -c(u_ii⊗u_ij)``."""
    if g.name != "u":
        raise IllFormed(f"ρ_c is defined on matrix generators, got {g}")
    i, j = g.i, g.j
    K = calculus(A)
    delta = ONE if i == j else ZERO
    a = A.nf_word((g,))
    b = dict(a)
    if delta:
        _add(b, (), -delta)
    lam = FunctionalExpr(K.closed({(u(i, i),): ONE}, a), ZERO, "closed")
    f = FunctionalExpr({FunctionalSym("open", g, ()): ONE}, ZERO, "open")
    return T3Elem(delta, f, -lam, a, b, delta)


class RhoMap:
    """``ρ_c`` extended multiplicatively to words and linearly to polynomials."""

    def __init__(self, A: QuotientAlgebra):
        self.A = A
        self._words: dict = {(): T3Elem.identity()}

    def word(self, w: Word) -> T3Elem:
        hit = self._words.get(w)
        if hit is None:
            hit = t3_multiply(self.word(w[:-1]), rho_generator(self.A, w[-1]), self.A)
            self._words[w] = hit
        return hit

    def __call__(self, p) -> T3Elem:
        out = T3Elem.zero()
        for w, c in _terms(p).items():
            out = out + c * self.word(w)
        return out


@dataclass
class RelationCheck:
    relator: str
    entries: dict  # entry -> "pass" | residue text
    verdict: str

    def to_dict(self):
        return {"relator": self.relator, "entries": self.entries, "verdict": self.verdict}


def _check_image(img: T3Elem, span: ConstraintSpan) -> dict:
    out = {}
    for name, value in img.entries().items():
        if isinstance(value, FunctionalExpr):
            rem = span.residue(value)
            out[name] = "pass" if not rem else str(FunctionalExpr(rem, ZERO, value.sort))
        elif isinstance(value, dict):
            out[name] = "pass" if not value else poly_text(value)
        else:
            out[name] = "pass" if not value else scalar_str(value)
    return out


def poly_text(terms: dict) -> str:
    return str(NCPoly(terms))


@dataclass
class H2Certificate:
    label: str
    n: int
    d_hash: str | None
    degree_window: int
    lemma52_status: list
    rho_relations: list
    conclusion: str
    failures: list = field(default_factory=list)
    span: dict = field(default_factory=dict)
    completion: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.conclusion == "verified"

    def to_dict(self) -> dict:
        return {
            "algebra": self.label,
            "n": self.n,
            "d_hash": self.d_hash,
            "degree_window": self.degree_window,
            "conclusion": self.conclusion,
            "identities": [r.to_dict() for r in self.lemma52_status],
            "rho_relations": [r.to_dict() for r in self.rho_relations],
            "failures": self.failures,
            "span": self.span,
            "completion": self.completion,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def to_markdown(self) -> str:
        lines = [
            f"# H² certificate for {self.label}",
            "",
            f"- n = {self.n}",
            f"- matrix digest: {self.d_hash or 'none'}",
            f"- degree window: {self.degree_window}",
            f"- conclusion: **{self.conclusion}**",
            f"- span: {self.span.get('rows', 0)} rows, open rank {self.span.get('open_rank', 0)}, "
            f"closed rank {self.span.get('closed_rank', 0)}",
            "",
            "## Cocycle identities",
            "",
            "| family | statement | instances | status |",
            "|---|---|---|---|",
        ]
        for r in self.lemma52_status:
            status = "pass" if r.verified else "fail"
            lines.append(f"| ({r.family}) | {r.statement} | {r.count} | {status} |")
        for r in self.lemma52_status:
            if not r.instances:
                continue
            lines += ["", f"### Family ({r.family})", ""]
            for inst in r.instances:
                mark = "pass" if inst.verified else "FAIL"
                lines.append(f"- {inst.label}: `{inst.expr} = 0` {mark}")
                for c, prov in inst.witness or ():
                    lines.append(f"  - {scalar_str(c)} × [{prov.source}] at {prov.point}")
        lines += ["", "## ρ_c on relators", "", "| relator | verdict | failing entries |", "|---|---|---|"]
        for rc in self.rho_relations:
            bad = ", ".join(f"{k}: {v}" for k, v in rc.entries.items() if v != "pass")
            lines.append(f"| `{rc.relator}` | {rc.verdict} | {bad or '-'} |")
        if self.failures:
            lines += ["", "## Failures", ""]
            lines += [f"- {json.dumps(f, ensure_ascii=False)}" for f in self.failures]
        return "\n".join(lines) + "\n"


def certify_h2_vanishing(P, D: int | None = None, check_relators=None, span: ConstraintSpan | None = None,
                         strict: bool = True, witness_limit: int | None = None,
                         saturate: bool = True) -> H2Certificate:
    """Replay the identity families and check that ρ_c kills every relator.

    ``check_relators`` replaces the relators of ``P`` in the ρ_c check (the
    span is still built from ``P``); used for negative controls.  With
    ``strict=True`` a failed relation raises :class:`RelationFails` carrying
    the certificate.
    """
    A = _as_algebra(P, D)
    P = A.presentation
    if span is None:
        span = derive_identity_span(A, saturate=saturate)
    families = replay_lemma52(A, span, strict=False, witness_limit=witness_limit)
    failures = []
    for fam in families:
        for inst in fam.instances:
            if not inst.verified:
                failures.append({"kind": "identity", "family": fam.family, "instance": inst.label,
                                 "residue": str(FunctionalExpr(span.residue(inst.expr), ZERO,
                                                               inst.expr.sort))})
    rho = RhoMap(A)
    relators = P.relators if check_relators is None else tuple(
        r if isinstance(r, NCPoly) else NCPoly.parse(r) for r in check_relators)
    checks = []
    for r in relators:
        entries = _check_image(rho(r), span)
        verdict = "pass" if all(v == "pass" for v in entries.values()) else "fail"
        checks.append(RelationCheck(str(r), entries, verdict))
        if verdict == "fail":
            failures.append({"kind": "relation", "relator": str(r),
                             "entries": {k: v for k, v in entries.items() if v != "pass"}})
    cert = H2Certificate(
        label=P.label,
        n=P.n,
        d_hash=P.matrix.digest() if P.matrix is not None else None,
        degree_window=A.degree,
        lemma52_status=families,
        rho_relations=checks,
        conclusion="failed" if failures else "verified",
        failures=failures,
        span=span.summary(),
        completion=A.certificate.to_dict(),
    )
    if strict and failures:
        first = failures[0]
        raise RelationFails(f"certificate failed: {json.dumps(first, ensure_ascii=False)}", cert, first)
    return cert


# ---------------------------------------------------------------------------
# concrete cochains


def _compact(values) -> np.ndarray:
    """int64 array when every value is an integer, else an object array of mpq."""
    vals = [Q(v) for v in values]
    if all(v.denominator == 1 and abs(v) < 2**40 for v in vals):
        return np.array([int(v) for v in vals], dtype=np.int64)
    return np.array(vals, dtype=object)


class WordTable:
    """Normal words through degree ``D`` with the products ``NF(v w)``, ``deg v + deg w <= D``.

    Products are stored row-wise in CSR layout over the word index, so that
    ``x -> (x(NF(v w)))_(v,w)`` is one vectorised pass.
    """

    def __init__(self, A: QuotientAlgebra, D: int):
        self.A, self.degree = A, D
        self.words = [w for k in range(D + 1) for w in A.normal_words(k)]
        self.index = {w: k for k, w in enumerate(self.words)}
        self.lengths = np.array([len(w) for w in self.words], dtype=np.int64)
        self.eps = _compact(A.eps_word(w) for w in self.words)
        by_degree = [[self.index[w] for w in A.normal_words(k)] for k in range(D + 1)]
        left, right, indptr, indices, data = [], [], [0], [], []
        for d1 in range(D + 1):
            for d2 in range(D - d1 + 1):
                for a in by_degree[d1]:
                    va = self.words[a]
                    for b in by_degree[d2]:
                        left.append(a)
                        right.append(b)
                        for x, c in A.nf_word(va + self.words[b]).items():
                            indices.append(self.index[x])
                            data.append(c)
                        indptr.append(len(indices))
        self.left = np.array(left, dtype=np.int64)
        self.right = np.array(right, dtype=np.int64)
        self.indptr = np.array(indptr, dtype=np.int64)
        self.indices = np.array(indices, dtype=np.int64)
        self.data = _compact(data)
        self.pair_index = {(a, b): k for k, (a, b) in enumerate(zip(left, right))}
        # first letter and remaining suffix of every non-unit normal word
        self.head = np.array([self.index[w[:1]] if w else -1 for w in self.words], dtype=np.int64)
        self.tail = np.array([self.index[w[1:]] if w else -1 for w in self.words], dtype=np.int64)
        self.split = np.array([self.pair_index[(self.head[k], self.tail[k])] if w else -1
                               for k, w in enumerate(self.words)], dtype=np.int64)
        self._letters: dict = {}

    def letters(self, gens: tuple) -> np.ndarray:
        """Letter positions in ``gens``, padded with ``len(gens)``."""
        hit = self._letters.get(gens)
        if hit is None:
            pos = {g: k for k, g in enumerate(gens)}
            hit = np.full((len(self.words), max(self.degree, 1)), len(gens), dtype=np.int64)
            for k, w in enumerate(self.words):
                for s, g in enumerate(w):
                    hit[k, s] = pos[g]
            self._letters[gens] = hit
        return hit

    def __len__(self):
        return len(self.left)

    def matvec(self, vec: np.ndarray) -> np.ndarray:
        """``(vec(NF(v w)))`` over all stored pairs."""
        prods = self.data * vec[self.indices]
        dtype = prods.dtype if len(prods) else vec.dtype
        out = np.zeros(len(self.left), dtype=dtype)
        if dtype == object:
            out[:] = ZERO
        nonempty = self.indptr[1:] > self.indptr[:-1]
        if len(prods):
            sums = np.add.reduceat(prods, self.indptr[:-1][nonempty])
            out[nonempty] = sums
        return out


_TABLES: dict = {}


def word_table(A: QuotientAlgebra, D: int) -> WordTable:
    key = (id(A), D)
    hit = _TABLES.get(key)
    if hit is None or hit.A is not A:
        for (a, d), t in list(_TABLES.items()):
            if a == id(A) and d > D and t.A is A:
                return t
        if len(_TABLES) > 8:
            _TABLES.clear()
        hit = _TABLES[key] = WordTable(A, D)
    return hit


class Functional:
    """A linear functional on ``A``, given by its values on normal words."""

    def __init__(self, A: QuotientAlgebra, word_value: Callable[[Word], object], name: str = "ψ",
                 vector: Callable[[WordTable], np.ndarray] | None = None):
        self.A = A
        self.name = name
        self._word_value = word_value
        self._vector = vector
        self._cache: dict = {}

    def word(self, w: Word):
        """Value on a normal word."""
        hit = self._cache.get(w)
        if hit is None:
            hit = self._cache[w] = Q(self._word_value(w))
        return hit

    def __call__(self, p):
        total = ZERO
        for w, c in self.A.nf_terms(_terms(p)).items():
            total += c * self.word(w)
        return total

    def vector(self, T: WordTable) -> np.ndarray:
        if self._vector is not None:
            return self._vector(T)
        return _compact(self.word(w) for w in T.words)

    def _combine(self, other, a, b, name):
        if other.A is not self.A:
            raise IllFormed("functionals live on different algebras")

        def value(w):
            return a * self.word(w) + b * other.word(w)

        def vec(T):
            return _lin(a, self.vector(T), b, other.vector(T))

        return Functional(self.A, value, name, vec)

    def __add__(self, other):
        return self._combine(other, ONE, ONE, f"({self.name} + {other.name})")

    def __sub__(self, other):
        return self._combine(other, ONE, -ONE, f"({self.name} - {other.name})")

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, k):
        k = Q(k)
        return Functional(self.A, lambda w: k * self.word(w), f"{scalar_str(k)}·{self.name}",
                          lambda T: _lin(k, self.vector(T), ZERO, None))

    def __repr__(self):
        return f"Functional({self.name})"


def _lin(a, x, b, y):
    def scaled(k, v):
        if k == 1:
            return v
        if k.denominator == 1 and v.dtype != object:
            return int(k) * v
        return np.array([k * t for t in v], dtype=object)

    out = scaled(Q(a), x)
    if y is not None and b:
        out = out + scaled(Q(b), y)
    return out


def character(A: QuotientAlgebra, values: Mapping, name: str = "χ") -> Functional:
    """The multiplicative functional with the given generator values."""
    vals = {g: Q(values[g]) for g in A.generators}

    def value(w):
        out = ONE
        for g in w:
            out *= vals[g]
            if not out:
                break
        return out

    def vec(T):
        gens = tuple(A.generators)
        table = _compact([vals[g] for g in gens] + [ONE])
        return np.prod(table[T.letters(gens)], axis=1)

    return Functional(A, value, name, vec)


def counit(A: QuotientAlgebra) -> Functional:
    return character(A, A.epsilon, "ε")


class Cocycle:
    """A bilinear form on ``A``, given by its values on pairs of normal words.

    When built as ``delta1(ψ)`` the primitive ``ψ`` is kept, which gives a
    vectorised evaluation over a :class:`WordTable`.
    """

    def __init__(self, A: QuotientAlgebra, pair_value: Callable[[Word, Word], object],
                 name: str = "c", primitive: Functional | None = None,
                 vector: Callable[[WordTable], np.ndarray] | None = None):
        self.A = A
        self.name = name
        self.primitive = primitive
        self._pair_value = pair_value
        self._vector = vector
        self._cache: dict = {}

    def pair(self, v: Word, w: Word):
        key = (v, w)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = Q(self._pair_value(v, w))
        return hit

    def __call__(self, a, b):
        A = self.A
        total = ZERO
        bs = A.nf_terms(_terms(b))
        for v, c in A.nf_terms(_terms(a)).items():
            for w, k in bs.items():
                total += c * k * self.pair(v, w)
        return total

    def vector(self, T: WordTable) -> np.ndarray:
        """Values on the stored pairs of ``T``."""
        if self._vector is not None:
            return self._vector(T)
        return _compact(self.pair(T.words[a], T.words[b]) for a, b in zip(T.left, T.right))

    def _combine(self, other, a, b, name):
        prim = None
        if self.primitive is not None and other.primitive is not None:
            prim = self.primitive._combine(other.primitive, a, b, f"∂{name}")

        def value(v, w):
            return a * self.pair(v, w) + b * other.pair(v, w)

        return Cocycle(self.A, value, name, prim,
                       lambda T: _lin(a, self.vector(T), b, other.vector(T)))

    def __add__(self, other):
        return self._combine(other, ONE, ONE, f"({self.name} + {other.name})")

    def __sub__(self, other):
        return self._combine(other, ONE, -ONE, f"({self.name} - {other.name})")

    def __rmul__(self, k):
        k = Q(k)
        prim = k * self.primitive if self.primitive is not None else None
        return Cocycle(self.A, lambda v, w: k * self.pair(v, w), f"{scalar_str(k)}·{self.name}", prim,
                       lambda T: _lin(k, self.vector(T), ZERO, None))

    def __repr__(self):
        return f"Cocycle({self.name})"


def delta1(psi: Functional) -> Cocycle:
    """``c(a⊗b) = ε(a)ψ(b) - ψ(ab) + ψ(a)ε(b)``."""
    A = psi.A
    eps = A.eps_word

    def value(v, w):
        return eps(v) * psi.word(w) - psi(A.nf_word(v + w)) + psi.word(v) * eps(w)

    def vec(T):
        x = psi.vector(T)
        e = T.eps
        return e[T.left] * x[T.right] - T.matvec(x) + x[T.left] * e[T.right]

    return Cocycle(A, value, f"δ({psi.name})", psi, vec)


def normalize_cocycle(c: Cocycle) -> Cocycle:
    """``c - δ1(c(1⊗1)·ε)``, which vanishes as soon as either slot is 1."""
    k = c.pair((), ())
    if not k:
        return c
    A = c.A
    eps = A.eps_word
    prim = c.primitive - k * counit(A) if c.primitive is not None else None

    def value(v, w):
        return c.pair(v, w) - k * eps(v) * eps(w)

    def vec(T):
        e = T.eps
        return _lin(ONE, c.vector(T), -k, e[T.left] * e[T.right])

    return Cocycle(A, value, f"norm({c.name})", prim, vec)


def star_defect(c: Cocycle, a, b, x):
    """``ε(a)c(b⊗x) - c(ab⊗x) + c(a⊗bx) - c(a⊗b)ε(x)``; zero for a cocycle."""
    A = c.A
    ta, tb, tx = (A.nf_terms(_terms(t)) for t in (a, b, x))
    return (A.eps(ta) * c(tb, tx) - c(A.nf_terms(_product(ta, tb)), tx)
            + c(ta, A.nf_terms(_product(tb, tx))) - c(ta, tb) * A.eps(tx))


def check_cocycle(c: Cocycle, samples: int = 64, seed: int = 0):
    """Normalisation plus a seeded sample of (★) instances; returns the first failure or ``None``."""
    A = c.A
    gens = list(A.free_generators())
    if c.pair((), ()):
        return {"instance": "c(1⊗1)", "value": scalar_str(c.pair((), ()))}
    for g in gens:
        for v, w in (((g,), ()), ((), (g,))):
            if c.pair(v, w):
                return {"instance": f"c({word_str(v)}⊗{word_str(w)})", "value": scalar_str(c.pair(v, w))}
    rng = random.Random(seed)
    points = [()] + [w for k in (1, 2) for w in A.normal_words(k)]
    for _ in range(samples):
        a, b = (rng.choice(gens),), (rng.choice(gens),)
        x = rng.choice(points)
        d = star_defect(c, a, b, x)
        if d:
            return {"instance": f"star({word_str(a)}, {word_str(b)}, {word_str(x)})",
                    "value": scalar_str(d)}
    return None


class PrimitiveExtractor:
    """The (1,3) entry of ``ρ_c`` evaluated through a concrete cocycle.

    On words ``φ(g w) = ε(g)φ(w) + c(g⊗w) + λ_g ε(w)`` with
    ``λ_g = -c(u_ii⊗u_ij)`` for ``g = u_ij``; then ``c = δ1(-φ)``.
    """

    def __init__(self, A: QuotientAlgebra, c: Cocycle, check: bool = True, seed: int = 0):
        if check:
            bad = check_cocycle(c, seed=seed)
            if bad is not None:
                raise NotACocycle(f"cocycle identity fails at {bad['instance']}", bad)
        self.A, self.c = A, c
        self._lam = {}
        for g in A.generators:
            if g.name != "u":
                raise IllFormed(f"primitive extraction needs matrix generators, got {g}")
            self._lam[g] = -c((u(g.i, g.i),), (g,))
        self._memo: dict = {(): ZERO}

    def word(self, w: Word):
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        A, c = self.A, self.c
        # iterate over suffixes from the shortest so the recursion stays flat
        for k in range(len(w) - 1, -1, -1):
            s = w[k:]
            if s in self._memo:
                continue
            g, rest = s[0], s[1:]
            er = A.eps_word(rest)
            val = A.eps_word((g,)) * self._memo[rest] + c((g,), rest)
            if er:
                val += self._lam[g] * er
            self._memo[s] = val
        return self._memo[w]

    def raw(self, p):
        """Value computed on the given words, before any reduction."""
        return sum((c * self.word(w) for w, c in _terms(p).items()), ZERO)

    def __call__(self, target):
        terms = _terms(target)
        value = self.raw(terms)
        reduced = self.A.nf_terms(terms)
        if reduced != terms:
            other = self.raw(reduced)
            if other != value:
                raise RepresentativeMismatch(
                    f"primitive differs on two representatives: {scalar_str(value)} vs {scalar_str(other)}",
                    {"target": poly_text(terms), "normal_form": poly_text(reduced),
                     "values": [scalar_str(value), scalar_str(other)]},
                )
        return value

    def vector(self, T: WordTable) -> np.ndarray:
        """Values on the normal words of ``T``, one degree at a time."""
        cvals = self.c.vector(T)
        lam = {T.index[(g,)]: v for g, v in self._lam.items() if (g,) in T.index}
        out = np.zeros(len(T.words), dtype=object)
        out[:] = ZERO
        if cvals.dtype != object and T.eps.dtype != object and all(v.denominator == 1 for v in lam.values()):
            out = np.zeros(len(T.words), dtype=np.int64)
            lam = {k: int(v) for k, v in lam.items()}
        lam_arr = np.zeros(len(T.words), dtype=out.dtype)
        if out.dtype == object:
            lam_arr[:] = ZERO
        for k, v in lam.items():
            lam_arr[k] = v
        for d in range(1, T.degree + 1):
            ws = np.nonzero(T.lengths == d)[0]
            if not len(ws):
                continue
            h, t = T.head[ws], T.tail[ws]
            out[ws] = T.eps[h] * out[t] + cvals[T.split[ws]] + lam_arr[h] * T.eps[t]
        return out


def primitive(P, c: Cocycle, check: bool = True, seed: int = 0) -> Functional:
    """``φ`` with ``c = δ1(-φ)``, read off ``ρ_c``."""
    ex = PrimitiveExtractor(c.A, c, check, seed)
    return Functional(c.A, ex.word, f"prim({c.name})", ex.vector)


def extract_primitive(P, c: Cocycle, target, check: bool = True, seed: int = 0):
    """``φ(target)`` for the primitive ``φ`` of ``c`` (so that ``c = δ1(-φ)``).

    Raises :class:`RepresentativeMismatch` when ``target`` and its normal form
    give different values, and :class:`NotACocycle` when ``c`` fails the
    sampled cocycle identity or is not normalised.
    """
    return PrimitiveExtractor(c.A, c, check, seed)(target)


class CoboundaryVerdict:
    """Truthy when ``c = δ1(phi)`` on the window; otherwise carries a witness pair."""

    def __init__(self, ok: bool, degree: int, pairs: int, witness: dict | None = None):
        self.ok, self.degree, self.pairs, self.witness = ok, degree, pairs, witness

    def __bool__(self):
        return self.ok

    def __eq__(self, other):
        return bool(self) == other if isinstance(other, bool) else NotImplemented

    def __repr__(self):
        return f"CoboundaryVerdict({self.ok}, pairs={self.pairs}, witness={self.witness})"

    def to_dict(self):
        return {"result": self.ok, "degree_window": self.degree, "pairs": self.pairs,
                "witness": self.witness}


def verify_coboundary(c: Cocycle, phi: Functional, P=None, D: int = DEFAULT_WINDOW) -> CoboundaryVerdict:
    """Whether ``c(a⊗b) = δ1(phi)(a⊗b)`` for all normal pairs with ``deg a + deg b <= D``."""
    A = c.A
    T = word_table(A, D)
    lhs = c.vector(T)
    rhs = delta1(phi).vector(T)
    keep = (T.lengths[T.left] + T.lengths[T.right]) <= D
    diff = np.nonzero((lhs != rhs) & keep)[0]
    if len(diff):
        k = int(diff[0])
        v, w = T.words[T.left[k]], T.words[T.right[k]]
        return CoboundaryVerdict(False, D, int(keep.sum()), {
            "pair": [word_str(v), word_str(w)],
            "c": scalar_str(Q(lhs[k])),
            "delta1(phi)": scalar_str(Q(rhs[k])),
        })
    return CoboundaryVerdict(True, D, int(keep.sum()))


def evaluate_expr(expr: FunctionalExpr, c: Cocycle, point: Word = ()) -> object:
    """Value of a symbolic row under a concrete cocycle.

    Open rows are functionals on the augmentation ideal, so they are
    evaluated at ``point - ε(point)·1``.
    """
    if expr.sort != "open":
        return sum((k * c((s.left,), s.right) for s, k in expr.terms.items()), ZERO)
    e = c.A.eps_word(point)
    total = ZERO
    for s, k in expr.terms.items():
        total += k * c((s.left,), s.right + point)
        if e:
            total -= k * e * c((s.left,), s.right)
    return total
