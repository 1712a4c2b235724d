"""Quantum permutation algebras from parameters, and checks of their Hopf maps.

Builders return ``(Presentation, HopfStructure)`` pairs:

* :func:`build_as` -- the quantum permutation algebra ``A_s(n)``;
* :func:`build_asd` -- its quotient ``A_s(n, d)`` making ``u`` commute with ``d``;
* :func:`build_ahp` -- the quantum reflection algebra ``A_h^p(n)``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .errors import (
    CheckFailed,
    DimensionMismatch,
    InconsistentAugmentation,
    InsufficientCompletion,
    NotAnAutomorphism,
    NotSquare,
    ParseError,
)
from .ncalg import (
    ONE,
    ZERO,
    Gen,
    NCPoly,
    Q,
    TensorElem,
    apply_gen_map,
    parse_gen,
    parse_poly,
    scalar_str,
    u,
)
from .rewrite import CompletionCertificate, RewriteSystem, complete


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class MatrixSpec:
    """Square matrix of exact rationals, indexed from 1 in :meth:`entry`."""

    n: int
    entries: tuple
    source: str = "explicit"

    def __post_init__(self):
        rows = tuple(tuple(Q(x) for x in row) for row in self.entries)
        if len(rows) != self.n or any(len(row) != self.n for row in rows):
            raise NotSquare(f"expected a {self.n}x{self.n} matrix")
        if self.source not in ("explicit", "graph", "cycles"):
            raise ParseError(f"unknown matrix source {self.source!r}")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], source: str = "explicit") -> "MatrixSpec":
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise NotSquare(f"matrix with {n} rows has row lengths {[len(r) for r in rows]}")
        return cls(n, tuple(tuple(r) for r in rows), source)

    @classmethod
    def zero(cls, n: int) -> "MatrixSpec":
        return cls(n, tuple((0,) * n for _ in range(n)))

    @classmethod
    def identity(cls, n: int) -> "MatrixSpec":
        return cls(n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def entry(self, i: int, j: int):
        return self.entries[i - 1][j - 1]

    def __matmul__(self, other: "MatrixSpec") -> "MatrixSpec":
        if other.n != self.n:
            raise DimensionMismatch("matrix sizes differ")
        n = self.n
        rows = [[sum((self.entries[i][k] * other.entries[k][j] for k in range(n)), ZERO)
                 for j in range(n)] for i in range(n)]
        return MatrixSpec.from_rows(rows, "explicit")

    def power(self, k: int) -> "MatrixSpec":
        out = MatrixSpec.identity(self.n)
        for _ in range(k):
            out = out @ self
        return out

    def permuted(self, perm: Sequence[int]) -> "MatrixSpec":
        """Relabel vertices: new entry (perm[a], perm[b]) = old entry (a, b), 1-based."""
        n = self.n
        rows = [[ZERO] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                rows[perm[a] - 1][perm[b] - 1] = self.entries[a][b]
        return MatrixSpec.from_rows(rows, self.source)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def digest(self) -> str:
        text = ";".join(",".join(scalar_str(x) for x in row) for row in self.entries)
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "entries": [[scalar_str(x) for x in row] for row in self.entries],
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "MatrixSpec":
        try:
            n = data["n"]
            entries = data["entries"]
        except (KeyError, TypeError):
            raise ParseError("matrix document needs 'n' and 'entries'") from None
        if not isinstance(n, int) or n < 1:
            raise ParseError("'n' must be a positive integer")
        if not isinstance(entries, list) or any(not isinstance(r, list) for r in entries):
            raise ParseError("'entries' must be a list of rows")
        rows = []
        for r, row in enumerate(entries):
            parsed = []
            for c, x in enumerate(row):
                if isinstance(x, bool) or not isinstance(x, (str, int)):
                    raise ParseError(f"entry [{r}][{c}] must be a 'p/q' string or integer")
                try:
                    parsed.append(Q(str(x)))
                except ParseError as exc:
                    raise ParseError(f"entry [{r}][{c}]: {exc}") from None
            rows.append(parsed)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise NotSquare(f"'n' is {n} but entries are {len(rows)}x"
                            f"{[len(row) for row in rows]}")
        return cls(n, tuple(tuple(row) for row in rows), data.get("source", "explicit"))


def cycle_graph_adjacency(n: int, p: int) -> MatrixSpec:
    """Adjacency matrix of ``n`` disjoint oriented ``p``-cycles (size ``np``)."""
    if n < 1 or p < 1:
        raise ValueError("need n >= 1 and p >= 1")
    size = n * p
    rows = [[0] * size for _ in range(size)]
    for block in range(n):
        base = block * p
        for a in range(p):
            rows[base + a][base + (a + 1) % p] = 1
    return MatrixSpec.from_rows(rows, "cycles")


def petersen_adjacency() -> MatrixSpec:
    """Petersen graph: outer 5-cycle, inner pentagram, spokes."""
    rows = [[0] * 10 for _ in range(10)]
    edges = []
    for k in range(5):
        edges.append((k, (k + 1) % 5))
        edges.append((5 + k, 5 + (k + 2) % 5))
        edges.append((k, 5 + k))
    for a, b in edges:
        rows[a][b] = rows[b][a] = 1
    return MatrixSpec.from_rows(rows, "graph")


def complete_graph_adjacency(n: int) -> MatrixSpec:
    return MatrixSpec.from_rows([[int(i != j) for j in range(n)] for i in range(n)], "graph")


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True, eq=False)
class Presentation:
    n: int
    generators: tuple
    relators: tuple
    epsilon: Mapping = field(repr=False)
    label: str = ""
    matrix: MatrixSpec | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", _dedupe(self.relators))
        object.__setattr__(self, "epsilon", {g: Q(v) for g, v in self.epsilon.items()})
        for k, r in enumerate(self.relators):
            if apply_gen_map(r, self.epsilon) != 0:
                raise InconsistentAugmentation(
                    f"augmentation does not kill relator #{k}: {r}"
                )

    def _key(self):
        return (self.n, self.generators, self.relators, self.label,
                tuple(sorted(self.epsilon.items())))

    def __eq__(self, other):
        return isinstance(other, Presentation) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def max_relator_degree(self) -> int:
        return max((r.degree for r in self.relators), default=0)

    def with_relators(self, relators: Iterable[NCPoly], label: str | None = None) -> "Presentation":
        return Presentation(self.n, self.generators, tuple(relators), self.epsilon,
                            label if label is not None else self.label, self.matrix)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "label": self.label,
            "generators": [str(g) for g in self.generators],
            "relators": [str(r) for r in self.relators],
            "epsilon": {str(g): scalar_str(v) for g, v in sorted(self.epsilon.items())},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Presentation":
        gens = tuple(parse_gen(g) for g in data["generators"])
        eps = {parse_gen(g): Q(v) for g, v in data.get("epsilon", {}).items()}
        for g in gens:
            eps.setdefault(g, ZERO)
        return cls(int(data.get("n", 0)), gens, tuple(parse_poly(r) for r in data["relators"]),
                   eps, data.get("label", ""))


def _dedupe(relators) -> tuple:
    out = {}
    for r in relators:
        if not isinstance(r, NCPoly):
            r = parse_poly(r) if isinstance(r, str) else NCPoly(r)
        if r:
            out.setdefault(r, None)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class HopfStructure:
    delta: Mapping
    counit: Mapping
    antipode: Mapping


def free_presentation(names: Sequence[str], relators: Iterable = (), epsilon: Mapping | None = None,
                      label: str = "") -> Presentation:
    """Presentation on named generators (``x``, ``y``, ...), augmentation 0 by default."""
    gens = tuple(Gen(name) for name in names)
    eps = {g: ZERO for g in gens}
    for key, value in (epsilon or {}).items():
        eps[Gen(key) if isinstance(key, str) else key] = Q(value)
    rels = tuple(parse_poly(r) if isinstance(r, str) else r for r in relators)
    return Presentation(0, gens, rels, eps, label or f"<{','.join(names)}>")


def _delta(i, j) -> int:
    return 1 if i == j else 0


def _matrix_gens(n):
    return tuple(u(i, j) for i in range(1, n + 1) for j in range(1, n + 1))


def _standard_hopf(n, antipode=None) -> HopfStructure:
    delta = {u(i, j): sum((TensorElem.pure(NCPoly.gen(u(i, k)), NCPoly.gen(u(k, j)))
                           for k in range(1, n + 1)), TensorElem.zero())
             for i in range(1, n + 1) for j in range(1, n + 1)}
    counit = {u(i, j): Q(_delta(i, j)) for i in range(1, n + 1) for j in range(1, n + 1)}
    if antipode is None:
        antipode = {u(i, j): NCPoly.gen(u(j, i)) for i in range(1, n + 1) for j in range(1, n + 1)}
    return HopfStructure(delta, counit, antipode)


def _as_relators(n) -> list:
    rels = []
    rng = range(1, n + 1)
    for i in rng:
        for j in rng:
            for k in rng:
                rels.append(NCPoly.word((u(i, j), u(i, k))) - _delta(j, k) * NCPoly.gen(u(i, j)))
    for i in rng:
        for j in rng:
            for k in rng:
                rels.append(NCPoly.word((u(j, i), u(k, i))) - _delta(j, k) * NCPoly.gen(u(j, i)))
    for i in rng:
        rels.append(NCPoly({(u(i, j),): 1 for j in rng}) - 1)
        rels.append(NCPoly({(u(j, i),): 1 for j in rng}) - 1)
    return rels


def build_as(n: int):
    """``A_s(n)``: magic-unitary relations, ``ε(u_ij) = δ_ij``, ``S(u_ij) = u_ji``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    gens = _matrix_gens(n)
    eps = {u(i, j): _delta(i, j) for i in range(1, n + 1) for j in range(1, n + 1)}
    P = Presentation(n, gens, tuple(_as_relators(n)), eps, f"A_s({n})")
    return P, _standard_hopf(n)


def d_relators(n: int, d: MatrixSpec) -> list:
    """``Σ_k d_ik u_kj - Σ_k u_ik d_kj`` for all ``(i, j)``, zero ones dropped."""
    rng = range(1, n + 1)
    out = []
    for i in rng:
        for j in rng:
            terms = {}
            for k in rng:
                a = d.entry(i, k)
                if a:
                    terms[(u(k, j),)] = terms.get((u(k, j),), ZERO) + a
                b = d.entry(k, j)
                if b:
                    terms[(u(i, k),)] = terms.get((u(i, k),), ZERO) - b
            p = NCPoly(terms)
            if p:
                out.append(p)
    return out


def x_element(d: MatrixSpec, i: int, j: int, side: str = "left") -> NCPoly:
    """``X_ij = Σ_k d_ik u_kj`` (``side="left"``) or ``Σ_k u_ik d_kj``."""
    n = d.n
    terms = {}
    for k in range(1, n + 1):
        if side == "left":
            c, g = d.entry(i, k), u(k, j)
        else:
            c, g = d.entry(k, j), u(i, k)
        if c:
            terms[(g,)] = terms.get((g,), ZERO) + c
    return NCPoly(terms)


def build_asd(n: int, d: MatrixSpec):
    """``A_s(n, d)``: ``A_s(n)`` with ``d u = u d``; same Hopf maps."""
    if d.n != n:
        raise DimensionMismatch(f"matrix is {d.n}x{d.n}, expected {n}x{n}")
    P0, H = build_as(n)
    label = f"A_s({n},d[{d.source}:{d.digest()}])"
    P = Presentation(n, P0.generators, P0.relators + tuple(d_relators(n, d)), P0.epsilon, label, d)
    return P, H


def build_ahp(n: int, p: int):
    """Quantum reflection algebra ``A_h^p(n)``.

    Relations ``u_ij u_ik = 0 = u_ji u_ki`` (k != j) and ``Σ_j u_ij^p = 1 = Σ_j u_ji^p``;
    antipode ``S(u_ij) = u_ji^(p-1)``.  For ``p = 1`` the antipode is ``u_ji``, the
    ``p -> 1`` reading of ``u^(p-1) = u^(2p-1)`` that holds in the algebra.
    """
    if n < 1 or p < 1:
        raise ValueError("need n >= 1 and p >= 1")
    rng = range(1, n + 1)
    rels = []
    for i in rng:
        for j in rng:
            for k in rng:
                if k != j:
                    rels.append(NCPoly.word((u(i, j), u(i, k))))
                    rels.append(NCPoly.word((u(j, i), u(k, i))))
    for i in rng:
        rels.append(NCPoly({(u(i, j),) * p: 1 for j in rng}) - 1)
        rels.append(NCPoly({(u(j, i),) * p: 1 for j in rng}) - 1)
    eps = {u(i, j): _delta(i, j) for i in rng for j in rng}
    power = p - 1 if p >= 2 else 1
    antipode = {u(i, j): NCPoly.word((u(j, i),) * power) for i in rng for j in rng}
    P = Presentation(n, _matrix_gens(n), tuple(rels), eps, f"A_h^{p}({n})")
    return P, _standard_hopf(n, antipode)


# ---------------------------------------------------------------------------
# quotient algebra context


class QuotientAlgebra:
    """A presentation together with its rewrite system completed through ``degree``."""

    def __init__(self, presentation: Presentation, degree: int,
                 base: RewriteSystem | None = None):
        self.presentation = presentation
        self.degree = degree
        if base is None:
            base = RewriteSystem.from_relators(presentation.relators, presentation.generators)
        if degree < base.max_lhs_degree:
            raise InsufficientCompletion(
                f"degree window {degree} is below the relator degree {base.max_lhs_degree}"
            )
        self.rewrite, self.certificate = complete(base, degree)
        self.epsilon = presentation.epsilon
        self._eps_cache: dict = {}

    @property
    def generators(self):
        return self.presentation.generators

    def nf(self, p: NCPoly) -> NCPoly:
        return self.rewrite.normal_form(p)

    def nf_word(self, w) -> dict:
        return self.rewrite.nf_word(w)

    def nf_terms(self, terms: dict) -> dict:
        return self.rewrite.nf_terms(terms)

    def mul(self, a: NCPoly, b: NCPoly) -> NCPoly:
        return self.nf(a * b)

    def eps_word(self, w) -> object:
        hit = self._eps_cache.get(w)
        if hit is None:
            hit = ONE
            for g in w:
                hit = hit * self.epsilon[g]
                if not hit:
                    break
            self._eps_cache[w] = hit
        return hit

    def eps(self, p) -> object:
        terms = p._t if isinstance(p, NCPoly) else p
        total = ZERO
        for w, c in terms.items():
            total += c * self.eps_word(w)
        return total

    def normal_words(self, degree: int) -> list:
        return self.rewrite.normal_words(degree)

    def normal_words_upto(self, degree: int) -> list:
        return self.rewrite.normal_words_upto(degree)

    def free_generators(self):
        return self.rewrite.free_generators()


_QUOTIENTS: dict = {}
_QUOTIENT_LIMIT = 16


def quotient(presentation: Presentation, degree: int) -> QuotientAlgebra:
    """Memoised :class:`QuotientAlgebra`; a wider window extends a cached narrower one."""
    key = (presentation, degree)
    hit = _QUOTIENTS.get(key)
    if hit is not None:
        return hit
    lower = [d for (P, d) in _QUOTIENTS if P == presentation and d < degree]
    base = _QUOTIENTS[(presentation, max(lower))].rewrite if lower else None
    A = QuotientAlgebra(presentation, degree, base)
    if len(_QUOTIENTS) >= _QUOTIENT_LIMIT:
        del _QUOTIENTS[next(iter(_QUOTIENTS))]
    _QUOTIENTS[key] = A
    return A


# ---------------------------------------------------------------------------
# characters


def parse_permutation(sigma, n: int) -> tuple:
    """Normalise ``sigma`` (sequence of images of 1..n, or a mapping) to a tuple."""
    if isinstance(sigma, Mapping):
        images = tuple(sigma[j] for j in range(1, n + 1))
    else:
        images = tuple(sigma)
    if sorted(images) != list(range(1, n + 1)):
        raise ValueError(f"{sigma!r} is not a permutation of 1..{n}")
    return images


def permutation_character(P: Presentation, sigma) -> dict:
    """Character ``u_ij -> [i = σ(j)]``; raises unless it kills every relator."""
    images = parse_permutation(sigma, P.n)
    chi = {u(i, j): Q(int(i == images[j - 1]))
           for i in range(1, P.n + 1) for j in range(1, P.n + 1)}
    for k, r in enumerate(P.relators):
        if apply_gen_map(r, chi) != 0:
            raise NotAnAutomorphism(f"σ={images} does not kill relator #{k}: {r}")
    return chi


def matrix_automorphisms(d: MatrixSpec) -> list:
    """All permutations σ (as image tuples) with ``d[σ(a), σ(b)] = d[a, b]``."""
    n = d.n
    e = d.entries
    found = []
    sigma = [0] * n
    used = [False] * n

    def extend(a):
        if a == n:
            found.append(tuple(s + 1 for s in sigma))
            return
        for t in range(n):
            if used[t]:
                continue
            ok = e[t][t] == e[a][a]
            b = 0
            while ok and b < a:
                s = sigma[b]
                ok = e[t][s] == e[a][b] and e[s][t] == e[b][a]
                b += 1
            if ok:
                sigma[a] = t
                used[t] = True
                extend(a + 1)
                used[t] = False

    extend(0)
    return found


def automorphisms(P: Presentation) -> list:
    if P.matrix is not None:
        return matrix_automorphisms(P.matrix)
    return [tuple(p) for p in permutations(range(1, P.n + 1))]


# ---------------------------------------------------------------------------
# Hopf structure


@dataclass
class HopfCheck:
    check: str
    index: int
    item: str
    passed: bool
    witness: str = ""

    def to_dict(self):
        return {"check": self.check, "index": self.index, "item": self.item,
                "status": "pass" if self.passed else "fail", "witness": self.witness}


@dataclass
class HopfReport:
    label: str
    degree_window: int
    completion: CompletionCertificate
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> dict:
        out = {}
        for c in self.checks:
            s = out.setdefault(c.check, {"pass": 0, "fail": 0})
            s["pass" if c.passed else "fail"] += 1
        return out

    def to_dict(self):
        return {
            "label": self.label,
            "degree_window": self.degree_window,
            "completion": self.completion.to_dict(),
            "status": "pass" if self.passed else "fail",
            "summary": self.summary(),
            "checks": [c.to_dict() for c in self.checks],
        }


def _reduce_tensor(A: QuotientAlgebra, t: TensorElem) -> TensorElem:
    leg = lambda w: NCPoly._raw(A.nf_word(w))  # noqa: E731
    return t.map_legs(leg, leg)


def hopf_well_definedness(P: Presentation, H: HopfStructure, D: int, strict: bool = True) -> HopfReport:
    """Check that counit, coproduct and antipode descend to the quotient.

    (a) counit kills relators, (b) Δ(r) vanishes in A⊗A, (c) S(r) vanishes
    with S an anti-homomorphism, (d) ``m(S⊗id)Δ(g) = m(id⊗S)Δ(g) = ε(g)1``.
    """
    if D < P.max_relator_degree:
        raise InsufficientCompletion(f"window {D} below relator degree {P.max_relator_degree}")
    A = quotient(P, D)
    checks = []
    for k, r in enumerate(P.relators):
        item = str(r)
        value = apply_gen_map(r, H.counit)
        checks.append(HopfCheck("counit", k, item, value == 0, "" if value == 0 else str(value)))
        red = _reduce_tensor(A, apply_gen_map(r, H.delta, unit=TensorElem.one()))
        checks.append(HopfCheck("coproduct", k, item, red.is_zero(), "" if red.is_zero() else str(red)))
        s = A.nf(apply_gen_map(r, H.antipode, "antihom", unit=NCPoly.one()))
        checks.append(HopfCheck("antipode", k, item, s.is_zero(), "" if s.is_zero() else str(s)))
    for k, g in enumerate(P.generators):
        if g not in H.delta:
            continue
        target = NCPoly.constant(H.counit[g])
        for side in ("left", "right"):
            acc = NCPoly.zero()
            for (w1, w2), c in H.delta[g]._t.items():
                a, b = NCPoly.word(w1), NCPoly.word(w2)
                if side == "left":
                    a = apply_gen_map(a, H.antipode, "antihom", unit=NCPoly.one())
                else:
                    b = apply_gen_map(b, H.antipode, "antihom", unit=NCPoly.one())
                acc = acc + c * (a * b)
            diff = A.nf(acc) - target
            checks.append(HopfCheck(f"antipode_identity_{side}", k, str(g), diff.is_zero(),
                                    "" if diff.is_zero() else str(diff)))
    report = HopfReport(P.label, D, A.certificate, checks)
    if strict and not report.passed:
        bad = report.failures()[0]
        raise CheckFailed(f"{bad.check} check failed on {bad.item}: {bad.witness}",
                          report=report, witness=bad)
    return report


def matrix_from_json(text: str) -> MatrixSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    return MatrixSpec.from_dict(data)
