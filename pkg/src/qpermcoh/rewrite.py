"""Normal forms in finitely presented algebras.

Relations are oriented on their deglex-leading word, giving degree-nonincreasing
rules ``lhs -> rhs``.  :func:`complete` resolves every overlap ambiguity of
total degree at most ``D`` (a truncated noncommutative Buchberger /
Knuth-Bendix procedure), so statements about the result are always qualified
by that degree window.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import asdict, dataclass
from typing import Iterable, NamedTuple

from .errors import InsufficientCompletion, NonOrientable, ParseError
from .linalg import Echelon
from .ncalg import (
    ONE,
    ZERO,
    Gen,
    NCPoly,
    Q,
    Word,
    _add_into,
    parse_gen,
    parse_poly,
    parse_word,
    poly_str,
    word_key,
    word_str,
)


class RewriteRule(NamedTuple):
    lhs: Word
    rhs: NCPoly

    def __str__(self):
        return f"{word_str(self.lhs)} -> {poly_str(self.rhs)}"

    @property
    def relation(self) -> NCPoly:
        """``lhs - rhs`` as an element of the ideal."""
        return NCPoly.word(self.lhs) - self.rhs


@dataclass(frozen=True)
class CompletionCertificate:
    resolved_overlaps: int
    added_rules: int
    degree_bound: int
    stable: bool
    rule_count: int = 0

    def to_dict(self):
        return asdict(self)


class _Reducer:
    """Mutable rule table with memoised normal-form routines.

    For a normal word ``w`` the word ``w*g`` can only contain a redex ending
    at ``g``, and ``g*w`` only one starting at ``g``.  Normal forms are
    therefore folds of single-letter steps, cached in both directions.
    """

    def __init__(self, rules: dict | None = None):
        self.rules: dict = dict(rules or {})
        self.lengths: list = []
        self._right: dict = {}  # (w, g) -> NF(w g)
        self._left: dict = {}  # (g, w) -> NF(g w)
        self.rhs_normal = False
        self._refresh()

    def _refresh(self):
        self.lengths = sorted({len(l) for l in self.rules}, reverse=True)
        self._right.clear()
        self._left.clear()

    def add(self, lhs, rhs_terms):
        self.rules[lhs] = rhs_terms
        self.rhs_normal = False
        self._refresh()

    def remove(self, lhs):
        del self.rules[lhs]
        self._refresh()

    def normalize(self):
        """Bring every right-hand side to normal form."""
        if self.rhs_normal:
            return
        rules = self.rules
        for lhs in sorted(rules, key=word_key):
            rules[lhs] = self.reduce(rules[lhs])
        self._refresh()
        self.rhs_normal = True

    def _times_gen(self, w: Word, g: Gen) -> dict:
        x = w + (g,)
        rules = self.rules
        out = None
        n = len(x)
        for length in self.lengths:
            if length <= n:
                rhs = rules.get(x[n - length:])
                if rhs is not None:
                    prefix = x[: n - length]
                    out = {}
                    short = self.rhs_normal and len(prefix) < 2
                    for m, c in rhs.items():
                        if short:
                            _add_into(out, self.lmul_word(prefix, m), c)
                        else:
                            _add_into(out, self.mul_word(prefix, m), c)
                    break
        if out is None:
            out = {x: ONE}
        self._right[(w, g)] = out
        return out

    def _gen_times(self, g: Gen, w: Word) -> dict:
        x = (g,) + w
        rules = self.rules
        out = None
        n = len(x)
        for length in self.lengths:
            if length <= n:
                rhs = rules.get(x[:length])
                if rhs is not None:
                    rest = x[length:]
                    out = {}
                    short = self.rhs_normal and len(rest) < 2
                    for m, c in rhs.items():
                        if short:
                            _add_into(out, self.mul_word(m, rest), c)
                        else:
                            _add_into(out, self.lmul_word(m, rest), c)
                    break
        if out is None:
            out = {x: ONE}
        self._left[(g, w)] = out
        return out

    def mul_word(self, prefix: Word, m: Word) -> dict:
        """Normal form of ``prefix * m`` where ``prefix`` is already normal."""
        cur = {prefix: ONE}
        cache = self._right
        for g in m:
            nxt: dict = {}
            get = nxt.get
            for w, c in cur.items():
                r = cache.get((w, g))
                if r is None:
                    r = self._times_gen(w, g)
                if c == 1:
                    for x, a in r.items():
                        nxt[x] = get(x, 0) + a
                else:
                    for x, a in r.items():
                        nxt[x] = get(x, 0) + c * a
            cur = {x: a for x, a in nxt.items() if a}
            if not cur:
                break
        return cur

    def lmul_word(self, m: Word, suffix: Word) -> dict:
        """Normal form of ``m * suffix`` where ``suffix`` is already normal."""
        cur = {suffix: ONE}
        cache = self._left
        for g in reversed(m):
            nxt: dict = {}
            get = nxt.get
            for w, c in cur.items():
                r = cache.get((g, w))
                if r is None:
                    r = self._gen_times(g, w)
                if c == 1:
                    for x, a in r.items():
                        nxt[x] = get(x, 0) + a
                else:
                    for x, a in r.items():
                        nxt[x] = get(x, 0) + c * a
            cur = {x: a for x, a in nxt.items() if a}
            if not cur:
                break
        return cur

    def reduce(self, terms: dict) -> dict:
        out: dict = {}
        for w, c in terms.items():
            _add_into(out, self.mul_word((), w), c)
        return out

    def is_normal(self, w: Word) -> bool:
        n = len(w)
        rules = self.rules
        for length in self.lengths:
            for start in range(0, n - length + 1):
                if w[start:start + length] in rules:
                    return False
        return True


class RewriteSystem:
    """Oriented, inter-reduced rules plus the degree through which they are complete."""

    order = "deglex"

    def __init__(self, rules: Iterable[RewriteRule], generators: Iterable[Gen] = (),
                 completed_through: int = 0):
        table = {}
        for rule in rules:
            lhs = tuple(rule.lhs)
            if not lhs:
                raise NonOrientable("rule with empty left-hand side")
            rhs = rule.rhs if isinstance(rule.rhs, NCPoly) else NCPoly(rule.rhs)
            for w in rhs._t:
                if word_key(w) >= word_key(lhs):
                    raise NonOrientable(f"rule {word_str(lhs)} -> {rhs} is not decreasing")
            table[lhs] = dict(rhs._t)
        gens = set(generators)
        for lhs, rhs in table.items():
            gens.update(lhs)
            for w in rhs:
                gens.update(w)
        self.generators = tuple(sorted(gens))
        self.completed_through = completed_through
        self._red = _Reducer(table)
        self._normal_words: list = [[()]]

    # construction ---------------------------------------------------------
    @classmethod
    def from_relators(cls, relators: Iterable[NCPoly], generators: Iterable[Gen] = ()):
        """Orient and inter-reduce the relators, resolving no overlaps."""
        comp = _Completion(_Reducer(), degree_bound=0)
        for r in relators:
            comp.push_relation(dict(r._t))
        comp.run()
        return cls._from_reducer(comp.red, generators, 0)

    @classmethod
    def _from_reducer(cls, red: _Reducer, generators, completed_through):
        rs = cls.__new__(cls)
        gens = set(generators)
        for lhs, rhs in red.rules.items():
            gens.update(lhs)
            for w in rhs:
                gens.update(w)
        rs.generators = tuple(sorted(gens))
        rs.completed_through = completed_through
        rs._red = red
        rs._normal_words = [[()]]
        return rs

    # queries ----------------------------------------------------------------
    @property
    def rules(self) -> list:
        return [RewriteRule(lhs, NCPoly._raw(dict(rhs)))
                for lhs, rhs in sorted(self._red.rules.items(), key=lambda kv: word_key(kv[0]))]

    def __len__(self):
        return len(self._red.rules)

    @property
    def max_lhs_degree(self) -> int:
        return max(self._red.lengths, default=0)

    def normal_form(self, p: NCPoly) -> NCPoly:
        return NCPoly._raw(self._red.reduce(p._t))

    def nf_terms(self, terms: dict) -> dict:
        return self._red.reduce(terms)

    def nf_word(self, w: Word) -> dict:
        """Normal form of a single word as a term dict (shared; do not mutate)."""
        return self._red.mul_word((), tuple(w))

    def nf_product(self, v: Word, w: Word) -> dict:
        """Normal form of ``v*w`` for a normal word ``v``."""
        return self._red.mul_word(v, w)

    def is_normal(self, w: Word) -> bool:
        return self._red.is_normal(tuple(w))

    def free_generators(self) -> tuple:
        return tuple(g for g in self.generators if (g,) not in self._red.rules)

    def normal_words(self, degree: int) -> list:
        """Normal words of exactly ``degree`` letters, in increasing deglex order."""
        layers = self._normal_words
        letters = self.free_generators()
        rules = self._red.rules
        lengths = self._red.lengths
        while len(layers) <= degree:
            nxt = []
            for w in layers[-1]:
                for g in letters:
                    x = w + (g,)
                    n = len(x)
                    if any(l <= n and x[n - l:] in rules for l in lengths):
                        continue
                    nxt.append(x)
            layers.append(nxt)
        return list(layers[degree])

    def normal_words_upto(self, degree: int) -> list:
        out = []
        for k in range(degree + 1):
            out.extend(self.normal_words(k))
        return out

    # certification ----------------------------------------------------------
    def overlaps(self, max_degree: int):
        """All overlap ambiguities ``(word, lhs1, lhs2, shift)`` of degree <= max_degree.

        ``word = lhs1 + lhs2[k:]`` with ``lhs1[-k:] == lhs2[:k]`` and 0 < k.
        """
        by_prefix: dict = {}
        for lhs in self._red.rules:
            for k in range(1, len(lhs)):
                by_prefix.setdefault(lhs[:k], []).append(lhs)
        out = []
        for left in self._red.rules:
            for k in range(1, len(left)):
                for right in by_prefix.get(left[-k:], ()):
                    if len(right) > k and len(left) + len(right) - k <= max_degree:
                        out.append((left + right[k:], left, right, k))
        out.sort(key=lambda t: (len(t[0]), t[0], t[1], t[2]))
        return out

    def check_local_confluence(self, max_degree: int) -> list:
        """Overlaps whose two one-step reductions have different normal forms."""
        failures = []
        red = self._red
        for word, left, right, k in self.overlaps(max_degree):
            s = _s_polynomial(red, word, left, right, k)
            if s:
                failures.append((word, left, right, NCPoly._raw(s)))
        return failures

    # serialisation ----------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "completed_through": self.completed_through,
            "generators": [str(g) for g in self.generators],
            "rules": [{"lhs": word_str(r.lhs), "rhs": poly_str(r.rhs)} for r in self.rules],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "RewriteSystem":
        if data.get("order", "deglex") != "deglex":
            raise ParseError(f"unsupported monomial order {data.get('order')!r}")
        rules = [RewriteRule(parse_word(r["lhs"]), parse_poly(r["rhs"])) for r in data["rules"]]
        gens = [parse_gen(g) for g in data.get("generators", [])]
        return cls(rules, gens, int(data.get("completed_through", 0)))

    @classmethod
    def from_json(cls, text: str) -> "RewriteSystem":
        return cls.from_dict(json.loads(text))


def _s_polynomial(red: _Reducer, word, left, right, k) -> dict:
    # word = left * right[k:] = word[:len(word)-len(right)] * right
    tail = right[k:]
    head = word[: len(word) - len(right)]
    out: dict = {}
    if red.rhs_normal:
        for m, c in red.rules[left].items():
            _add_into(out, red.mul_word(m, tail), c)
        for m, c in red.rules[right].items():
            _add_into(out, red.lmul_word(head, m), -c)
    else:
        for m, c in red.rules[left].items():
            _add_into(out, red.mul_word((), m + tail), c)
        for m, c in red.rules[right].items():
            _add_into(out, red.lmul_word(head + m, ()), -c)
    return out


class _Completion:
    """Truncated completion, processing overlaps in batches of equal degree.

    A batch is reduced against a frozen rule table (so the normal-form cache
    survives the whole batch), echelonised, and then inserted in one go.
    """

    batch_size = 4096

    def __init__(self, red: _Reducer, degree_bound: int):
        self.red = red
        self.D = degree_bound
        self.pending: list = []  # relations to insert
        self.pairs: list = []  # heap of overlaps
        self.by_prefix: dict = {}
        self.by_suffix: dict = {}
        self.resolved = 0
        self.added = 0
        self.added_at: dict = {}
        self.current_degree = 0

    def push_relation(self, terms: dict):
        self.pending.append(terms)

    def _index(self, lhs):
        for k in range(1, len(lhs)):
            self.by_prefix.setdefault(lhs[:k], set()).add(lhs)
            self.by_suffix.setdefault(lhs[-k:], set()).add(lhs)

    def _unindex(self, lhs):
        for k in range(1, len(lhs)):
            self.by_prefix[lhs[:k]].discard(lhs)
            self.by_suffix[lhs[-k:]].discard(lhs)

    def _new_pairs(self, lhs, floor: int = 0):
        """Queue overlaps of ``lhs`` with indexed rules, of degree in (floor, D]."""
        D = self.D
        n = len(lhs)
        push = heapq.heappush
        for k in range(1, n):
            for other in self.by_prefix.get(lhs[-k:], ()):
                deg = n + len(other) - k
                if len(other) > k and floor < deg <= D:
                    push(self.pairs, (deg, lhs + other[k:], lhs, other, k))
            for other in self.by_suffix.get(lhs[:k], ()):
                deg = n + len(other) - k
                if len(other) > k and floor < deg <= D and other != lhs:
                    push(self.pairs, (deg, other + lhs[k:], other, lhs, k))

    def _next_batch(self) -> list:
        red = self.red
        if self.pending:
            batch = [red.reduce(t) for t in self.pending]
            self.pending = []
            return batch
        rules = red.rules
        deg = self.pairs[0][0]
        self.current_degree = deg
        batch = []
        while self.pairs and self.pairs[0][0] == deg and len(batch) < self.batch_size:
            _, word, left, right, k = heapq.heappop(self.pairs)
            if left not in rules or right not in rules:
                continue
            self.resolved += 1
            s = _s_polynomial(red, word, left, right, k)
            if s:
                batch.append(s)
        return batch

    def _insert_batch(self, batch: list):
        ech = Echelon(key=word_key, full=True)
        ech.extend(t for t in batch if t)
        if not ech.rows:
            return
        red = self.red
        new = {}
        for lead, row in ech.rows.items():
            if not lead:
                raise NonOrientable(
                    "relation reduces to a nonzero scalar; the ideal is the whole algebra"
                )
            new[lead] = {w: -c for w, c in row.items() if w != lead}
        lengths = sorted({len(l) for l in new})
        # a rule (old or new) whose lhs contains another new lhs is not reduced
        stale = []
        for l in list(red.rules) + list(new):
            n = len(l)
            hit = False
            for k in lengths:
                if k > n:
                    break
                for s in range(n - k + 1):
                    sub = l[s:s + k]
                    if sub != l and sub in new:
                        hit = True
                        break
                if hit:
                    break
            if hit:
                stale.append(l)
        for l in stale:
            rhs = new.pop(l, None)
            if rhs is None:
                rhs = red.rules.pop(l)
                self._unindex(l)
            rel = {l: ONE}
            _add_into(rel, rhs, -ONE)
            self.pending.append(rel)
        red.rules.update(new)
        red.rhs_normal = False
        red._refresh()
        red.normalize()
        self.added += len(new)
        self.added_at[self.current_degree] = self.added_at.get(self.current_degree, 0) + len(new)
        for lhs in new:
            self._index(lhs)
        for lhs in sorted(new, key=word_key):
            self._new_pairs(lhs)

    def run(self):
        red = self.red
        while self.pending or self.pairs:
            self._insert_batch(self._next_batch())
        red.rhs_normal = False
        red.normalize()


def complete(rs: RewriteSystem, D: int):
    """Resolve every overlap of degree <= D.  Returns ``(system, certificate)``.

    Overlaps of degree at most ``rs.completed_through`` are already known to
    resolve, so extending a window only examines the new degrees.
    """
    if D < rs.max_lhs_degree:
        raise InsufficientCompletion(
            f"degree bound {D} is below the maximal rule degree {rs.max_lhs_degree}"
        )
    floor = rs.completed_through if rs.completed_through < D else 0
    red = _Reducer({lhs: dict(rhs) for lhs, rhs in rs._red.rules.items()})
    red.normalize()
    comp = _Completion(red, D)
    for lhs in red.rules:
        comp._index(lhs)
    for lhs in list(red.rules):
        comp._new_pairs(lhs, floor)
    comp.run()
    cert = CompletionCertificate(
        resolved_overlaps=comp.resolved,
        added_rules=comp.added,
        degree_bound=D,
        stable=comp.added_at.get(D, 0) == 0,
        rule_count=len(red.rules),
    )
    return RewriteSystem._from_reducer(red, rs.generators, D), cert


def normal_form(p: NCPoly, rs: RewriteSystem) -> NCPoly:
    return rs.normal_form(p)


def ideal_member(p: NCPoly, rs: RewriteSystem, D: int = 0) -> bool:
    """``True`` iff ``p`` reduces to zero; only sound inside the completed window."""
    need = max(D, p.degree)
    if need > rs.completed_through:
        raise InsufficientCompletion(
            f"system completed through degree {rs.completed_through}, need {need}"
        )
    return rs.normal_form(p).is_zero()


__all__ = [
    "CompletionCertificate",
    "RewriteRule",
    "RewriteSystem",
    "complete",
    "ideal_member",
    "normal_form",
    "Q",
    "ZERO",
]
