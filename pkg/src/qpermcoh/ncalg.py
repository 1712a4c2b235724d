"""Exact noncommutative polynomials over the rationals.

Words are tuples of :class:`Gen`; polynomials map words to ``gmpy2.mpq``
coefficients.  The monomial order is degree-lexicographic over the fixed
generator order ``(name, i, j)``.
"""

from __future__ import annotations

import numbers
import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping, NamedTuple

from gmpy2 import mpq

from .errors import MissingImage, ParseError

Scalar = type(mpq(0))

ZERO = mpq(0)
ONE = mpq(1)


def Q(value) -> Scalar:
    """Coerce ``value`` to an exact rational.

    Accepts ints, ``Fraction``, ``mpq`` and strings of the form ``"p/q"``.
    """
    if isinstance(value, Scalar):
        return value
    if isinstance(value, str):
        text = value.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            raise ParseError(f"not a rational literal: {value!r}")
        try:
            return mpq(text)
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in {value!r}") from None
    if isinstance(value, float):
        raise TypeError("floating-point scalars are not supported")
    if isinstance(value, (int, Fraction)):
        return mpq(value)
    if isinstance(value, numbers.Integral):
        return mpq(int(value))
    return mpq(value)


def scalar_str(c: Scalar) -> str:
    c = Q(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Gen(NamedTuple):
    """A generator: ``u[i,j]`` for matrix generators, a bare name otherwise."""

    name: str
    i: int = 0
    j: int = 0

    def __str__(self):
        if self.i or self.j:
            return f"{self.name}[{self.i},{self.j}]"
        return self.name

    def __repr__(self):
        return str(self)


def u(i: int, j: int) -> Gen:
    return Gen("u", i, j)


Word = tuple  # tuple[Gen, ...]; the empty tuple is the unit word


def word_key(w: Word):
    return (len(w), w)


def word_str(w: Word) -> str:
    if not w:
        return "1"
    return "*".join(str(g) for g in w)


def _add_into(acc: dict, terms: Mapping, coef=ONE) -> dict:
    """acc += coef * terms, dropping cancelled entries."""
    if coef == 0:
        return acc
    for w, c in terms.items():
        v = acc.get(w, ZERO) + coef * c
        if v:
            acc[w] = v
        else:
            acc.pop(w, None)
    return acc


def _mul_terms(p: Mapping, q: Mapping) -> dict:
    out: dict = {}
    for w1, c1 in p.items():
        for w2, c2 in q.items():
            w = w1 + w2
            v = out.get(w, ZERO) + c1 * c2
            if v:
                out[w] = v
            else:
                out.pop(w, None)
    return out


class NCPoly:
    """Immutable element of the free algebra ``Q<gens>``."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping | None = None):
        t = {}
        if terms:
            for w, c in terms.items():
                c = Q(c)
                if c:
                    t[tuple(w)] = c
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "NCPoly":
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p._t = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def one(cls):
        return cls._raw({(): ONE})

    @classmethod
    def constant(cls, c):
        c = Q(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def gen(cls, g: Gen, coef=1):
        return cls({(g,): coef})

    @classmethod
    def word(cls, w: Iterable[Gen], coef=1):
        return cls({tuple(w): coef})

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        """Terms in descending monomial order (leading term first)."""
        return sorted(self._t.items(), key=lambda kv: word_key(kv[0]), reverse=True)

    def words(self):
        return [w for w, _ in self.items()]

    def coefficient(self, w: Word) -> Scalar:
        return self._t.get(tuple(w), ZERO)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def __len__(self):
        return len(self._t)

    @property
    def degree(self) -> int:
        if not self._t:
            return -1
        return max(len(w) for w in self._t)

    @property
    def leading_word(self) -> Word:
        if not self._t:
            raise ValueError("zero polynomial has no leading word")
        return max(self._t, key=word_key)

    @property
    def leading_coeff(self) -> Scalar:
        return self._t[self.leading_word]

    @property
    def constant_term(self) -> Scalar:
        return self._t.get((), ZERO)

    def generators(self) -> set:
        return {g for w in self._t for g in w}

    def homogeneous_part(self, degree: int) -> "NCPoly":
        return NCPoly._raw({w: c for w, c in self._t.items() if len(w) == degree})

    # arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, NCPoly):
            return other
        if isinstance(other, Gen):
            return NCPoly.gen(other)
        return NCPoly.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        return NCPoly._raw(_add_into(dict(self._t), other._t))

    __radd__ = __add__

    def __neg__(self):
        return NCPoly._raw({w: -c for w, c in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        return NCPoly._raw(_add_into(dict(self._t), other._t, -ONE))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (NCPoly, Gen)):
            return multiply(self, self._coerce(other))
        c = Q(other)
        if not c:
            return NCPoly.zero()
        return NCPoly._raw({w: c * v for w, v in self._t.items()})

    def __rmul__(self, other):
        if isinstance(other, Gen):
            return multiply(NCPoly.gen(other), self)
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = NCPoly.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self._t == other._t
        if isinstance(other, (int, Fraction, Scalar)):
            return self._t == NCPoly.constant(other)._t
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def reverse(self) -> "NCPoly":
        return reverse(self)

    def __str__(self):
        return poly_str(self)

    def __repr__(self):
        return f"NCPoly({poly_str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "NCPoly":
        return parse_poly(text)


def multiply(p: NCPoly, q: NCPoly) -> NCPoly:
    return NCPoly._raw(_mul_terms(p._t, q._t))


def reverse(p: NCPoly) -> NCPoly:
    return NCPoly._raw({w[::-1]: c for w, c in p._t.items()})


# ---------------------------------------------------------------------------
# tensor square


class TensorElem:
    """Element of ``F ⊗ F`` as a sparse map ``(left word, right word) -> coefficient``."""

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping | None = None):
        t = {}
        if terms:
            for (w1, w2), c in terms.items():
                c = Q(c)
                if c:
                    t[(tuple(w1), tuple(w2))] = c
        self._t = t

    @classmethod
    def _raw(cls, terms):
        x = cls.__new__(cls)
        x._t = terms
        return x

    @classmethod
    def one(cls):
        return cls._raw({((), ()): ONE})

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def pure(cls, p: NCPoly, q: NCPoly) -> "TensorElem":
        out = {}
        for w1, c1 in p._t.items():
            for w2, c2 in q._t.items():
                out[(w1, w2)] = c1 * c2
        return cls._raw(out)

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def is_zero(self):
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def __len__(self):
        return len(self._t)

    def __add__(self, other):
        if not isinstance(other, TensorElem):
            other = TensorElem._raw({((), ()): Q(other)} if Q(other) else {})
        return TensorElem._raw(_add_into(dict(self._t), other._t))

    __radd__ = __add__

    def __neg__(self):
        return TensorElem._raw({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TensorElem):
            return tensor_multiply(self, other)
        c = Q(other)
        if not c:
            return TensorElem.zero()
        return TensorElem._raw({k: c * v for k, v in self._t.items()})

    def __rmul__(self, other):
        return self.__mul__(other)

    def __eq__(self, other):
        if isinstance(other, TensorElem):
            return self._t == other._t
        return NotImplemented

    __hash__ = None

    def map_legs(self, left: Callable[[Word], NCPoly], right: Callable[[Word], NCPoly]) -> "TensorElem":
        """Apply linear maps given on words to each leg and re-expand bilinearly."""
        out: dict = {}
        for (w1, w2), c in self._t.items():
            p, q = left(w1), right(w2)
            for v1, a in p._t.items():
                for v2, b in q._t.items():
                    k = (v1, v2)
                    v = out.get(k, ZERO) + c * a * b
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
        return TensorElem._raw(out)

    def items(self):
        return sorted(self._t.items(), key=lambda kv: (word_key(kv[0][0]), word_key(kv[0][1])), reverse=True)

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for (w1, w2), c in self.items():
            parts.append(_term_str(c, f"({word_str(w1)})⊗({word_str(w2)})", unit=False))
        return _join_terms(parts)

    def __repr__(self):
        return f"TensorElem({str(self)!r})"


def tensor_multiply(s: TensorElem, t: TensorElem) -> TensorElem:
    out: dict = {}
    for (a1, b1), c1 in s._t.items():
        for (a2, b2), c2 in t._t.items():
            k = (a1 + a2, b1 + b2)
            v = out.get(k, ZERO) + c1 * c2
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return TensorElem._raw(out)


# ---------------------------------------------------------------------------
# generator maps


def _unit_like(sample):
    if isinstance(sample, NCPoly):
        return NCPoly.one()
    if isinstance(sample, TensorElem):
        return TensorElem.one()
    one = getattr(type(sample), "one", None)
    if callable(one):
        return one()
    return ONE


def apply_gen_map(p: NCPoly, images: Mapping, mode: str = "hom", unit=None):
    """Extend ``images`` (generator -> target element) to ``p``.

    ``mode="hom"`` multiplies images in word order, ``mode="antihom"`` in
    reverse order.  The target only needs ``+``, ``*`` and a scalar action;
    ``unit`` defaults to the unit of the images' type.
    """
    if mode not in ("hom", "antihom"):
        raise ValueError(f"unknown mode {mode!r}")
    if unit is None:
        sample = next(iter(images.values()), None) if images else None
        unit = _unit_like(sample) if sample is not None else ONE
    total = None
    for w, c in p._t.items():
        letters = w if mode == "hom" else w[::-1]
        value = unit
        for g in letters:
            try:
                img = images[g]
            except KeyError:
                raise MissingImage(f"no image for generator {g}") from None
            value = value * img
        term = c * value
        total = term if total is None else total + term
    if total is None:
        return unit * ZERO
    return total


# ---------------------------------------------------------------------------
# text serialisation


def _term_str(c: Scalar, body: str, unit: bool) -> str:
    if unit:
        return scalar_str(c)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{scalar_str(c)}*{body}"


def _join_terms(parts: list[str]) -> str:
    out = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            out += " - " + part[1:]
        else:
            out += " + " + part
    return out


def poly_str(p: NCPoly) -> str:
    if not p._t:
        return "0"
    return _join_terms([_term_str(c, word_str(w), not w) for w, c in p.items()])


_TOKEN = re.compile(
    r"\s*(?:(?P<gen>[A-Za-z_][A-Za-z_0-9]*(?:\[\s*\d+\s*,\s*\d+\s*\])?)"
    r"|(?P<num>\d+(?:/\d+)?)|(?P<op>[+\-*]))"
)


def parse_gen(text: str) -> Gen:
    m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z_0-9]*)(?:\[\s*(\d+)\s*,\s*(\d+)\s*\])?\s*", text)
    if not m:
        raise ParseError(f"not a generator: {text!r}")
    name, i, j = m.groups()
    if i is None:
        return Gen(name)
    return Gen(name, int(i), int(j))


def parse_word(text: str) -> Word:
    text = text.strip()
    if text == "1":
        return ()
    return tuple(parse_gen(part) for part in text.split("*"))


def parse_poly(text: str) -> NCPoly:
    """Parse the textual form produced by :func:`poly_str`."""
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character in {text!r}", 1, pos + 1)
        tokens.append((m.lastgroup, m.group(m.lastgroup), pos))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    if not tokens:
        raise ParseError("empty polynomial")
    if tokens == [("num", "0", 0)]:
        return NCPoly.zero()
    acc: dict = {}
    k = 0
    while k < len(tokens):
        sign = ONE
        if tokens[k][0] == "op" and tokens[k][1] in "+-":
            sign = -ONE if tokens[k][1] == "-" else ONE
            k += 1
        elif k > 0:
            raise ParseError("expected + or -", 1, tokens[k][2] + 1)
        coef = ONE
        word: list = []
        expect_factor = True
        while k < len(tokens) and not (tokens[k][0] == "op" and tokens[k][1] in "+-"):
            kind, val, where = tokens[k]
            if kind == "op":  # '*'
                if expect_factor:
                    raise ParseError("dangling '*'", 1, where + 1)
                expect_factor = True
            elif not expect_factor:
                raise ParseError("missing '*'", 1, where + 1)
            elif kind == "num":
                coef *= Q(val)
                expect_factor = False
            else:
                word.append(parse_gen(val))
                expect_factor = False
            k += 1
        if expect_factor:
            raise ParseError("incomplete term", 1, len(text))
        _add_into(acc, {tuple(word): sign * coef})
    return NCPoly._raw(acc)
