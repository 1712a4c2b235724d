"""Sparse exact linear algebra over the rationals.

Vectors are dicts ``column -> Scalar`` with no stored zeros.  Columns may be
any hashable; a ``key`` function fixes the pivot order so that results are
deterministic.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable

from .ncalg import ONE


def axpy(acc: dict, row: dict, coef) -> None:
    """``acc += coef * row`` in place, dropping cancelled entries."""
    get = acc.get
    for col, c in row.items():
        v = get(col, 0) + coef * c
        if v:
            acc[col] = v
        else:
            del acc[col]


class Echelon:
    """Incremental row echelon form with monic rows.

    Each stored row has a pivot, its largest column under ``key``.  With
    ``full=True`` no row has a nonzero entry in another row's pivot column.
    Reducing a vector always clears every pivot column.
    """

    def __init__(self, key: Callable[[Hashable], object] | None = None, full: bool = False):
        self.key = key
        self.full = full
        self.rows: dict = {}  # pivot -> monic row

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _lead(self, v: dict):
        return max(v, key=self.key) if self.key else max(v)

    def reduce(self, v: dict) -> dict:
        """Remainder of ``v`` modulo the stored span (a new dict)."""
        v = dict(v)
        rows = self.rows
        if self.full:
            for col in [c for c in v if c in rows]:
                c = v.get(col)
                if c:
                    axpy(v, rows[col], -c)
            return v
        # rows are only partially reduced: clear the largest live pivot first,
        # since a row only touches columns below its own pivot
        key = self.key
        while True:
            live = [c for c in v if c in rows]
            if not live:
                return v
            col = max(live, key=key) if key else max(live)
            axpy(v, rows[col], -v[col])

    def add(self, v: dict):
        """Insert ``v``; returns the new pivot or ``None`` if ``v`` was dependent."""
        r = self.reduce(v)
        if not r:
            return None
        piv = self._lead(r)
        inv = ONE / r[piv]
        if inv != 1:
            r = {c: a * inv for c, a in r.items()}
        if self.full:
            for other in self.rows.values():
                c = other.get(piv)
                if c:
                    axpy(other, r, -c)
        self.rows[piv] = r
        return piv

    def extend(self, vectors: Iterable[dict]) -> list:
        return [p for p in (self.add(v) for v in vectors) if p is not None]


def rank(vectors: Iterable[dict], key=None) -> int:
    ech = Echelon(key=key)
    ech.extend(vectors)
    return ech.rank
