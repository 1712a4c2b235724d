"""Reference computations that share no code with the package.

Linear algebra goes through sympy, algebras are given by explicit bases and
multiplication rules, and representations are plain matrices of Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import sympy


# ---------------------------------------------------------------------------
# cohomology of small algebras


def truncated_h2_graded(basis_by_degree: dict, mult, D: int) -> int:
    """Windowed H^2 count for a connected graded algebra with ε = 0 in positive degree.

    ``mult(a, b)`` returns a dict basis-label -> coefficient.  Unknowns are
    c(a⊗b) with deg a + deg b <= D, constraints are the cocycle identity on
    triples inside the window, coboundaries come from functionals on basis
    elements of degree <= D.
    """
    deg = {w: k for k, ws in basis_by_degree.items() for w in ws}
    pos = [w for k in sorted(basis_by_degree) if k >= 1 for w in basis_by_degree[k]]
    pairs = [(a, b) for a in pos for b in pos if deg[a] + deg[b] <= D]
    col = {p: k for k, p in enumerate(pairs)}
    rows = []
    for a, b, x in product(pos, pos, pos):
        if deg[a] + deg[b] + deg[x] > D:
            continue
        row = [0] * len(pairs)
        for w, c in mult(a, b).items():
            row[col[(w, x)]] -= c
        for w, c in mult(b, x).items():
            row[col[(a, w)]] += c
        rows.append(row)
    C = sympy.Matrix(rows) if rows else sympy.zeros(0, len(pairs))
    cob = []
    for w in pos:
        v = [0] * len(pairs)
        for (a, b), k in col.items():
            v[k] = -mult(a, b).get(w, 0)
        cob.append(v)
    B = sympy.Matrix(cob).T if cob else sympy.zeros(len(pairs), 0)
    if rows and cob:
        assert (C * B).is_zero_matrix
    zdim = len(pairs) - (C.rank() if rows else 0)
    return zdim - (B.rank() if cob else 0)


def exact_h2_finite(basis: list, mult, eps: dict) -> int:
    """H^2 with trivial coefficients of a finite-dimensional augmented algebra.

    ``basis`` spans the augmentation ideal; ``mult`` maps two basis labels
    to a dict on ``basis`` (the product stays in the ideal).
    """
    idx = {w: k for k, w in enumerate(basis)}
    m = len(basis)
    pairs = list(product(basis, basis))
    pcol = {p: k for k, p in enumerate(pairs)}
    # δ1 ψ (a⊗b) = -ψ(ab) on the ideal
    d1 = sympy.zeros(len(pairs), m)
    for (a, b), r in pcol.items():
        for w, c in mult(a, b).items():
            d1[r, idx[w]] -= c
    d2 = sympy.zeros(m ** 3, len(pairs))
    for r, (a, b, x) in enumerate(product(basis, basis, basis)):
        for w, c in mult(a, b).items():
            d2[r, pcol[(w, x)]] -= c
        for w, c in mult(b, x).items():
            d2[r, pcol[(a, w)]] += c
    assert (d2 * d1).is_zero_matrix
    return len(pairs) - d2.rank() - d1.rank()


def plane_algebra(D: int):
    """k[x, y] with monomials (i, j), ε = 0."""
    basis = {k: [(i, k - i) for i in range(k + 1)] for k in range(D + 1)}

    def mult(a, b):
        return {(a[0] + b[0], a[1] + b[1]): 1}

    return basis, mult


def free_algebra(letters: int, D: int):
    basis = {k: list(product(range(letters), repeat=k)) for k in range(D + 1)}

    def mult(a, b):
        return {a + b: 1}

    return basis, mult


def dual_numbers(D: int):
    basis = {0: [()], 1: ["x"]}
    basis.update({k: [] for k in range(2, D + 1)})
    return basis, lambda a, b: {}


# ---------------------------------------------------------------------------
# representations


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum((A[i][t] * B[t][j] for t in range(k)), Fraction(0)) for j in range(m)] for i in range(n)]


def mat_add(A, B, c=1):
    return [[a + c * b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(n):
    return [[Fraction(0)] * n for _ in range(n)]


def magic_unitary_4(row_perm=(0, 1, 2, 3), col_perm=(0, 1, 2, 3)):
    """A non-commutative rational 4x4 magic unitary over 2x2 matrices.

    Blocks ``[[p, 1-p], [1-p, p]]`` and ``[[q, 1-q], [1-q, q]]`` with
    non-commuting projections ``p, q``; permuting rows and columns keeps
    the magic property.
    """
    half = Fraction(1, 2)
    p = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(0)]]
    q = [[half, half], [half, half]]
    one = identity(2)
    P1, Q1 = mat_add(one, p, -1), mat_add(one, q, -1)
    Z = zeros(2)
    grid = [[p, P1, Z, Z], [P1, p, Z, Z], [Z, Z, q, Q1], [Z, Z, Q1, q]]
    return {(i + 1, j + 1): grid[row_perm[i]][col_perm[j]] for i in range(4) for j in range(4)}


def evaluate(terms: dict, images: dict, size: int):
    """Evaluate ``{word: coeff}`` (words of (i, j) pairs) in matrices ``images``."""
    out = zeros(size)
    for w, c in terms.items():
        m = identity(size)
        for g in w:
            m = mat_mul(m, images[g])
        out = mat_add(out, m, Fraction(c))
    return out


# ---------------------------------------------------------------------------
# known dimensions


def quantum_permutation_dims(n: int, k: int) -> list:
    """Dimension of the degree-``j`` coefficient space, ``j <= k``, for ``n >= 4``.

    Irreducibles r_0, r_1, ... obey ``r_1 ⊗ r_j = r_{j-1} + r_j + r_{j+1}`` with
    ``dim r_1 = n - 1``, and the new words of degree ``j`` span ``End(r_j)``.
    """
    d = [1, n - 1]
    while len(d) <= k:
        d.append((n - 2) * d[-1] - d[-2])
    return [x * x for x in d[: k + 1]]


def character_value(word, sigma) -> int:
    """``u_ij -> [i = σ(j)]`` on a word of (i, j) pairs; ``sigma`` is 1-based images."""
    return int(all(i == sigma[j - 1] for i, j in word))
