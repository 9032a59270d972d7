"""Exact linear algebra over Q and prime fields.

Matrices are numpy object arrays (or anything ``np.array`` accepts) holding
Python ints or :class:`fractions.Fraction`; nothing here touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

DEFAULT_PRIME = 32003


def zeros(nrows: int, ncols: int) -> np.ndarray:
    return np.zeros((nrows, ncols), dtype=object)


def as_object(mat, shape: tuple[int, int] | None = None) -> np.ndarray:
    a = np.array(mat, dtype=object)
    if shape is not None:
        a = a.reshape(shape)
    elif a.ndim == 1 and a.size == 0:
        a = a.reshape(0, 0)
    return a


@dataclass(frozen=True)
class Field:
    """Scalar field: ``p is None`` means the rationals."""

    p: int | None = None

    @classmethod
    def parse(cls, spec: str) -> "Field":
        spec = spec.strip().lower()
        if spec in ("q", "qq", "rational"):
            return cls(None)
        if spec.startswith("fp"):
            _, _, rest = spec.partition(":")
            p = int(rest) if rest else DEFAULT_PRIME
            if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
                raise ValueError(f"{p} is not prime")
            return cls(p)
        raise ValueError(f"unknown field {spec!r}; use 'q' or 'fp:P'")

    def __str__(self) -> str:
        return "q" if self.p is None else f"fp:{self.p}"

    def rank(self, mat) -> int:
        return rank(mat, self.p)


def _reduce_mod(a: np.ndarray, p: int) -> list[list[int]]:
    out = []
    for row in a.tolist():
        new = []
        for x in row:
            if isinstance(x, Fraction):
                x = x.numerator * pow(x.denominator, -1, p)
            new.append(int(x) % p)
        out.append(new)
    return out


def _integer_rows(a: np.ndarray) -> list[list[int]]:
    rows = []
    for row in a.tolist():
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        rows.append([int(x * den) for x in row])
    return rows


def rank(mat, p: int | None = None) -> int:
    """Rank over Q (fraction-free Bareiss elimination) or over F_p."""
    a = as_object(mat)
    if a.size == 0:
        return 0
    if p is not None:
        return _rank_modp(_reduce_mod(a, p), p)
    return _rank_bareiss(_integer_rows(a))


def _rank_modp(rows: list[list[int]], p: int) -> int:
    m, n = len(rows), len(rows[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(r + 1, m):
            f = rows[i][c]
            if f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == m:
            break
    return r


def _rank_bareiss(rows: list[list[int]]) -> int:
    m, n = len(rows), len(rows[0])
    r = 0
    prev = 1
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        for i in range(r + 1, m):
            rows[i] = [(pv * rows[i][j] - rows[i][c] * rows[r][j]) // prev for j in range(n)]
        prev = pv
        r += 1
        if r == m:
            break
    return r


def det(mat) -> int:
    """Integer determinant by Bareiss elimination."""
    rows = [list(map(int, row)) for row in as_object(mat).tolist()]
    n = len(rows)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                rows[i][j] = (rows[c][c] * rows[i][j] - rows[i][c] * rows[c][j]) // prev
            rows[i][c] = 0
        prev = rows[c][c]
    return sign * rows[n - 1][n - 1]


def rref(rows: Sequence[Sequence], p: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    if p is None:
        a = [[Fraction(x) for x in row] for row in rows]
    else:
        a = _reduce_mod(as_object(rows), p) if rows else []
    if not a:
        return [], []
    m, n = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        if p is None:
            inv = 1 / a[r][c]
            a[r] = [x * inv for x in a[r]]
        else:
            inv = pow(a[r][c], -1, p)
            a[r] = [(x * inv) % p for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                if p is None:
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                else:
                    a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a[:r], pivots


def inverse(mat, p: int | None = None) -> np.ndarray:
    """Inverse of a square matrix; raises ValueError if singular."""
    a = as_object(mat)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix is not square")
    if n == 0:
        return zeros(0, 0)
    aug = [list(a[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    red, piv = rref(aug, p)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise ValueError("matrix is singular")
    return as_object([row[n:] for row in red], (n, n))


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in vec)
    return tuple(int(x) // g for x in vec)


def cofactor_normal(rows: Sequence[Sequence[int]], n: int) -> tuple[int, ...]:
    """Integer normal to the span of ``n - 1`` vectors in Z^n.

    Generalized cross product; zero iff the rows are dependent.
    """
    if n == 1:
        return (1,)
    out = []
    for i in range(n):
        minor = [[r[j] for j in range(n) if j != i] for r in rows]
        out.append((-1) ** i * det(minor))
    return primitive(out)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def matvec(mat: Sequence[Sequence[int]], vec: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a * b for a, b in zip(row, vec)) for row in mat)


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], inner: int) -> tuple[tuple[int, ...], ...]:
    ncols = len(b[0]) if b else 0
    return tuple(
        tuple(sum(row[k] * b[k][j] for k in range(inner)) for j in range(ncols))
        for row in a
    )


class LeftInverse:
    """Exact preimages under an injective integer matrix ``A`` (m x k).

    ``solve(x)`` returns the integer ``y`` with ``A y = x`` or ``None`` when
    no integral preimage exists.
    """

    def __init__(self, mat: Sequence[Sequence[int]], ncols: int):
        self.mat = tuple(tuple(int(v) for v in row) for row in mat)
        self.m = len(self.mat)
        self.k = ncols
        if self.k == 0:
            self.rows, self.inv = (), None
            return
        red, piv = rref([list(r) for r in zip(*self.mat)]) if self.m else ([], [])
        if len(piv) < self.k:
            raise ValueError("matrix is not injective")
        self.rows = tuple(piv)
        sub = [[self.mat[i][j] for j in range(self.k)] for i in self.rows]
        self.inv = inverse(sub).tolist()

    def solve(self, x: Sequence[int]) -> tuple[int, ...] | None:
        if self.k == 0:
            return () if all(v == 0 for v in x) else None
        xs = [x[i] for i in self.rows]
        y = []
        for row in self.inv:
            v = sum(a * b for a, b in zip(row, xs))
            if v.denominator != 1:
                return None
            y.append(int(v))
        y = tuple(y)
        if matvec(self.mat, y) != tuple(x):
            return None
        return y
