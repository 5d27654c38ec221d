"""Exact linear algebra over the rationals.

Thin layer over sympy's ``DomainMatrix`` (QQ, gmpy2-backed when available).
Matrices go in and come out as lists of rows of :class:`fractions.Fraction`.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Matrix = List[List[Fraction]]


def _to_dm(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> DomainMatrix:
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if nrows else 0
    data = [[QQ(int(x.numerator), int(x.denominator)) if isinstance(x, Fraction) else QQ(x)
             for x in row] for row in rows]
    return DomainMatrix(data, (nrows, ncols), QQ)


def _from_dm(m: DomainMatrix) -> Matrix:
    return [[Fraction(int(x.numerator), int(x.denominator)) for x in row]
            for row in m.to_list()]


def zeros(nrows: int, ncols: int) -> Matrix:
    return [[Fraction(0)] * ncols for _ in range(nrows)]


def rank(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    if not rows or (ncols == 0):
        return 0
    return _to_dm(rows, ncols).rank()


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> Tuple[Matrix, Tuple[int, ...]]:
    """Reduced row echelon form and pivot column indices."""
    if not rows:
        return [], ()
    r, pivots = _to_dm(rows, ncols).rref()
    return _from_dm(r), tuple(pivots)


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> Matrix:
    """Basis of ``{x : A x = 0}`` as a list of vectors of length ``ncols``.

    The basis is the standard one read off the RREF: one vector per free
    column, with a 1 in that column.
    """
    if ncols == 0:
        return []
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = _to_dm(rows, ncols).nullspace()
    if ns.shape[0] == 0:
        return []
    return _from_dm(ns)


def inverse(rows: Sequence[Sequence[Fraction]]) -> Matrix:
    n = len(rows)
    if n == 0:
        return []
    return _from_dm(_to_dm(rows, n).inv())


def transpose(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> Matrix:
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*rows)]


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def pivot_columns(cols: Sequence[Sequence[Fraction]], length: int) -> Tuple[int, ...]:
    """Indices of a maximal independent subset of ``cols``, chosen greedily left to right."""
    if not cols:
        return ()
    _, pivots = rref(transpose(cols), len(cols)) if length else ([], ())
    return tuple(pivots)
