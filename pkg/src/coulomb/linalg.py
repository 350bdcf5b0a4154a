"""Exact rank and nullspace over the rationals (thin wrapper over sympy)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _matrix(rows: Sequence[Sequence], ncols: int) -> DomainMatrix:
    data = [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in rows]
    return DomainMatrix(data, (len(data), ncols), QQ)


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    ncols = len(rows[0]) if ncols is None else ncols
    if ncols == 0:
        return 0
    return _matrix(rows, ncols).rank()


def nullity(rows: Sequence[Sequence], ncols: int) -> int:
    """Dimension of ``{v : A v = 0}`` for the matrix with the given rows."""
    return ncols - rank(rows, ncols)


def sparse_rows(vectors: Sequence[dict], index: dict) -> list[list[Fraction]]:
    """Densify ``{key: value}`` vectors against a key -> column ``index``."""
    out = []
    for vec in vectors:
        row = [Fraction(0)] * len(index)
        for k, c in vec.items():
            row[index[k]] += c
        out.append(row)
    return out
