"""Exact rank and kernel of small sparse rational matrices.

Matrices are dicts ``{(row, col): value}`` with Fraction-compatible values.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping


def _rows(M: Mapping[tuple[int, int], object], nrows: int) -> list[dict[int, Fraction]]:
    rows: list[dict[int, Fraction]] = [dict() for _ in range(nrows)]
    for (i, j), v in M.items():
        if v:
            rows[i][j] = Fraction(v)
    return rows


def row_echelon(M: Mapping, nrows: int, ncols: int) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon form; returns (pivot rows, pivot columns)."""
    rows = [r for r in _rows(M, nrows) if r]
    pivots: list[int] = []
    reduced: list[dict[int, Fraction]] = []
    for col in range(ncols):
        idx = next((k for k, r in enumerate(rows) if col in r), None)
        if idx is None:
            continue
        piv = rows.pop(idx)
        inv = 1 / piv[col]
        piv = {j: v * inv for j, v in piv.items()}
        for k, r in enumerate(rows):
            if col in r:
                f = r[col]
                for j, v in piv.items():
                    nv = r.get(j, 0) - f * v
                    if nv:
                        r[j] = nv
                    else:
                        r.pop(j, None)
        for r in reduced:
            if col in r:
                f = r[col]
                for j, v in piv.items():
                    nv = r.get(j, 0) - f * v
                    if nv:
                        r[j] = nv
                    else:
                        r.pop(j, None)
        rows = [r for r in rows if r]
        reduced.append(piv)
        pivots.append(col)
    return reduced, pivots


def rank(M: Mapping, nrows: int, ncols: int) -> int:
    return len(row_echelon(M, nrows, ncols)[1])


def kernel(M: Mapping, nrows: int, ncols: int) -> list[dict[int, Fraction]]:
    """Basis of the right kernel, one sparse vector per free column."""
    reduced, pivots = row_echelon(M, nrows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = {free: Fraction(1)}
        for r, p in zip(reduced, pivots):
            if free in r:
                v[p] = -r[free]
        basis.append(v)
    return basis


def matmul(A: Mapping, B: Mapping) -> dict[tuple[int, int], Fraction]:
    by_row: dict[int, list[tuple[int, object]]] = {}
    for (k, j), v in B.items():
        by_row.setdefault(k, []).append((j, v))
    out: dict[tuple[int, int], Fraction] = {}
    for (i, k), a in A.items():
        for j, b in by_row.get(k, ()):
            key = (i, j)
            nv = out.get(key, 0) + Fraction(a) * Fraction(b)
            if nv:
                out[key] = nv
            else:
                out.pop(key, None)
    return out


def transpose(M: Mapping) -> dict:
    return {(j, i): v for (i, j), v in M.items()}


def vstack(A: Mapping, B: Mapping, a_rows: int) -> dict:
    out = dict(A)
    out.update({(i + a_rows, j): v for (i, j), v in B.items()})
    return out
