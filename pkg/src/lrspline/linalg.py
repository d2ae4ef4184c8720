"""Exact rank and null space by fraction-free integer elimination.

Rows are scaled to primitive integer vectors; elimination cross-multiplies and
divides each updated row by the gcd of its entries, so no Fraction arithmetic
happens inside the loop.  Rows arrive one at a time and pivot on their leading
column; the gcd step is what keeps the integers small.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def _primitive(row):
    g = 0
    for v in row:
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = [v // g for v in row]
    for v in row:
        if v:
            if v < 0:
                row = [-w for w in row]
            break
    return row


def integer_row(row):
    """Scale a rational row to a primitive integer row (zero stays zero)."""
    den = 1
    for v in row:
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    return _primitive([int(v * den) for v in row])


class Echelon:
    """Incrementally maintained integer row echelon form over ``ncols`` columns."""

    def __init__(self, ncols):
        self.ncols = ncols
        self.rows = {}  # pivot column -> primitive integer row

    @property
    def rank(self):
        return len(self.rows)

    def add(self, row) -> bool:
        """Reduce ``row`` against the basis; keep it if independent."""
        row = integer_row(row)
        for c in sorted(self.rows):
            v = row[c]
            if v:
                piv = self.rows[c]
                d = piv[c]
                row = _primitive([d * a - v * b for a, b in zip(row, piv)])
        lead = next((c for c, v in enumerate(row) if v), None)
        if lead is None:
            return False
        self.rows[lead] = row
        return True

    def reduced(self):
        """Fully reduced rows as (pivot column, integer row), back-substituted."""
        cols = sorted(self.rows)
        rows = {c: list(self.rows[c]) for c in cols}
        for i in reversed(range(len(cols))):
            c = cols[i]
            for c2 in cols[:i]:
                v = rows[c2][c]
                if v:
                    d = rows[c][c]
                    rows[c2] = _primitive([d * a - v * b for a, b in zip(rows[c2], rows[c])])
        return [(c, rows[c]) for c in cols]

    def null_space(self):
        reduced = self.reduced()
        pivots = {c for c, _ in reduced}
        basis = []
        for f in range(self.ncols):
            if f in pivots:
                continue
            scale = 1
            for c, row in reduced:
                if row[f]:
                    scale = lcm(scale, row[c])
            vec = [0] * self.ncols
            vec[f] = scale
            for c, row in reduced:
                if row[f]:
                    vec[c] = -row[f] * scale // row[c]
            basis.append([Fraction(v) for v in _primitive(vec)])
        return basis


def echelon_of(rows, ncols, stop_at_full=True):
    ech = Echelon(ncols)
    seen = set()
    pending = []
    for row in rows:
        r = tuple(integer_row(row))
        if any(r) and r not in seen:
            seen.add(r)
            pending.append(r)
    # short rows first: sparse rows eliminate cheaply and fix pivots early
    pending.sort(key=lambda r: (sum(1 for v in r if v), max(abs(v) for v in r).bit_length()))
    for r in pending:
        ech.add(r)
        if stop_at_full and ech.rank == ncols:
            break
    return ech


def rank(rows, ncols) -> int:
    return echelon_of(rows, ncols).rank


def null_space(rows, ncols):
    """Basis of {v : rows @ v = 0} as lists of Fractions; empty when independent."""
    return echelon_of(rows, ncols).null_space()


def columns_rank(columns) -> int:
    """Rank of a matrix given by its columns (each a sequence of the same length)."""
    if not columns:
        return 0
    rows = list(zip(*columns))
    return rank(rows, len(columns))
