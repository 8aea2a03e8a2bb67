"""Incremental Gaussian elimination over any pitkit field.

Vectors are sparse dicts ``{key: raw}`` with comparable keys (column
indices, exponent tuples).  Each stored row is normalized so that its
largest key -- the pivot -- has coefficient 1, and no two rows share a pivot.
Reducing a vector against the rows yields the unique residue containing no
pivot key, so ``reduce(v) == {}`` exactly when ``v`` lies in the span.
"""
from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence

from .field import FieldSpec

Vector = dict


class Echelon:
    """Row-echelon basis of a growing subspace.

    With ``track=True`` every row remembers how it was assembled from the
    inserted vectors, so :meth:`solve` can return explicit coefficients.
    """

    def __init__(self, field: FieldSpec, track: bool = False):
        self.field = field
        self.track = track
        self.rows: dict[Hashable, Vector] = {}
        self.combos: dict[Hashable, Vector] = {}
        self._count = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, v: Mapping, combo: Vector | None):
        F = self.field
        v = {k: c for k, c in v.items() if c != 0}
        out = {}
        rows, combos = self.rows, self.combos
        while v:
            key = max(v)
            c = v.pop(key)
            row = rows.get(key)
            if row is None:
                out[key] = c
                continue
            for k2, a in row.items():
                if k2 == key:
                    continue
                nv = F.sub(v.get(k2, 0), F.mul(c, a))
                if nv == 0:
                    v.pop(k2, None)
                else:
                    v[k2] = nv
            if combo is not None:
                for j, a in combos[key].items():
                    nv = F.sub(combo.get(j, 0), F.mul(c, a))
                    if nv == 0:
                        combo.pop(j, None)
                    else:
                        combo[j] = nv
        return out

    def reduce(self, v: Mapping) -> Vector:
        """Canonical residue of ``v`` modulo the current span."""
        return self._reduce(v, None)

    def contains(self, v: Mapping) -> bool:
        return not self._reduce(v, None)

    def add(self, v: Mapping, label: Hashable | None = None) -> bool:
        """Insert ``v``; return True if it enlarged the span.

        ``label`` names the vector in tracked combinations (defaults to the
        insertion index).
        """
        if label is None:
            label = self._count
        self._count += 1
        combo = {label: self.field.one} if self.track else None
        r = self._reduce(v, combo)
        if not r:
            return False
        F = self.field
        key = max(r)
        inv = F.inv(r[key])
        self.rows[key] = {k: F.mul(c, inv) for k, c in r.items()}
        if combo is not None:
            self.combos[key] = {j: F.mul(c, inv) for j, c in combo.items()}
        return True

    def solve(self, v: Mapping) -> Vector | None:
        """Coefficients ``{label: raw}`` expressing ``v`` in the inserted
        vectors, or None when ``v`` is outside the span.  Needs ``track``."""
        if not self.track:
            raise ValueError("solve() needs an Echelon built with track=True")
        combo: Vector = {}
        r = self._reduce(v, combo)
        if r:
            return None
        F = self.field
        # v - sum(c * row) == 0 accumulated as combo = -sum(c * combo_row)
        return {j: F.neg(c) for j, c in combo.items()}

    def basis(self) -> list[Vector]:
        """Fully reduced basis rows, ordered by ascending pivot."""
        out = []
        for key in sorted(self.rows):
            row = self.rows[key]
            rest = {k: c for k, c in row.items() if k != key}
            red = self.reduce(rest)
            red[key] = self.field.one
            out.append(red)
        return out


def dense_to_sparse(vec: Sequence) -> Vector:
    return {i: c for i, c in enumerate(vec) if c != 0}


def sparse_to_dense(vec: Mapping, length: int, zero=0) -> list:
    out = [zero] * length
    for i, c in vec.items():
        out[i] = c
    return out


def rank(field: FieldSpec, vectors: Iterable[Sequence]) -> int:
    """Rank of dense raw vectors by Gaussian elimination."""
    e = Echelon(field)
    for v in vectors:
        e.add(dense_to_sparse(v))
    return e.rank
