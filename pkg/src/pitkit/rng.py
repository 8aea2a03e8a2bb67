"""Seeded random source with a fully documented output stream.

The bit source is numpy's PCG64 seeded through ``SeedSequence(seed)``; only
its raw 64-bit outputs (``random_raw``) are consumed, and those are fixed by
the PCG64 definition.  Integers in ``[0, n)`` are drawn by rejection: accept
a raw word ``w`` when ``w < 2**64 - (2**64 % n)`` and return ``w % n``.  A
field element is the canonical-enumeration element with a uniformly drawn
index.
"""
from __future__ import annotations

from fractions import Fraction
from typing import MutableSequence, Sequence, TypeVar

import numpy as np

from .field import FieldSpec

T = TypeVar("T")

_TWO64 = 1 << 64


class StableRng:
    def __init__(self, seed: int):
        self.seed = int(seed)
        self._bits = np.random.PCG64(self.seed)

    def next_u64(self) -> int:
        return int(self._bits.random_raw())

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        if n > _TWO64:
            # concatenate words for huge ranges
            words = (n.bit_length() + 63) // 64
            limit = (1 << (64 * words)) - ((1 << (64 * words)) % n)
            while True:
                w = 0
                for _ in range(words):
                    w = (w << 64) | self.next_u64()
                if w < limit:
                    return w % n
        limit = _TWO64 - (_TWO64 % n)
        while True:
            w = self.next_u64()
            if w < limit:
                return w % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] (inclusive)."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self.below(len(seq))]

    def shuffle(self, seq: MutableSequence) -> None:
        """Fisher-Yates, in place."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def coin(self, num: int = 1, den: int = 2) -> bool:
        return self.below(den) < num

    def field_element(self, field: FieldSpec, bound: int = 16):
        """Raw random element.  Finite fields: uniform.  Q: a signed integer
        with magnitude below ``bound``, divided by a random denominator in
        [2, bound] one time in four."""
        if field.order is not None:
            return field.nth(self.below(field.order))
        v = field.nth(self.below(bound))
        if self.coin():
            v = -v
        if self.coin(1, 4):
            v = field.parse(Fraction(v, 2 + self.below(bound - 1)))
        return v

    def nonzero_element(self, field: FieldSpec, bound: int = 16):
        while True:
            v = self.field_element(field, bound)
            if v != 0:
                return v
