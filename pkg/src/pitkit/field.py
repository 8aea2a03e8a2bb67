"""Exact arithmetic over F_p, F_{p^m} and the rationals.

Every field is a :class:`FieldSpec`.  Elements travel in two forms:

* ``FieldElement`` -- an immutable wrapper with operator overloading, used at
  API boundaries and in tests;
* a *raw* value -- the canonical payload the field operates on directly
  (``int`` residue for F_p, ``int`` base-p encoding of the coefficient vector
  for F_{p^m}, ``int`` or normalized ``Fraction`` for Q).  Hot loops in the
  circuit, reduction and hitting-set code work on raw values.

Raw values are canonical, so two raw values of the same field are equal iff
the elements are equal.
"""
from __future__ import annotations

import functools
import operator
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .exceptions import (
    BadModulusDegree,
    DivisionByZero,
    FieldMismatch,
    MalformedDocument,
    NotPrime,
    ReducibleModulus,
)

# extension fields at most this large get exp/log/Zech tables
TABLE_LIMIT = 1 << 17

_TRIAL_DIVISION_LIMIT = 10**12
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic primality check.

    Trial division below 10**12; above that Miller-Rabin with the first 13
    prime bases, which is deterministic for n < 3.3 * 10**24.
    """
    if n < 2:
        return False
    for q in (2, 3, 5):
        if n % q == 0:
            return n == q
    if n < _TRIAL_DIVISION_LIMIT:
        f, step = 7, 4
        while f * f <= n:
            if n % f == 0:
                return False
            f += step
            step = 6 - step
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factor(n: int) -> list[int]:
    """Distinct prime factors of n by trial division."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# --------------------------------------------------------------------------
# dense polynomials over F_p as coefficient lists, low degree first


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo b over F_p (b nonzero, trimmed)."""
    r = [c % p for c in a]
    _trim(r)
    db = len(b) - 1
    inv_lead = pow(b[-1], -1, p)
    while len(r) - 1 >= db and r:
        c = r[-1] * inv_lead % p
        shift = len(r) - 1 - db
        for i, bc in enumerate(b):
            r[shift + i] = (r[shift + i] - c * bc) % p
        _trim(r)
    return r


def _poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _poly_mod(prod, mod, p)


def _digits(r: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        r, c = divmod(r, p)
        out.append(c)
    return out


def _undigits(coeffs: Sequence[int], p: int) -> int:
    r = 0
    for c in reversed(coeffs):
        r = r * p + c
    return r


def _monic_polys(p: int, deg: int) -> Iterator[list[int]]:
    """All monic polynomials of the given degree, in increasing encoding order."""
    for r in range(p**deg):
        yield _digits(r, p, deg) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree 1..deg/2."""
    poly = _trim([c % p for c in poly])
    m = len(poly) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    # degree-1 factors are roots; cheaper to test directly
    for a in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * a + c) % p
        if acc == 0:
            return False
    for deg in range(2, m // 2 + 1):
        for div in _monic_polys(p, deg):
            if not _poly_mod(poly, div, p):
                return False
    return True


@functools.lru_cache(maxsize=None)
def _find_irreducible(p: int, m: int) -> tuple[int, ...]:
    for r in range(p**m):
        cand = _digits(r, p, m) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


def find_irreducible(p: int, m: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree ``m`` over F_p.

    Candidates are scanned in increasing order of ``sum(c_i * p**i)`` over the
    non-leading coefficients, so the result is reproducible everywhere.
    Returns the coefficient tuple, low degree first (length ``m + 1``).
    """
    if m < 1:
        raise BadModulusDegree(f"extension degree must be >= 1, got {m}")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return _find_irreducible(p, m)


# --------------------------------------------------------------------------
# field element wrapper


class FieldElement:
    """An element of a specific field.  Immutable; arithmetic checks fields."""

    __slots__ = ("field", "raw")

    def __init__(self, field: "FieldSpec", raw):
        self.field = field
        self.raw = raw

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine elements of {self.field} and {other.field}")
            return other.raw
        if isinstance(other, (int, Fraction)):
            return self.field.parse(other)
        return NotImplemented

    def _wrap(self, raw) -> "FieldElement":
        return FieldElement(self.field, raw)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.sub(o, self.raw))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.mul(self.raw, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.mul(self.raw, self.field.inv(o)))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.mul(o, self.field.inv(self.raw)))

    def __neg__(self):
        return self._wrap(self.field.neg(self.raw))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.raw, e))

    def inverse(self) -> "FieldElement":
        return self._wrap(self.field.inv(self.raw))

    def is_zero(self) -> bool:
        return self.raw == 0

    def __bool__(self):
        return self.raw != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.raw == other.raw
        if isinstance(other, (int, Fraction)):
            return self.raw == self.field.parse(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.raw))

    def to_json(self):
        return self.field.format(self.raw)

    def __str__(self):
        return self.field.to_str(self.raw)

    def __repr__(self):
        return f"FieldElement({self}, {self.field})"

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Coefficient vector over the prime subfield, low degree first."""
        return self.field.coeffs(self.raw)


# --------------------------------------------------------------------------
# fields


class FieldSpec:
    """Base class for the three supported fields.

    Subclasses provide raw arithmetic (``add``, ``sub``, ``neg``, ``mul``,
    ``inv``, ``pow``, ``dot``), a canonical enumeration (``nth``) and
    JSON (de)serialisation of elements.
    """

    kind: str = ""
    p: int | None = None
    m: int = 1
    modulus: tuple[int, ...] | None = None
    order: int | None = None  # None means infinite
    zero = 0
    one = 1

    # structural identity --------------------------------------------------
    def _key(self):
        return (self.kind, self.p, self.m, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def characteristic(self) -> int:
        return self.p or 0

    def __call__(self, value) -> FieldElement:
        return FieldElement(self, self.parse(value))

    def element(self, raw) -> FieldElement:
        return FieldElement(self, raw)

    def elements(self, raws: Iterable) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self, r) for r in raws)

    def is_zero(self, a) -> bool:
        return a == 0

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def dot(self, coeffs: Sequence, xs: Sequence):
        acc = self.zero
        add, mul = self.add, self.mul
        for c, x in zip(coeffs, xs):
            if c and x:
                acc = add(acc, mul(c, x))
        return acc

    def sum(self, values: Iterable):
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc

    def enumerate(self) -> Iterator:
        """Canonical enumeration: nth(0), nth(1), ..."""
        i = 0
        while self.order is None or i < self.order:
            yield self.nth(i)
            i += 1

    def first(self, count: int) -> list:
        if self.order is not None and count > self.order:
            raise ValueError(f"{self} has only {self.order} elements")
        return [self.nth(i) for i in range(count)]

    def coeffs(self, raw) -> tuple[int, ...]:
        return (raw,)

    def to_str(self, raw) -> str:
        return str(self.format(raw))

    def __reduce__(self):
        return (field_from_spec, (self.to_json(),))


class PrimeField(FieldSpec):
    """F_p with raw elements the residues 0..p-1."""

    kind = "prime"

    def __init__(self, p: int):
        p = int(p)
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        self.p = p
        self.order = p

    def __repr__(self):
        return f"GF({self.p})"

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise DivisionByZero(f"inverse of zero in {self}")
        return pow(a, -1, self.p)

    def pow(self, a, e: int):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def dot(self, coeffs, xs):
        return sum(map(operator.mul, coeffs, xs)) % self.p

    def sum(self, values):
        return sum(values) % self.p

    def nth(self, i: int):
        return i

    def from_int(self, n: int):
        return n % self.p

    def parse(self, value):
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value!r} is not in {self}")
            return value.raw
        if isinstance(value, bool):
            raise MalformedDocument(f"not a field element: {value!r}")
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            return value.numerator * self.inv(value.denominator % self.p) % self.p
        if isinstance(value, str):
            try:
                if "/" in value:
                    num, den = value.split("/")
                    return self.parse(Fraction(int(num), int(den)))
                return int(value) % self.p
            except ValueError as e:
                raise MalformedDocument(f"not an element of {self}: {value!r}") from e
        if isinstance(value, (list, tuple)) and len(value) == 1:
            return self.parse(value[0])
        raise MalformedDocument(f"not an element of {self}: {value!r}")

    def format(self, raw):
        return str(raw)

    def to_json(self) -> dict:
        return {"kind": "prime", "p": str(self.p)}


class ExtensionField(FieldSpec):
    """F_{p^m} = F_p[x]/(modulus).

    Raw elements are the integers ``sum(c_i * p**i)`` of the coefficient
    vectors (low degree first), which doubles as the canonical enumeration
    order.  Fields with at most ``TABLE_LIMIT`` elements use exp/log/Zech
    tables; larger ones multiply polynomials directly.
    """

    kind = "extension"

    def __init__(self, p: int, m: int, modulus: Sequence[int] | None = None):
        p, m = int(p), int(m)
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if m < 1:
            raise BadModulusDegree(f"extension degree must be >= 1, got {m}")
        if modulus is None:
            modulus = find_irreducible(p, m)
        modulus = [int(c) % p for c in modulus]
        _trim(modulus)
        if len(modulus) - 1 != m:
            raise BadModulusDegree(f"modulus has degree {len(modulus) - 1}, expected {m}")
        if modulus[-1] != 1:
            raise BadModulusDegree("modulus must be monic")
        if not is_irreducible(modulus, p):
            raise ReducibleModulus(f"{modulus} is reducible over GF({p})")
        self.p = p
        self.m = m
        self.modulus = tuple(modulus)
        self.order = p**m
        self._tables = None
        if self.order <= TABLE_LIMIT:
            self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    # slow polynomial path ---------------------------------------------------
    def _mul_poly(self, a, b):
        p, m = self.p, self.m
        r = _poly_mulmod(_digits(a, p, m), _digits(b, p, m), self.modulus, p)
        return _undigits(r, p)

    def _add_digits(self, a, b):
        p = self.p
        if p == 2:
            return a ^ b
        r, scale = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            r += (x + y) % p * scale
            scale *= p
        return r

    def _neg_digits(self, a):
        p = self.p
        if p == 2:
            return a
        r, scale = 0, 1
        while a:
            a, x = divmod(a, p)
            r += (-x % p) * scale
            scale *= p
        return r

    def _build_tables(self):
        q = self.order
        g = self._primitive_element()
        exp = [0] * (2 * (q - 1))
        log = [-1] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_poly(x, g)
        exp[q - 1:] = exp[: q - 1]
        # zech[l] = log(1 + g^l), -1 when 1 + g^l == 0
        zech = [log[self._add_digits(1, exp[i])] for i in range(q - 1)]
        self._exp, self._log, self._zech = exp, log, zech
        self._tables = True
        self._half = (q - 1) // 2 if self.p != 2 else 0
        self.generator = g

    def _primitive_element(self):
        q = self.order
        factors = _factor(q - 1)
        for g in range(1, q):
            if all(self._pow_poly(g, (q - 1) // f) != 1 for f in factors):
                return g
        raise AssertionError("multiplicative group is cyclic")

    def _pow_poly(self, a, e):
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            e >>= 1
            if e:
                base = self._mul_poly(base, base)
        return result

    # raw arithmetic -----------------------------------------------------------
    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if not self._tables:
            return self._add_digits(a, b)
        if a == 0:
            return b
        if b == 0:
            return a
        log = self._log
        la = log[a]
        z = self._zech[log[b] - la]  # negative index wraps onto the right entry
        if z < 0:
            return 0
        return self._exp[la + z]

    def neg(self, a):
        if self.p == 2 or a == 0:
            return a
        if not self._tables:
            return self._neg_digits(a)
        return self._exp[self._log[a] + self._half]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if not self._tables:
            return self._mul_poly(a, b)
        log = self._log
        return self._exp[log[a] + log[b]]

    def inv(self, a):
        if a == 0:
            raise DivisionByZero(f"inverse of zero in {self}")
        if not self._tables:
            return self._pow_poly(a, self.order - 2)
        return self._exp[(self.order - 1) - self._log[a]]

    def pow(self, a, e: int):
        if a == 0:
            if e < 0:
                raise DivisionByZero(f"inverse of zero in {self}")
            return 1 if e == 0 else 0
        if not self._tables:
            return super().pow(a, e)
        return self._exp[self._log[a] * e % (self.order - 1)]

    def dot(self, coeffs, xs):
        if not self._tables:
            return super().dot(coeffs, xs)
        log, exp, add = self._log, self._exp, self.add
        acc = 0
        for c, x in zip(coeffs, xs):
            if c and x:
                acc = add(acc, exp[log[c] + log[x]])
        return acc

    # conversions --------------------------------------------------------------
    def nth(self, i: int):
        return i

    def from_int(self, n: int):
        return n % self.p

    def coeffs(self, raw) -> tuple[int, ...]:
        return tuple(_digits(raw, self.p, self.m))

    def from_coeffs(self, coeffs: Sequence[int]):
        if len(coeffs) > self.m:
            coeffs = _poly_mod(list(coeffs), self.modulus, self.p)
        return _undigits([int(c) % self.p for c in coeffs], self.p)

    def parse(self, value):
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value!r} is not in {self}")
            return value.raw
        if isinstance(value, bool):
            raise MalformedDocument(f"not a field element: {value!r}")
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            num = value.numerator % self.p
            den = value.denominator % self.p
            if den == 0:
                raise DivisionByZero(f"denominator vanishes in {self}")
            return num * pow(den, -1, self.p) % self.p
        if isinstance(value, str):
            try:
                if "/" in value:
                    num, den = value.split("/")
                    return self.parse(Fraction(int(num), int(den)))
                return int(value) % self.p
            except ValueError as e:
                raise MalformedDocument(f"not an element of {self}: {value!r}") from e
        if isinstance(value, (list, tuple)):
            if len(value) != self.m:
                raise MalformedDocument(f"{self} elements have {self.m} coefficients, got {value!r}")
            try:
                return self.from_coeffs([int(c) for c in value])
            except (TypeError, ValueError) as e:
                raise MalformedDocument(f"not an element of {self}: {value!r}") from e
        raise MalformedDocument(f"not an element of {self}: {value!r}")

    def format(self, raw):
        return [str(c) for c in _digits(raw, self.p, self.m)]

    def to_str(self, raw) -> str:
        parts = []
        for i, c in enumerate(_digits(raw, self.p, self.m)):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(reversed(parts)) or "0"

    def to_json(self) -> dict:
        return {
            "kind": "extension",
            "p": str(self.p),
            "m": self.m,
            "modulus": [str(c) for c in self.modulus],
        }


def _norm_q(x):
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


class RationalField(FieldSpec):
    """Q.  Raw elements are ``int`` (integral values) or ``Fraction``
    (denominator > 1), normalized after every operation."""

    kind = "rational"

    def __repr__(self):
        return "QQ"

    def add(self, a, b):
        return _norm_q(a + b)

    def sub(self, a, b):
        return _norm_q(a - b)

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return _norm_q(a * b)

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero in QQ")
        return _norm_q(Fraction(1, 1) / a)

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        return _norm_q(a**e)

    def dot(self, coeffs, xs):
        return _norm_q(sum(map(operator.mul, coeffs, xs)))

    def sum(self, values):
        return _norm_q(sum(values))

    def nth(self, i: int):
        return i

    def from_int(self, n: int):
        return n

    def coeffs(self, raw):
        return (raw,)

    def parse(self, value):
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value!r} is not in {self}")
            return value.raw
        if isinstance(value, bool):
            raise MalformedDocument(f"not a field element: {value!r}")
        if isinstance(value, int):
            return value
        if isinstance(value, Fraction):
            return _norm_q(value)
        if isinstance(value, str):
            try:
                return _norm_q(Fraction(value.strip()))
            except (ValueError, ZeroDivisionError) as e:
                raise MalformedDocument(f"not a rational: {value!r}") from e
        if isinstance(value, (list, tuple)) and len(value) == 1:
            return self.parse(value[0])
        raise MalformedDocument(f"not a rational: {value!r}")

    def format(self, raw):
        if isinstance(raw, Fraction):
            return f"{raw.numerator}/{raw.denominator}"
        return str(raw)

    def to_json(self) -> dict:
        return {"kind": "rational"}


QQ = RationalField()


@functools.lru_cache(maxsize=None)
def _prime_field(p: int) -> PrimeField:
    return PrimeField(p)


@functools.lru_cache(maxsize=64)
def _extension_field(p: int, m: int, modulus: tuple[int, ...] | None) -> ExtensionField:
    return ExtensionField(p, m, modulus)


def GF(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Cached constructor: ``GF(101)``, ``GF(2, 4)``, ``GF(2, 2, [1, 1, 1])``."""
    if m == 1 and modulus is None:
        return _prime_field(int(p))
    return _extension_field(int(p), int(m), tuple(int(c) for c in modulus) if modulus is not None else None)


def field_from_spec(spec) -> FieldSpec:
    """Build a validated field from a JSON-style description.

    Accepts an existing ``FieldSpec`` (returned unchanged) or a mapping such as
    ``{"kind": "prime", "p": "101"}``, ``{"kind": "extension", "p": "2",
    "m": 4}`` or ``{"kind": "rational"}``.  A missing extension modulus is
    filled in with :func:`find_irreducible`.
    """
    if isinstance(spec, FieldSpec):
        return spec
    if not isinstance(spec, dict):
        raise MalformedDocument(f"field description must be an object, got {spec!r}")
    kind = spec.get("kind")
    try:
        if kind == "rational":
            return QQ
        if kind == "prime":
            return GF(int(spec["p"]))
        if kind == "extension":
            p = int(spec["p"])
            m = int(spec["m"])
            modulus = spec.get("modulus")
            if modulus is not None:
                modulus = [int(c) for c in modulus]
                if len(modulus) - 1 != m:
                    raise BadModulusDegree(f"modulus has {len(modulus)} coefficients, expected {m + 1}")
            return _extension_field(p, m, tuple(modulus) if modulus is not None else None)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, (NotPrime, BadModulusDegree, ReducibleModulus)):
            raise
        raise MalformedDocument(f"bad field description {spec!r}: {e}") from e
    raise MalformedDocument(f"unknown field kind {kind!r}")


# --------------------------------------------------------------------------
# embeddings


class Embedding:
    """Field homomorphism ``source -> target``.

    ``image_of_x`` is the raw image of the generator x of an extension
    source; prime and rational sources embed by constants.
    """

    __slots__ = ("source", "target", "image_of_x")

    def __init__(self, source: FieldSpec, target: FieldSpec, image_of_x=None):
        self.source = source
        self.target = target
        self.image_of_x = image_of_x

    @property
    def is_identity(self) -> bool:
        return self.source == self.target

    def raw(self, r):
        if self.is_identity:
            return r
        if self.source.kind == "prime":
            return r  # constants keep their encoding in an extension
        acc = 0
        t = self.target
        for c in reversed(self.source.coeffs(r)):
            acc = t.add(t.mul(acc, self.image_of_x), c)
        return acc

    def __call__(self, element: FieldElement) -> FieldElement:
        if element.field != self.source:
            raise FieldMismatch(f"{element!r} is not in {self.source}")
        return FieldElement(self.target, self.raw(element.raw))

    def __repr__(self):
        return f"Embedding({self.source} -> {self.target})"


def _find_root(target: ExtensionField, poly: Sequence[int]):
    for r in target.enumerate():
        acc = 0
        for c in reversed(poly):
            acc = target.add(target.mul(acc, r), c)
        if acc == 0:
            return r
    raise AssertionError(f"{poly} has no root in {target}")


def ensure_min_size(spec: FieldSpec, bound: int) -> tuple[FieldSpec, Embedding]:
    """Return a field with more than ``bound`` elements containing ``spec``.

    Fields that are already large enough (and Q) come back unchanged with
    the identity embedding.  Otherwise the smallest extension degree that
    works (a multiple of the current degree, so the embedding exists) is
    chosen and its modulus found by :func:`find_irreducible`.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if spec.order is None or spec.order > bound:
        return spec, Embedding(spec, spec)
    p, m0 = spec.p, spec.m
    m = m0
    while p**m <= bound:
        m += m0
    target = GF(p, m, find_irreducible(p, m))
    if spec.kind == "prime":
        return target, Embedding(spec, target)
    return target, Embedding(spec, target, _find_root(target, spec.modulus))

