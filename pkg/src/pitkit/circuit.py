"""Depth-3 circuits: sums of scaled products of linear forms.

A circuit over ``n`` variables with top fanin bound ``k`` and degree ``d``
is a list of at most ``k`` multiplication terms, each a nonzero scalar times
exactly ``d`` nonzero linear forms.  :meth:`Circuit.expand` multiplies
everything out into a :class:`SparsePoly` and is the ground truth that all
identity verdicts are checked against.
"""
from __future__ import annotations

import operator
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .exceptions import (
    DegreeMismatch,
    DimensionMismatch,
    ExpansionTooLarge,
    FieldMismatch,
    IndexOutOfRange,
    MalformedDocument,
    PitError,
    TooManyTerms,
    ZeroAffineFactor,
    ZeroFormInTerm,
)
from .field import Embedding, FieldElement, FieldSpec, field_from_spec

DEFAULT_EXPAND_CAP = 10**6


def _parse_vector(field: FieldSpec, values: Iterable) -> tuple:
    return tuple(field.parse(v) for v in values)


def parse_point(field: FieldSpec, point: Sequence) -> tuple:
    """Raw coordinates of a point given as FieldElements, ints or strings."""
    return _parse_vector(field, point)


class SparsePoly:
    """Multivariate polynomial as ``{exponent tuple: nonzero raw coefficient}``."""

    __slots__ = ("field", "n", "terms")

    def __init__(self, field: FieldSpec, n: int, terms: Mapping | None = None):
        self.field = field
        self.n = n
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def constant(cls, field: FieldSpec, n: int, c) -> "SparsePoly":
        return cls(field, n, {(0,) * n: c})

    @classmethod
    def from_form(cls, form: "LinearForm") -> "SparsePoly":
        n = form.n
        terms = {}
        for i, c in enumerate(form.raw):
            if c != 0:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return cls(form.field, n, terms)

    @classmethod
    def monomial(cls, field: FieldSpec, exponents: Sequence[int], c=None) -> "SparsePoly":
        return cls(field, len(exponents), {tuple(exponents): field.one if c is None else c})

    def _check(self, other: "SparsePoly"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if other.n != self.n:
            raise DimensionMismatch(f"{self.n} vs {other.n} variables")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.field == other.field and self.n == other.n and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        F = self.field
        if not self.terms:
            return "SparsePoly(0)"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(f"x{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)
            parts.append(f"({F.to_str(self.terms[e])})" + (f"*{mono}" if mono else ""))
        return "SparsePoly(" + " + ".join(parts) + ")"

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        self._check(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = F.add(out.get(e, 0), c)
        return SparsePoly(F, self.n, out)

    def __neg__(self) -> "SparsePoly":
        F = self.field
        return SparsePoly(F, self.n, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def scale(self, c) -> "SparsePoly":
        F = self.field
        return SparsePoly(F, self.n, {e: F.mul(a, c) for e, a in self.terms.items()})

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        return self.mul(other)

    def mul(self, other: "SparsePoly", cap: int | None = None) -> "SparsePoly":
        self._check(other)
        F = self.field
        add, mul = F.add, F.mul
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(operator.add, e1, e2))
                out[e] = add(out.get(e, 0), mul(c1, c2))
            if cap is not None and len(out) > cap:
                raise ExpansionTooLarge(f"expansion exceeds {cap} monomials")
        return SparsePoly(F, self.n, out)

    def shift(self, exponents: Sequence[int]) -> "SparsePoly":
        """Multiply by the monomial with the given exponents."""
        return SparsePoly(
            self.field, self.n, {tuple(map(operator.add, e, exponents)): c for e, c in self.terms.items()}
        )

    def evaluate_raw(self, point: Sequence):
        F = self.field
        acc = F.zero
        for e, c in self.terms.items():
            v = c
            for x, a in zip(point, e):
                if a:
                    v = F.mul(v, F.pow(x, a))
            acc = F.add(acc, v)
        return acc

    def evaluate(self, point: Sequence) -> FieldElement:
        if len(point) != self.n:
            raise DimensionMismatch(f"point has {len(point)} coordinates, polynomial has {self.n} variables")
        return self.field.element(self.evaluate_raw(parse_point(self.field, point)))

    def substitute(self, images: Sequence["SparsePoly"]) -> "SparsePoly":
        """Ring homomorphism x_i -> images[i], applied monomial by monomial."""
        if len(images) != self.n:
            raise DimensionMismatch(f"need {self.n} images, got {len(images)}")
        F = self.field
        target_n = images[0].n if images else 0
        out = SparsePoly(F, target_n)
        cache: dict = {}
        for e, c in self.terms.items():
            term = SparsePoly.constant(F, target_n, c)
            for i, a in enumerate(e):
                if a:
                    key = (i, a)
                    if key not in cache:
                        pw = SparsePoly.constant(F, target_n, F.one)
                        for _ in range(a):
                            pw = pw * images[i]
                        cache[key] = pw
                    term = term * cache[key]
            out = out + term
        return out


class LinearForm:
    """Linear polynomial with zero constant term, stored as raw coefficients."""

    __slots__ = ("field", "raw")

    def __init__(self, field: FieldSpec, coefficients: Iterable):
        self.field = field
        self.raw = _parse_vector(field, coefficients)

    @classmethod
    def from_raw(cls, field: FieldSpec, raw: Sequence) -> "LinearForm":
        obj = cls.__new__(cls)
        obj.field = field
        obj.raw = tuple(raw)
        return obj

    @classmethod
    def variable(cls, field: FieldSpec, n: int, i: int) -> "LinearForm":
        """The form x_{i+1} (0-based index ``i``)."""
        raw = [0] * n
        raw[i] = field.one
        return cls.from_raw(field, raw)

    @property
    def n(self) -> int:
        return len(self.raw)

    @property
    def coefficients(self) -> tuple[FieldElement, ...]:
        return self.field.elements(self.raw)

    def is_zero(self) -> bool:
        return not any(self.raw)

    def evaluate_raw(self, point: Sequence):
        return self.field.dot(self.raw, point)

    def scale(self, c) -> "LinearForm":
        F = self.field
        return LinearForm.from_raw(F, [F.mul(a, c) for a in self.raw])

    def __add__(self, other: "LinearForm") -> "LinearForm":
        F = self.field
        return LinearForm.from_raw(F, [F.add(a, b) for a, b in zip(self.raw, other.raw)])

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.field == other.field and self.raw == other.raw

    def __hash__(self):
        return hash(self.raw)

    def __repr__(self):
        F = self.field
        parts = [
            (f"{F.to_str(c)}*" if c != F.one else "") + f"x{i + 1}"
            for i, c in enumerate(self.raw)
            if c != 0
        ]
        return " + ".join(parts) or "0"

    def to_json(self) -> list:
        return [self.field.format(c) for c in self.raw]


class MultiplicationTerm:
    """``scalar * prod(forms)``; forms may repeat and their order is kept."""

    __slots__ = ("field", "n", "scalar", "forms")

    def __init__(self, field: FieldSpec, scalar, forms: Sequence[LinearForm], n: int | None = None,
                 allow_zero_forms: bool = False):
        self.field = field
        self.scalar = field.parse(scalar)
        self.forms = tuple(forms)
        if n is None:
            if not self.forms:
                raise DimensionMismatch("n is required for a term without forms")
            n = self.forms[0].n
        self.n = n
        if self.scalar == 0:
            raise ValueError("term scalar must be nonzero")
        for f in self.forms:
            if f.field != field:
                raise FieldMismatch(f"form over {f.field} in term over {field}")
            if f.n != n:
                raise DimensionMismatch(f"form has {f.n} coefficients, expected {n}")
            if not allow_zero_forms and f.is_zero():
                raise ZeroFormInTerm("multiplication terms may not contain the zero form")

    @classmethod
    def product(cls, forms: Sequence[LinearForm], n: int | None = None) -> "MultiplicationTerm":
        """M(S): the product of ``forms`` with scalar 1 (the constant 1 when empty)."""
        field = forms[0].field if forms else None
        if field is None:
            raise ValueError("use MultiplicationTerm(field, 1, [], n=n) for the empty product")
        return cls(field, field.one, forms, n=n)

    @property
    def degree(self) -> int:
        return len(self.forms)

    def is_zero(self) -> bool:
        return any(f.is_zero() for f in self.forms)

    def evaluate_raw(self, point: Sequence):
        F = self.field
        v = self.scalar
        for f in self.forms:
            v = F.mul(v, F.dot(f.raw, point))
        return v

    def evaluate(self, point: Sequence) -> FieldElement:
        return self.field.element(self.evaluate_raw(parse_point(self.field, point)))

    def expand(self, cap: int = DEFAULT_EXPAND_CAP) -> SparsePoly:
        F = self.field
        poly = SparsePoly.constant(F, self.n, self.scalar)
        for f in self.forms:
            poly = poly.mul(SparsePoly.from_form(f), cap)
        return poly

    def with_scalar(self, scalar) -> "MultiplicationTerm":
        return MultiplicationTerm(self.field, scalar, self.forms, n=self.n, allow_zero_forms=True)

    def form_multiset(self) -> list:
        return sorted(f.raw for f in self.forms)

    def __eq__(self, other):
        if not isinstance(other, MultiplicationTerm):
            return NotImplemented
        return (self.field, self.n, self.scalar, self.forms) == (other.field, other.n, other.scalar, other.forms)

    def __hash__(self):
        return hash((self.scalar, self.forms))

    def __repr__(self):
        body = "".join(f"({f})" for f in self.forms) or "1"
        return f"{self.field.to_str(self.scalar)}*{body}"

    def to_json(self) -> dict:
        return {"scalar": self.field.format(self.scalar), "forms": [f.to_json() for f in self.forms]}


class Circuit:
    """A ΣΠΣ(k, d, n) circuit: at most ``k`` terms, each of degree exactly ``d``.

    ``allow_zero_forms`` admits terms containing the zero form; such terms
    are identically zero and are reported by :attr:`zero_terms`.  Only
    images under a reduction map are built that way.
    """

    __slots__ = ("field", "n", "d", "k", "terms", "_raw_terms")

    def __init__(self, field: FieldSpec, n: int, d: int, k: int, terms: Sequence[MultiplicationTerm],
                 allow_zero_forms: bool = False):
        self.field = field
        self.n = int(n)
        self.d = int(d)
        self.k = int(k)
        self.terms = tuple(terms)
        if self.n < 1 or self.d < 0 or self.k < 0:
            raise DimensionMismatch(f"bad dimensions n={n}, d={d}, k={k}")
        if len(self.terms) > self.k:
            raise TooManyTerms(f"{len(self.terms)} terms exceed top fanin {self.k}")
        for idx, t in enumerate(self.terms):
            if t.field != field:
                raise FieldMismatch(f"term {idx} is over {t.field}, circuit over {field}")
            if t.n != self.n:
                raise DimensionMismatch(f"term {idx} has {t.n} variables, expected {self.n}")
            if t.degree != self.d:
                raise DegreeMismatch(f"term {idx} has degree {t.degree}, expected {self.d}")
            if not allow_zero_forms and t.is_zero():
                raise ZeroFormInTerm(f"term {idx} contains the zero form")
        self._raw_terms = tuple((t.scalar, tuple(f.raw for f in t.forms)) for t in self.terms)

    @property
    def zero_terms(self) -> tuple[int, ...]:
        return tuple(i for i, t in enumerate(self.terms) if t.is_zero())

    def forms(self) -> list[LinearForm]:
        """All forms of all terms, in order."""
        return [f for t in self.terms for f in t.forms]

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return (self.field, self.n, self.d, self.k, self.terms) == (other.field, other.n, other.d, other.k, other.terms)

    def __repr__(self):
        body = " + ".join(map(repr, self.terms)) or "0"
        return f"Circuit[{self.field}, k={self.k}, d={self.d}, n={self.n}]({body})"

    # evaluation -----------------------------------------------------------
    def evaluate_raw(self, point: Sequence):
        F = self.field
        if F.kind == "prime":
            p = F.p
            mul = operator.mul
            total = 0
            for scalar, forms in self._raw_terms:
                v = scalar
                for coeffs in forms:
                    v = v * sum(map(mul, coeffs, point)) % p
                total += v
            return total % p
        dot, fmul, add = F.dot, F.mul, F.add
        total = F.zero
        for scalar, forms in self._raw_terms:
            v = scalar
            for coeffs in forms:
                if not v:
                    break
                v = fmul(v, dot(coeffs, point))
            total = add(total, v)
        return total

    def evaluate(self, point: Sequence) -> FieldElement:
        """C(point) with the point given as FieldElements, ints or strings."""
        if len(point) != self.n:
            raise DimensionMismatch(f"point has {len(point)} coordinates, circuit has {self.n} variables")
        return self.field.element(self.evaluate_raw(parse_point(self.field, point)))

    __call__ = evaluate

    def expand(self, cap: int = DEFAULT_EXPAND_CAP) -> SparsePoly:
        """Fully multiplied-out polynomial; raises ExpansionTooLarge past ``cap`` monomials."""
        out = SparsePoly(self.field, self.n)
        for t in self.terms:
            out = out + t.expand(cap)
            if len(out) > cap:
                raise ExpansionTooLarge(f"expansion exceeds {cap} monomials")
        return out

    def is_zero(self, cap: int = DEFAULT_EXPAND_CAP) -> bool:
        return self.expand(cap).is_zero()

    # structure ----------------------------------------------------------------
    def subcircuit(self, indices: Iterable[int]) -> "Circuit":
        """C_S: the circuit keeping only the (0-based) term indices in S."""
        idx = sorted(set(indices))
        for i in idx:
            if not 0 <= i < len(self.terms):
                raise IndexOutOfRange(f"term index {i} outside 0..{len(self.terms) - 1}")
        return Circuit(self.field, self.n, self.d, self.k, [self.terms[i] for i in idx], allow_zero_forms=True)

    def lift(self, embedding: Embedding) -> "Circuit":
        """The same circuit with every coefficient pushed through ``embedding``."""
        if embedding.source != self.field:
            raise FieldMismatch(f"embedding source {embedding.source} is not {self.field}")
        if embedding.is_identity:
            return self
        G = embedding.target
        e = embedding.raw
        terms = [
            MultiplicationTerm(G, G.element(e(t.scalar)), [LinearForm.from_raw(G, [e(c) for c in f.raw]) for f in t.forms],
                               n=self.n, allow_zero_forms=True)
            for t in self.terms
        ]
        return Circuit(G, self.n, self.d, self.k, terms, allow_zero_forms=True)

    def with_terms(self, terms: Sequence[MultiplicationTerm]) -> "Circuit":
        return Circuit(self.field, self.n, self.d, self.k, terms, allow_zero_forms=True)

    def to_json(self) -> dict:
        doc = {
            "field": self.field.to_json(),
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "terms": [t.to_json() for t in self.terms],
        }
        if self.zero_terms:
            doc["zero_terms"] = list(self.zero_terms)
        return doc


def subcircuit(circuit: Circuit, indices: Iterable[int]) -> Circuit:
    return circuit.subcircuit(indices)


def evaluate(circuit: Circuit, point: Sequence) -> FieldElement:
    return circuit.evaluate(point)


def expand(circuit: Circuit, cap: int = DEFAULT_EXPAND_CAP) -> SparsePoly:
    return circuit.expand(cap)


def homogenize(field: FieldSpec, n: int, d: int, affine_terms: Sequence, k: int | None = None) -> Circuit:
    """Lift products of affine forms to a homogeneous circuit over n+1 variables.

    ``affine_terms`` is a list of ``(scalar, factors)`` where every factor is
    ``(a_0, a_1, ..., a_n)`` standing for ``a_0 + a_1 x_1 + ... + a_n x_n``.
    Variable 0 of the result replaces the constant 1; terms of degree below
    ``d`` are padded with copies of x_0.
    """
    n1 = n + 1
    x0 = LinearForm.variable(field, n1, 0)
    terms = []
    for idx, (scalar, factors) in enumerate(affine_terms):
        forms = []
        for fac in factors:
            raw = _parse_vector(field, fac)
            if len(raw) != n1:
                raise DimensionMismatch(f"affine factor needs {n1} entries (constant first), got {len(raw)}")
            if not any(raw):
                raise ZeroAffineFactor(f"term {idx} has an identically zero affine factor")
            forms.append(LinearForm.from_raw(field, raw))
        if len(forms) > d:
            raise DegreeMismatch(f"term {idx} has degree {len(forms)} > d={d}")
        forms.extend([x0] * (d - len(forms)))
        terms.append(MultiplicationTerm(field, scalar, forms, n=n1))
    return Circuit(field, n1, d, len(terms) if k is None else k, terms)


def parse_circuit(document: Mapping, homogenize_input: bool = False, field: FieldSpec | None = None) -> Circuit:
    """Validated circuit from its JSON document.

    With ``homogenize_input`` every form carries a leading constant entry,
    term degrees may be below ``d``, and the result lives on n+1 variables.
    ``field`` is used when the document has no ``"field"`` entry.
    """
    if not isinstance(document, Mapping):
        raise MalformedDocument("circuit document must be a JSON object")
    try:
        F = field_from_spec(document["field"]) if "field" in document else field
        if F is None:
            raise MalformedDocument("circuit document has no field and none was supplied")
        n = int(document["n"])
        d = int(document["d"])
        raw_terms = document["terms"]
        k = int(document.get("k", len(raw_terms)))
        zero_ok = set(document.get("zero_terms", ()))
        if not isinstance(raw_terms, list):
            raise MalformedDocument("'terms' must be a list")
        if homogenize_input:
            affine = [(t.get("scalar", "1"), t["forms"]) for t in raw_terms]
            if len(affine) > k:
                raise TooManyTerms(f"{len(affine)} terms exceed top fanin {k}")
            return homogenize(F, n, d, affine, k=k)
        terms = []
        for idx, t in enumerate(raw_terms):
            forms = []
            for f in t["forms"]:
                if not isinstance(f, list) or len(f) != n:
                    raise DimensionMismatch(f"term {idx}: form must list {n} coefficients")
                forms.append(LinearForm(F, f))
            terms.append(MultiplicationTerm(F, t.get("scalar", "1"), forms, n=n,
                                            allow_zero_forms=idx in zero_ok))
        if any(len(t.forms) != d for t in terms):
            bad = next(i for i, t in enumerate(terms) if len(t.forms) != d)
            raise DegreeMismatch(f"term {bad} has degree {len(terms[bad].forms)}, expected {d}"
                                 " (use homogenize for ragged or affine input)")
        return Circuit(F, n, d, k, terms, allow_zero_forms=bool(zero_ok))
    except KeyError as e:
        raise MalformedDocument(f"circuit document missing key {e}") from e
    except (TypeError, AttributeError) as e:
        raise MalformedDocument(f"malformed circuit document: {e}") from e
    except ValueError as e:
        if isinstance(e, PitError):
            raise
        raise MalformedDocument(f"malformed circuit document: {e}") from e


def monomials(n: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of the given total degree in n variables."""
    out = []
    for combo in combinations_with_replacement(range(n), degree):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out
