"""Ideals generated by products of linear forms, and non-identity certificates.

Everything here is homogeneous, so membership of a degree-D polynomial in
an ideal is decided inside the degree-D graded piece: f is in <f_1..f_m>
iff f is a linear combination of the products m * f_j with m a monomial of
degree D - deg(f_j).  That is one exact linear system, solved with
:class:`pitkit.linalg.Echelon`.

A certificate for a nonzero circuit with terms ``terms[0..s-1]`` is a
0-based index i, a path holding one node from each of ``terms[0..i-1]``
(each taken modulo the ideal of the nodes before it), and a nonzero alpha
such that, writing P for the ideal of the path and ``tail`` for
``terms[i] + ... + terms[s-1]``:

* every one of ``terms[0..i-1]`` lies in P;
* ``tail - alpha * terms[i]`` lies in P;
* ``terms[i]`` does not lie in P.

Together these force the circuit to be nonzero.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Iterator, Sequence

from .circuit import Circuit, LinearForm, MultiplicationTerm, SparsePoly, monomials
from .exceptions import (
    CertificateNotFound,
    CircuitIsZero,
    DimensionMismatch,
    FieldMismatch,
    GradedSpaceTooLarge,
    NotHomogeneous,
    PathExplosion,
)
from .field import FieldSpec
from .linalg import Echelon, dense_to_sparse

DEFAULT_PATH_CAP = 10**5
DEFAULT_GRADED_CAP = 10**5


class IdealGens:
    """Generators of an ideal; no generators means the zero ideal."""

    __slots__ = ("field", "n", "generators")

    def __init__(self, field: FieldSpec, n: int, generators: Sequence[MultiplicationTerm] = ()):
        self.field = field
        self.n = n
        self.generators = tuple(generators)
        for g in self.generators:
            if g.field != field:
                raise FieldMismatch(f"generator over {g.field}, ideal over {field}")
            if g.n != n:
                raise DimensionMismatch(f"generator has {g.n} variables, ideal has {n}")

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> "IdealGens":
        return cls(field, n)

    def extend(self, more: Sequence[MultiplicationTerm]) -> "IdealGens":
        return IdealGens(self.field, self.n, self.generators + tuple(more))

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return "<" + ", ".join(map(repr, self.generators)) + ">" if self.generators else "<0>"


def _form_echelon(gens: IdealGens) -> Echelon:
    e = Echelon(gens.field)
    for g in gens.generators:
        for f in g.forms:
            e.add(dense_to_sparse(f.raw))
    return e


def radsp(gens: IdealGens) -> list[LinearForm]:
    """Reduced basis of the span of every form in every generator."""
    F, n = gens.field, gens.n
    return [LinearForm.from_raw(F, [row.get(i, 0) for i in range(n)]) for row in _form_echelon(gens).basis()]


def _class_key(field: FieldSpec, residue: dict):
    """Scale-invariant key of a nonzero residue: normalize the top entry to 1."""
    top = max(residue)
    inv = field.inv(residue[top])
    return tuple(sorted((k, field.mul(c, inv)) for k, c in residue.items()))


@dataclass(frozen=True)
class SimilarityClass:
    """Forms of a term that agree up to a nonzero scalar modulo the radical span.

    ``representative`` is None for the class of forms already inside the
    radical span (the class represented by the zero form).
    """

    representative: LinearForm | None
    indices: tuple[int, ...]
    forms: tuple[LinearForm, ...]


def similarity_classes(term: MultiplicationTerm, gens: IdealGens) -> list[SimilarityClass]:
    """Partition the forms of ``term`` into similarity classes modulo radsp(gens).

    Classes are ordered by the first occurrence of one of their forms.
    """
    e = _form_echelon(gens)
    F = gens.field
    order: list = []
    members: dict = {}
    reps: dict = {}
    for idx, f in enumerate(term.forms):
        r = e.reduce(dense_to_sparse(f.raw))
        key = None if not r else _class_key(F, r)
        if key not in members:
            order.append(key)
            members[key] = []
            reps[key] = None if key is None else f
        members[key].append(idx)
    return [
        SimilarityClass(reps[key], tuple(members[key]), tuple(term.forms[i] for i in members[key]))
        for key in order
    ]


def nodes(term: MultiplicationTerm, gens: IdealGens) -> list[MultiplicationTerm]:
    """One node per similarity class: the product of that class's forms."""
    return [MultiplicationTerm(term.field, term.field.one, c.forms, n=term.n, allow_zero_forms=True)
            for c in similarity_classes(term, gens)]


@dataclass(frozen=True)
class Path:
    """A base ideal followed by one node per leading circuit term."""

    base: IdealGens
    nodes: tuple[MultiplicationTerm, ...] = ()

    @property
    def length(self) -> int:
        return len(self.nodes)

    def ideal(self) -> IdealGens:
        return self.base.extend(self.nodes)

    def radsp(self) -> list[LinearForm]:
        return radsp(self.ideal())

    def to_json(self) -> list:
        return [v.to_json() for v in self.nodes]


def iter_paths(circuit: Circuit, length: int, base: IdealGens | None = None,
               cap: int = DEFAULT_PATH_CAP) -> Iterator[Path]:
    """Depth-first enumeration of the paths v_1..v_length of ``circuit``."""
    if not 0 <= length <= len(circuit.terms):
        raise DimensionMismatch(f"path length {length} outside 0..{len(circuit.terms)}")
    if base is None:
        base = IdealGens.zero(circuit.field, circuit.n)
    visited = 0

    def rec(prefix: tuple, j: int):
        nonlocal visited
        if j == length:
            yield Path(base, prefix)
            return
        for v in nodes(circuit.terms[j], base.extend(prefix)):
            visited += 1
            if visited > cap:
                raise PathExplosion(f"path tree exceeds {cap} nodes")
            yield from rec(prefix + (v,), j + 1)

    yield from rec((), 0)


def enumerate_paths(circuit: Circuit, length: int, base: IdealGens | None = None,
                    cap: int = DEFAULT_PATH_CAP) -> list[Path]:
    return list(iter_paths(circuit, length, base, cap))


def path_is_valid(circuit: Circuit, path: Path) -> bool:
    """Re-derive every node choice of ``path`` against ``circuit``'s terms."""
    if path.length > len(circuit.terms):
        return False
    for j, v in enumerate(path.nodes):
        if v.field != circuit.field or v.n != circuit.n:
            return False
        allowed = nodes(circuit.terms[j], path.base.extend(path.nodes[:j]))
        if v.form_multiset() not in [a.form_multiset() for a in allowed]:
            return False
    return True


# --------------------------------------------------------------------------
# graded membership


def _as_poly(f, field: FieldSpec, n: int) -> SparsePoly:
    if isinstance(f, SparsePoly):
        poly = f
    elif isinstance(f, (MultiplicationTerm, Circuit)):
        poly = f.expand()
    else:
        raise TypeError(f"cannot test membership of {type(f).__name__}")
    if poly.field != field:
        raise FieldMismatch(f"polynomial over {poly.field}, ideal over {field}")
    if poly.n != n:
        raise DimensionMismatch(f"polynomial has {poly.n} variables, ideal has {n}")
    return poly


class GradedComponent:
    """The degree-``degree`` piece of a homogeneous ideal, as a row-echelon basis.

    Generators of higher degree contribute nothing to this piece, and
    generators that expand to zero are skipped.
    """

    def __init__(self, gens: IdealGens, degree: int, cap: int = DEFAULT_GRADED_CAP, track: bool = False):
        self.gens = gens
        self.degree = degree
        n = gens.n
        dim = comb(n + degree - 1, degree) if degree >= 0 else 0
        if dim > cap:
            raise GradedSpaceTooLarge(f"degree-{degree} space in {n} variables has {dim} monomials (cap {cap})")
        self.dimension = dim
        self.echelon = Echelon(gens.field, track=track)
        columns = 0
        for gi, g in enumerate(gens.generators):
            poly = g.expand()
            if poly.is_zero():
                continue
            e = poly.degree()
            if not poly.is_homogeneous():
                raise NotHomogeneous(f"generator {gi} is not homogeneous")
            if e > degree:
                continue
            shifts = monomials(n, degree - e)
            columns += len(shifts)
            if columns > cap:
                raise GradedSpaceTooLarge(f"more than {cap} generator multiples in degree {degree}")
            for mono in shifts:
                self.echelon.add(poly.shift(mono).terms, label=(gi, mono))
                if self.echelon.rank == dim and not track:
                    return

    def _check(self, poly: SparsePoly):
        if poly.is_zero():
            return
        if not poly.is_homogeneous():
            raise NotHomogeneous("membership needs a homogeneous polynomial")
        if poly.degree() != self.degree:
            raise ValueError(f"polynomial has degree {poly.degree()}, component has degree {self.degree}")

    def reduce(self, poly: SparsePoly) -> dict:
        self._check(poly)
        return self.echelon.reduce(poly.terms)

    def contains(self, poly: SparsePoly) -> bool:
        return not self.reduce(poly)


def membership(f, gens: IdealGens, cap: int = DEFAULT_GRADED_CAP) -> bool:
    """Whether the homogeneous polynomial (or term) ``f`` lies in the ideal."""
    poly = _as_poly(f, gens.field, gens.n)
    if poly.is_zero():
        return True
    if not poly.is_homogeneous():
        raise NotHomogeneous("membership needs a homogeneous polynomial")
    return GradedComponent(gens, poly.degree(), cap).contains(poly)


def membership_witness(f, gens: IdealGens, cap: int = DEFAULT_GRADED_CAP) -> list | None:
    """Explicit combination ``[(generator index, monomial, raw coefficient)]``
    with f = sum(coeff * monomial * generator), or None when f is not a member."""
    poly = _as_poly(f, gens.field, gens.n)
    if poly.is_zero():
        return []
    if not poly.is_homogeneous():
        raise NotHomogeneous("membership needs a homogeneous polynomial")
    comp = GradedComponent(gens, poly.degree(), cap, track=True)
    sol = comp.echelon.solve(poly.terms)
    if sol is None:
        return None
    return [(gi, mono, c) for (gi, mono), c in sorted(sol.items())]


def strip_radsp_factors(term: MultiplicationTerm, path: Path) -> MultiplicationTerm:
    """Product of exactly those forms of ``term`` lying in radsp(path).

    Returns the constant 1 (a term with no forms) when there are none.
    """
    e = _form_echelon(path.ideal())
    kept = [f for f in term.forms if e.contains(dense_to_sparse(f.raw))]
    return MultiplicationTerm(term.field, term.field.one, kept, n=term.n, allow_zero_forms=True)


# --------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Certificate:
    """Witness that a circuit is nonzero; ``i`` is 0-based and ``alpha`` raw."""

    i: int
    path: Path
    alpha: object
    field: FieldSpec = dc_field(compare=False, repr=False, default=None)

    def to_json(self, verified: bool | None = None) -> dict:
        doc = {"i": self.i, "path": self.path.to_json(), "alpha": self.field.format(self.alpha)}
        if verified is not None:
            doc["verified"] = verified
        return doc


def _ratio(field: FieldSpec, num: dict, den: dict):
    """alpha with num == alpha * den (den nonzero), or None."""
    if num.keys() != den.keys():
        return None
    key = next(iter(den))
    alpha = field.mul(num[key], field.inv(den[key]))
    for k, c in den.items():
        if field.mul(alpha, c) != num[k]:
            return None
    return alpha


def find_certificate(circuit: Circuit, path_cap: int = DEFAULT_PATH_CAP,
                     graded_cap: int = DEFAULT_GRADED_CAP) -> Certificate:
    """First certificate in enumeration order (index i, then depth-first paths)."""
    if circuit.expand().is_zero():
        raise CircuitIsZero("identically zero circuits have no certificate")
    F = circuit.field
    s = len(circuit.terms)
    base = IdealGens.zero(F, circuit.n)
    for i in range(s):
        rest = circuit.subcircuit(range(i, s)).expand()
        nxt = circuit.terms[i].expand()
        for path in iter_paths(circuit, i, base, path_cap):
            comp = GradedComponent(path.ideal(), circuit.d, graded_cap)
            r_next = comp.reduce(nxt)
            if not r_next:
                continue
            alpha = _ratio(F, comp.reduce(rest), r_next)
            if alpha is not None and alpha != 0:
                return Certificate(i, path, alpha, F)
    raise CertificateNotFound("no certificate found for a nonzero circuit; this is a bug")


def verify_certificate(circuit: Circuit, cert: Certificate, graded_cap: int = DEFAULT_GRADED_CAP) -> bool:
    """Check a certificate with the membership oracle.

    True iff alpha is nonzero, the path re-derives from the circuit, and the
    three membership conditions in the module docstring hold.
    """
    F = circuit.field
    if cert.path.base.field != F or cert.path.base.n != circuit.n:
        raise DimensionMismatch("certificate does not match the circuit")
    s = len(circuit.terms)
    if cert.alpha == 0 or not 0 <= cert.i < s or cert.path.length != cert.i:
        return False
    if not path_is_valid(circuit, cert.path):
        return False
    ideal = cert.path.ideal()
    head = circuit.subcircuit(range(cert.i)).expand()
    tail = circuit.subcircuit(range(cert.i, s)).expand()
    nxt = circuit.terms[cert.i].expand()
    return (
        membership(head, ideal, graded_cap)
        and membership(tail - nxt.scale(cert.alpha), ideal, graded_cap)
        and not membership(nxt, ideal, graded_cap)
    )


def certificate_from_json(circuit: Circuit, doc: dict) -> Certificate:
    F = circuit.field
    base = IdealGens.zero(F, circuit.n)
    path_nodes = tuple(
        MultiplicationTerm(F, t.get("scalar", "1"), [LinearForm(F, f) for f in t["forms"]], n=circuit.n,
                           allow_zero_forms=True)
        for t in doc["path"]
    )
    return Certificate(int(doc["i"]), Path(base, path_nodes), F.parse(doc["alpha"]), F)


def map_ideal(psi, gens: IdealGens) -> IdealGens:
    """Image of the generators under a reduction map."""
    return IdealGens(gens.field, psi.k, [psi.apply_term(g) for g in gens.generators])
