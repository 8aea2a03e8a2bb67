"""Vandermonde variable reduction x_i -> sum_j beta^(i*j) y_j.

The map sends a circuit in n variables to one in k variables.  Over a field
with more than d*n*k^2 elements, taking the first d*n*k^2 + 1 field elements
as beta values gives a family of maps under which a ΣΠΣ(k, d, n) circuit is
identically zero exactly when all of its images are.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .circuit import Circuit, LinearForm, MultiplicationTerm, SparsePoly
from .exceptions import DimensionMismatch, FieldMismatch, FieldTooSmall
from .field import FieldElement, FieldSpec
from .linalg import Echelon, dense_to_sparse, rank as _rank


class ReductionMap:
    """The homomorphism F[x_1..x_n] -> F[y_1..y_k] for one beta.

    ``matrix[i][j]`` holds beta^((i+1)*(j+1)) as a raw field value; row i is
    the image of x_{i+1}.
    """

    __slots__ = ("field", "beta", "n", "k", "matrix")

    def __init__(self, field: FieldSpec, beta, n: int, k: int):
        if n < 1 or k < 1:
            raise DimensionMismatch(f"need n >= 1 and k >= 1, got n={n}, k={k}")
        self.field = field
        # beta is raw: an int is an encoding, not a prime-subfield constant
        if isinstance(beta, FieldElement):
            beta = field.parse(beta)
        self.beta = beta
        self.n = n
        self.k = k
        mul = field.mul
        rows = []
        base = field.one
        for _ in range(n):
            base = mul(base, self.beta)  # beta^i
            row = [base]
            for _ in range(k - 1):
                row.append(mul(row[-1], base))
            rows.append(tuple(row))
        self.matrix = tuple(rows)

    @property
    def beta_element(self) -> FieldElement:
        return self.field.element(self.beta)

    def __repr__(self):
        return f"ReductionMap(beta={self.field.to_str(self.beta)}, n={self.n}, k={self.k}, {self.field})"

    def apply_raw(self, coeffs: Sequence) -> list:
        F = self.field
        if len(coeffs) != self.n:
            raise DimensionMismatch(f"form has {len(coeffs)} coefficients, map expects {self.n}")
        cols = zip(*self.matrix)
        return [F.dot(coeffs, col) for col in cols]

    def apply_form(self, form: LinearForm) -> LinearForm:
        if form.field != self.field:
            raise FieldMismatch(f"form over {form.field}, map over {self.field}")
        return LinearForm.from_raw(self.field, self.apply_raw(form.raw))

    def apply_term(self, term: MultiplicationTerm) -> MultiplicationTerm:
        if term.n != self.n:
            raise DimensionMismatch(f"term has {term.n} variables, map expects {self.n}")
        return MultiplicationTerm(self.field, self.field.element(term.scalar), [self.apply_form(f) for f in term.forms],
                                  n=self.k, allow_zero_forms=True)

    def apply_circuit(self, circuit: Circuit) -> Circuit:
        """Image circuit over k variables; terms that hit a zero form are kept
        and listed in the result's ``zero_terms``."""
        if circuit.field != self.field:
            raise FieldMismatch(f"circuit over {circuit.field}, map over {self.field}")
        if circuit.n != self.n:
            raise DimensionMismatch(f"circuit has {circuit.n} variables, map expects {self.n}")
        cache: dict = {}
        terms = []
        for t in circuit.terms:
            forms = []
            for f in t.forms:
                img = cache.get(f.raw)
                if img is None:
                    img = cache[f.raw] = self.apply_form(f)
                forms.append(img)
            terms.append(MultiplicationTerm(self.field, self.field.element(t.scalar), forms, n=self.k, allow_zero_forms=True))
        return Circuit(self.field, self.k, circuit.d, circuit.k, terms, allow_zero_forms=True)

    def images(self) -> list[SparsePoly]:
        """Images of x_1..x_n as polynomials in y_1..y_k."""
        F = self.field
        out = []
        for row in self.matrix:
            terms = {}
            for j, c in enumerate(row):
                e = [0] * self.k
                e[j] = 1
                terms[tuple(e)] = c
            out.append(SparsePoly(F, self.k, terms))
        return out

    def apply_poly(self, poly: SparsePoly) -> SparsePoly:
        """Apply the map to an arbitrary polynomial, monomial by monomial."""
        if poly.n != self.n:
            raise DimensionMismatch(f"polynomial has {poly.n} variables, map expects {self.n}")
        return poly.substitute(self.images())

    def point(self, gamma: Sequence) -> list:
        """delta with delta_i = sum_j beta^(i*j) gamma_j, so that
        C(delta) == apply_circuit(C)(gamma)."""
        F = self.field
        return [F.dot(row, gamma) for row in self.matrix]


def build_psi(beta, n: int, k: int, field: FieldSpec | None = None) -> ReductionMap:
    """Reduction map for ``beta`` (a FieldElement, or a raw/int value with ``field``)."""
    if isinstance(beta, FieldElement):
        field = beta.field
    if field is None:
        raise ValueError("field is required when beta is not a FieldElement")
    return ReductionMap(field, field.parse(beta), n, k)


def rank(forms: Sequence[LinearForm]) -> int:
    """Rank of a list of linear forms as vectors in F^n; rank([]) == 0."""
    if not forms:
        return 0
    F = forms[0].field
    n = forms[0].n
    for f in forms:
        if f.field != F:
            raise FieldMismatch(f"forms over {f.field} and {F}")
        if f.n != n:
            raise DimensionMismatch("forms of different lengths")
    return _rank(F, (f.raw for f in forms))


def family_size(k: int, d: int, n: int) -> int:
    return d * n * k * k + 1


def reduction_family(k: int, d: int, n: int, field: FieldSpec) -> list[ReductionMap]:
    """The d*n*k^2 + 1 maps whose betas are the first elements of ``field``."""
    size = family_size(k, d, n)
    if field.order is not None and field.order < size:
        raise FieldTooSmall(f"{field} has {field.order} elements, need more than {size - 1}")
    return [ReductionMap(field, b, n, k) for b in field.first(size)]


def count_bad_betas(forms: Sequence[LinearForm], candidates: Iterable, k: int) -> tuple[int, list]:
    """Candidates (raw values) for which the map drops the rank of ``forms``."""
    forms = list(forms)
    if not forms:
        return 0, []
    F = forms[0].field
    n = forms[0].n
    r = rank(forms)
    if r > k:
        raise ValueError(f"rank {r} exceeds k={k}")
    bad = []
    for b in candidates:
        if isinstance(b, FieldElement):
            b = F.parse(b)
        psi = ReductionMap(F, b, n, k)
        if _rank(F, (psi.apply_raw(f.raw) for f in forms)) < r:
            bad.append(b)
    return len(bad), bad


def express_variables(psi: ReductionMap, forms: Sequence[LinearForm]) -> list[dict] | None:
    """For each y_j, coefficients c with y_j = sum_i c_i * psi(forms[i]).

    Returns None if some y_j is outside the span of the mapped forms (the
    map is then not onto the linear part).
    """
    F = psi.field
    e = Echelon(F, track=True)
    for i, f in enumerate(forms):
        e.add(dense_to_sparse(psi.apply_raw(f.raw)), label=i)
    out = []
    for j in range(psi.k):
        sol = e.solve({j: F.one})
        if sol is None:
            return None
        out.append(sol)
    return out
