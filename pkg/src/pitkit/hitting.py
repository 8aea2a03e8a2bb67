"""Explicit hitting sets and identity tests for ΣΠΣ(k, d, n) circuits.

The hitting set pairs every beta from the first d*n*k^2 + 1 field elements
with every gamma in T^k, T the first d + 1 field elements, and contains the
points delta_i = sum_j beta^(i*j) gamma_j.  For a circuit C this gives
C(delta) == psi_beta(C)(gamma), so a nonzero circuit is caught by some
point: some beta keeps it nonzero and a degree-d polynomial in k variables
cannot vanish on all of T^k.

Points come out ordered by beta, then gamma in odometer order (last
coordinate fastest).  Everything is deterministic.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator, Sequence

import numpy as np

from .circuit import Circuit
from .exceptions import FieldTooSmall, OracleError, PitError
from .field import FieldElement, FieldSpec, ensure_min_size
from .reduce import ReductionMap, family_size
from .rng import StableRng


class HittingPoint:
    """A query point delta with its (beta, gamma) provenance, all raw values.

    ``beta`` and ``gamma`` are None for points that did not come from the
    hitting set (random-test witnesses).
    """

    __slots__ = ("field", "beta", "gamma", "delta")

    def __init__(self, field: FieldSpec, beta, gamma, delta):
        self.field = field
        self.beta = beta
        self.gamma = gamma
        self.delta = delta

    @property
    def point(self) -> tuple[FieldElement, ...]:
        return self.field.elements(self.delta)

    def recompute(self) -> list:
        """delta re-derived from (beta, gamma) without the reduction map."""
        F = self.field
        k = len(self.gamma)
        out = []
        for i in range(1, len(self.delta) + 1):
            acc = F.zero
            for j in range(1, k + 1):
                acc = F.add(acc, F.mul(F.pow(self.beta, i * j), self.gamma[j - 1]))
            out.append(acc)
        return out

    def is_consistent(self) -> bool:
        return self.beta is None or list(self.delta) == self.recompute()

    def to_json(self) -> dict:
        fmt = self.field.format
        doc = {"delta": [fmt(x) for x in self.delta]}
        if self.beta is not None:
            doc = {"beta": fmt(self.beta), "gamma": [fmt(x) for x in self.gamma], **doc}
        return doc

    def __eq__(self, other):
        if not isinstance(other, HittingPoint):
            return NotImplemented
        return (self.field, self.beta, self.gamma, tuple(self.delta)) == (
            other.field, other.beta, other.gamma, tuple(other.delta))

    def __repr__(self):
        return f"HittingPoint({self.to_json()})"


def hitting_set_size(k: int, d: int, n: int) -> int:
    return family_size(k, d, n) * (d + 1) ** k


def required_size(k: int, d: int, n: int) -> int:
    """The field must have more elements than this."""
    return max(d * n * k * k, d)


def check_field_size(field: FieldSpec, k: int, d: int, n: int) -> None:
    need = required_size(k, d, n)
    if field.order is not None and field.order <= need:
        raise FieldTooSmall(f"{field} has {field.order} elements; hitting set for k={k}, d={d}, n={n} "
                            f"needs more than {need} (lift with ensure_min_size)")


def _numpy_ok(field: FieldSpec, k: int) -> bool:
    return field.order is not None and field.order < (1 << 62) and field.p * (k + 1) < (1 << 62)


def _grid_deltas(field: FieldSpec, psi: ReductionMap, T: Sequence, k: int) -> list[list]:
    """delta vectors for every gamma in T^k (odometer order), one beta."""
    n = psi.n
    mul = field.mul
    scaled = [[[mul(psi.matrix[i][j], t) for i in range(n)] for t in T] for j in range(k)]
    if not _numpy_ok(field, k):
        add = field.add
        out = []
        for gamma in product(range(len(T)), repeat=k):
            acc = scaled[0][gamma[0]]
            for j in range(1, k):
                acc = [add(a, b) for a, b in zip(acc, scaled[j][gamma[j]])]
            out.append(acc)
        return out
    p, m = field.p, field.m
    s = len(T)
    arr = np.array([[[field.coeffs(x) for x in vec] for vec in row] for row in scaled], dtype=np.int64)
    # arr: (k, s, n, m) coefficient digits
    acc = arr[0].reshape((s,) + (1,) * (k - 1) + (n, m))
    for j in range(1, k):
        part = arr[j].reshape((1,) * j + (s,) + (1,) * (k - 1 - j) + (n, m))
        acc = (acc + part) % p
    acc = np.broadcast_to(acc, (s,) * k + (n, m)).reshape(-1, n, m)
    if m == 1:
        return acc[:, :, 0].tolist()
    powers = np.array([p**i for i in range(m)], dtype=np.int64)
    return (acc @ powers).tolist()


def iter_betas(field: FieldSpec, k: int, d: int, n: int) -> Iterator:
    for i in range(family_size(k, d, n)):
        yield field.nth(i)


def hitting_set(k: int, d: int, n: int, field: FieldSpec) -> Iterator[HittingPoint]:
    """Stream the (d*n*k^2 + 1) * (d + 1)^k points of the hitting set.

    ``field`` must already be large enough; see :func:`ensure_min_size`.
    """
    check_field_size(field, k, d, n)
    T = field.first(d + 1)
    gammas = list(product(T, repeat=k))
    for beta in iter_betas(field, k, d, n):
        psi = ReductionMap(field, beta, n, k)
        for gamma, delta in zip(gammas, _grid_deltas(field, psi, T, k)):
            yield HittingPoint(field, beta, gamma, delta)


# --------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    """Outcome of an identity test.

    ``outcome`` is "zero", "nonzero" or, for the randomized test,
    "probably_zero".  Nonzero verdicts carry the witness point and value.
    """

    outcome: str
    field: FieldSpec
    witness: HittingPoint | None = None
    value: FieldElement | None = None
    points_evaluated: int = 0
    elapsed: float = 0.0
    error_bound: Fraction | None = None
    trials: list = dc_field(default_factory=list, repr=False)

    @property
    def is_zero(self) -> bool:
        return self.outcome != "nonzero"

    def replay(self, oracle: Callable) -> bool:
        """Re-query the witness and confirm the recorded nonzero value."""
        if self.witness is None:
            return False
        return _query(oracle, self.field, self.witness.delta) == self.value.raw

    def to_json(self) -> dict:
        doc = {
            "verdict": "nonzero" if self.outcome == "nonzero" else "zero",
            "witness": None,
            "points_evaluated": self.points_evaluated,
            "elapsed_ms": round(self.elapsed * 1000, 3),
        }
        if self.witness is not None:
            doc["witness"] = {**self.witness.to_json(), "value": self.value.to_json()}
        if self.outcome == "probably_zero":
            doc["probabilistic"] = True
            doc["error_bound"] = str(self.error_bound)
        doc["field"] = self.field.to_json()
        return doc


def _query(oracle, field: FieldSpec, delta):
    try:
        fast = getattr(oracle, "evaluate_raw", None)
        if fast is not None:
            return fast(delta)
        value = oracle(field.elements(delta))
    except PitError:
        raise
    except Exception as e:
        raise OracleError(f"oracle failed at {[field.format(x) for x in delta]}: {e}") from e
    try:
        return field.parse(value)
    except PitError as e:
        raise OracleError(f"oracle returned {value!r}, not an element of {field}") from e


def blackbox_test(oracle: Callable, k: int, d: int, n: int, field: FieldSpec) -> Verdict:
    """Deterministic identity test using only evaluations.

    The hitting set is built over ``field`` lifted by :func:`ensure_min_size`
    when it is too small; the oracle must then accept points of the lifted
    field (tuples of FieldElements).  Oracles exposing ``evaluate_raw`` --
    circuits do -- are called with raw coordinates instead.  Returns at the
    first nonzero evaluation.
    """
    start = time.perf_counter()
    big, _ = ensure_min_size(field, required_size(k, d, n))
    count = 0
    for pt in hitting_set(k, d, n, big):
        count += 1
        v = _query(oracle, big, pt.delta)
        if v != 0:
            return Verdict("nonzero", big, pt, big.element(v), count, time.perf_counter() - start)
    return Verdict("zero", big, points_evaluated=count, elapsed=time.perf_counter() - start)


def whitebox_test(circuit: Circuit) -> Verdict:
    """Same verdict as :func:`blackbox_test`, computed from the circuit's terms:
    reduce to k variables per beta and scan the (d+1)^k grid."""
    start = time.perf_counter()
    k, d, n = circuit.k, circuit.d, circuit.n
    big, emb = ensure_min_size(circuit.field, required_size(k, d, n))
    lifted = circuit.lift(emb)
    T = big.first(d + 1)
    gammas = list(product(T, repeat=k))
    count = 0
    for beta in iter_betas(big, k, d, n):
        psi = ReductionMap(big, beta, n, k)
        reduced = psi.apply_circuit(lifted)
        if len(reduced.zero_terms) == len(reduced.terms):
            count += len(gammas)
            continue
        for gamma in gammas:
            count += 1
            v = reduced.evaluate_raw(gamma)
            if v != 0:
                pt = HittingPoint(big, beta, gamma, psi.point(gamma))
                return Verdict("nonzero", big, pt, big.element(v), count, time.perf_counter() - start)
    return Verdict("zero", big, points_evaluated=count, elapsed=time.perf_counter() - start)


def schwartz_zippel_test(oracle: Callable, n: int, d: int, sample_set_size: int, trials: int,
                         rng_seed: int, field: FieldSpec) -> Verdict:
    """Randomized test on uniform points of T^n, T the first
    ``sample_set_size`` field elements.  A "probably_zero" verdict is wrong
    with probability at most (d / |T|) ** trials."""
    start = time.perf_counter()
    big, _ = ensure_min_size(field, max(sample_set_size - 1, 0))
    T = big.first(sample_set_size)
    rng = StableRng(rng_seed)
    log = []
    for t in range(trials):
        delta = [T[rng.below(len(T))] for _ in range(n)]
        v = _query(oracle, big, delta)
        log.append((tuple(delta), v))
        if v != 0:
            pt = HittingPoint(big, None, None, delta)
            return Verdict("nonzero", big, pt, big.element(v), t + 1, time.perf_counter() - start, trials=log)
    bound = Fraction(d, sample_set_size) ** trials
    return Verdict("probably_zero", big, points_evaluated=trials, elapsed=time.perf_counter() - start,
                   error_bound=bound, trials=log)


def circuit_oracle(circuit: Circuit, bound: int | None = None) -> Circuit:
    """The circuit over the field that the testers query for it.

    With ``bound`` None this is the hitting-set size requirement for the
    circuit's own (k, d, n); otherwise the field is grown past ``bound``.
    """
    if bound is None:
        bound = required_size(circuit.k, circuit.d, circuit.n)
    _, emb = ensure_min_size(circuit.field, bound)
    return circuit if emb.is_identity else circuit.lift(emb)
