"""scikit-learn style wrappers.

``IdentityTester`` is a classifier whose prediction for a circuit is 1 when
it is nonzero and 0 when it is identically zero, so ``score`` against
expansion labels measures agreement.  ``VandermondeReducer`` transforms
circuits in n variables into circuits in k variables.  Inputs may be
``Circuit`` objects, circuit JSON documents, or labeled corpus entries.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .circuit import DEFAULT_EXPAND_CAP, Circuit, parse_circuit
from .corpus import LabeledCircuit
from .exceptions import DimensionMismatch, FieldMismatch
from .hitting import blackbox_test, circuit_oracle, schwartz_zippel_test, whitebox_test
from .reduce import ReductionMap

_MODES = ("hitting", "whitebox", "random", "expand")


def check_circuits(X: Iterable) -> list[Circuit]:
    """Normalize ``X`` to a list of validated circuits."""
    if isinstance(X, (Circuit, dict, LabeledCircuit)):
        raise TypeError("expected a sequence of circuits, got a single circuit")
    out = []
    for item in X:
        if isinstance(item, Circuit):
            out.append(item)
        elif isinstance(item, LabeledCircuit):
            out.append(item.circuit)
        elif isinstance(item, dict):
            out.append(parse_circuit(item["circuit"] if "circuit" in item and "terms" not in item else item))
        else:
            raise TypeError(f"cannot interpret {type(item).__name__} as a circuit")
    return out


class IdentityTester(ClassifierMixin, BaseEstimator):
    def __init__(self, mode: str = "hitting", expand_cap: int = DEFAULT_EXPAND_CAP, seed: int = 0,
                 trials: int = 40):
        self.mode = mode
        self.expand_cap = expand_cap
        self.seed = seed
        self.trials = trials

    def fit(self, X, y=None):
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")
        circuits = check_circuits(X)
        self.classes_ = np.array([0, 1])
        self.n_circuits_ = len(circuits)
        self.fields_ = sorted({str(c.field) for c in circuits})
        return self

    def _decide(self, C: Circuit) -> int:
        if self.mode == "expand":
            return int(not C.is_zero(self.expand_cap))
        if self.mode == "hitting":
            v = blackbox_test(circuit_oracle(C), C.k, C.d, C.n, C.field)
        elif self.mode == "whitebox":
            v = whitebox_test(C)
        else:
            size = max(2 * C.d, 2)
            v = schwartz_zippel_test(circuit_oracle(C, size - 1), C.n, C.d, size, self.trials, self.seed, C.field)
        return int(not v.is_zero)

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "classes_")
        return np.array([self._decide(C) for C in check_circuits(X)], dtype=np.int64)


class VandermondeReducer(TransformerMixin, BaseEstimator):
    """Apply the reduction map for one ``beta`` (a FieldElement, or a value
    parsed in the circuits' field).  ``k`` defaults to the largest top fanin
    seen in ``fit``."""

    def __init__(self, beta=2, k: int | None = None):
        self.beta = beta
        self.k = k

    def fit(self, X, y=None):
        circuits = check_circuits(X)
        if not circuits:
            raise ValueError("fit needs at least one circuit")
        fields = {c.field for c in circuits}
        if len(fields) > 1:
            raise FieldMismatch("all circuits must share one field")
        ns = {c.n for c in circuits}
        if len(ns) > 1:
            raise DimensionMismatch("all circuits must have the same number of variables")
        self.field_ = circuits[0].field
        self.n_ = circuits[0].n
        self.k_ = self.k if self.k is not None else max(c.k for c in circuits)
        self.beta_ = self.field_.parse(self.beta)
        self.map_ = ReductionMap(self.field_, self.beta_, self.n_, self.k_)
        return self

    def transform(self, X) -> list[Circuit]:
        check_is_fitted(self, "map_")
        circuits = check_circuits(X)
        for c in circuits:
            if c.field != self.field_ or c.n != self.n_:
                raise DimensionMismatch(f"circuit over {c.field} with n={c.n}; fitted on {self.field_}, n={self.n_}")
        return [self.map_.apply_circuit(c) for c in circuits]
