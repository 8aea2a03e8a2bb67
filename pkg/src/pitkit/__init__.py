"""Exact-arithmetic identity testing for sum-product-sum circuits.

The deterministic test evaluates a circuit on an explicit hitting set built
from Vandermonde variable reductions; nonzero circuits can additionally be
certified through ideal paths checked by graded linear algebra.
"""
from .circuit import Circuit, LinearForm, MultiplicationTerm, SparsePoly, evaluate, expand, homogenize, parse_circuit
from . import exceptions
from .exceptions import *  # noqa: F401,F403
from .field import GF, QQ, Embedding, FieldElement, FieldSpec, ensure_min_size, field_from_spec, find_irreducible
from .hitting import (HittingPoint, Verdict, blackbox_test, circuit_oracle, hitting_set, hitting_set_size,
                      schwartz_zippel_test, whitebox_test)
from .ideals import (Certificate, IdealGens, find_certificate, membership, nodes, radsp, similarity_classes,
                     verify_certificate)
from .reduce import ReductionMap, build_psi, count_bad_betas, rank, reduction_family

__all__ = [
    "Circuit", "LinearForm", "MultiplicationTerm", "SparsePoly", "evaluate", "expand", "homogenize", "parse_circuit",
    "GF", "QQ", "Embedding", "FieldElement", "FieldSpec", "ensure_min_size", "field_from_spec", "find_irreducible",
    "HittingPoint", "Verdict", "blackbox_test", "circuit_oracle", "hitting_set", "hitting_set_size",
    "schwartz_zippel_test", "whitebox_test",
    "Certificate", "IdealGens", "find_certificate", "membership", "nodes", "radsp", "similarity_classes",
    "verify_certificate",
    "ReductionMap", "build_psi", "count_bad_betas", "rank", "reduction_family",
] + [name for name, obj in vars(exceptions).items() if isinstance(obj, type) and issubclass(obj, Exception)]

__version__ = "0.1.0"
