"""Labeled circuit corpora and the multi-mode suite runner.

Zero circuits are built on purpose so that a healthy share of every corpus is
identically zero.  Three constructions are used:

* cancellation: k copies of one product with permuted form lists whose
  scalars sum to zero;
* ``u*v + u*(u+v) + u*u``, which vanishes in characteristic 2;
* ``(u+v)*(u-v) - u*u + v*v``, which vanishes in every characteristic.

u, v are random forms and the identities are padded to degree d by a shared
random factor.  Every circuit, built-to-be-zero or not, is labeled by full
expansion.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .circuit import DEFAULT_EXPAND_CAP, Circuit, LinearForm, MultiplicationTerm, parse_circuit
from .exceptions import MalformedDocument, PitError
from .field import GF, QQ, FieldSpec
from .hitting import blackbox_test, circuit_oracle, schwartz_zippel_test, whitebox_test
from .ideals import find_certificate, verify_certificate
from .rng import StableRng

MODES = ("hitting", "whitebox", "random", "expand", "certify")


def default_fields() -> list[FieldSpec]:
    return [GF(101), GF(2), GF(2, 3), QQ]


@dataclass
class CorpusSpec:
    seed: int = 0
    count: int = 100
    k_range: tuple[int, int] = (1, 3)
    d_range: tuple[int, int] = (1, 4)
    n_range: tuple[int, int] = (1, 5)
    fields: Sequence[FieldSpec] = dc_field(default_factory=default_fields)
    zero_fraction: float = 0.3
    expand_cap: int = DEFAULT_EXPAND_CAP

    def __post_init__(self):
        for name in ("k_range", "d_range", "n_range"):
            lo, hi = getattr(self, name)
            if lo < 1 or hi < lo:
                raise ValueError(f"{name} must be a nonempty range of positive integers, got {(lo, hi)}")
        if not 0 <= self.zero_fraction <= 1:
            raise ValueError("zero_fraction must lie in [0, 1]")
        if not self.fields:
            raise ValueError("at least one field is required")
        if self.count < 0:
            raise ValueError("count must be nonnegative")


@dataclass
class LabeledCircuit:
    circuit: Circuit
    is_zero: bool
    construction: str

    @property
    def label(self) -> str:
        return "zero" if self.is_zero else "nonzero"

    def to_json(self) -> dict:
        return {"label": self.label, "construction": self.construction, "circuit": self.circuit.to_json()}

    @classmethod
    def from_json(cls, doc: dict) -> "LabeledCircuit":
        if not isinstance(doc, dict) or "circuit" not in doc or doc.get("label") not in ("zero", "nonzero"):
            raise MalformedDocument('corpus entry needs "circuit" and a "label" of "zero" or "nonzero"')
        return cls(parse_circuit(doc["circuit"]), doc["label"] == "zero", doc.get("construction", "external"))


# --------------------------------------------------------------------------
# building blocks


def random_form(rng: StableRng, field: FieldSpec, n: int) -> LinearForm:
    """Nonzero form; each coefficient is zero with probability 1/2."""
    while True:
        raw = [rng.field_element(field, 6) if rng.coin() else field.zero for _ in range(n)]
        if any(c != 0 for c in raw):
            return LinearForm.from_raw(field, raw)


def _term(field: FieldSpec, scalar, forms: Sequence[LinearForm]) -> MultiplicationTerm:
    return MultiplicationTerm(field, field.element(scalar), forms)


def random_circuit(rng: StableRng, field: FieldSpec, k: int, d: int, n: int) -> Circuit:
    terms = []
    for _ in range(1 + rng.below(k)):
        terms.append(_term(field, rng.nonzero_element(field), [random_form(rng, field, n) for _ in range(d)]))
    return Circuit(field, n, d, k, terms)


def cancellation_circuit(rng: StableRng, field: FieldSpec, k: int, d: int, n: int) -> Circuit:
    """Terms c_j * perm_j(P) with sum(c_j) == 0; needs k >= 2."""
    forms = [random_form(rng, field, n) for _ in range(d)]
    parts = 2 + rng.below(k - 1)
    if field.order == 2 and parts % 2:
        parts -= 1  # over F_2 all scalars are 1, so only an even count cancels
    while True:
        scalars = [rng.nonzero_element(field) for _ in range(parts - 1)]
        last = field.sub(field.zero, field.sum(scalars))
        if last != 0:
            break
    terms = []
    for c in scalars + [last]:
        perm = list(forms)
        rng.shuffle(perm)
        terms.append(_term(field, c, perm))
    return Circuit(field, n, d, k, terms)


def _minus(field: FieldSpec, form: LinearForm) -> LinearForm:
    return form.scale(field.sub(field.zero, field.one))


def _independent_pair(rng: StableRng, field: FieldSpec, n: int) -> tuple[LinearForm, LinearForm]:
    """Forms u, v with u + v and u - v both nonzero."""
    while True:
        u, v = random_form(rng, field, n), random_form(rng, field, n)
        if not (u + v).is_zero() and not (u + _minus(field, v)).is_zero():
            return u, v


def char2_identity(rng: StableRng, field: FieldSpec, k: int, d: int, n: int) -> Circuit:
    u, v = _independent_pair(rng, field, n)
    pad = [random_form(rng, field, n) for _ in range(d - 2)]
    terms = [_term(field, 1, [u, v] + pad), _term(field, 1, [u, u + v] + pad), _term(field, 1, [u, u] + pad)]
    return Circuit(field, n, d, k, terms)


def squares_identity(rng: StableRng, field: FieldSpec, k: int, d: int, n: int) -> Circuit:
    u, v = _independent_pair(rng, field, n)
    pad = [random_form(rng, field, n) for _ in range(d - 2)]
    minus_one = field.sub(field.zero, field.one)
    terms = [_term(field, 1, [u + v, u + _minus(field, v)] + pad), _term(field, minus_one, [u, u] + pad),
             _term(field, 1, [v, v] + pad)]
    return Circuit(field, n, d, k, terms)


def f2_identity(field: FieldSpec | None = None) -> Circuit:
    """``x*y + x*(x+y) + x*x`` in two variables, zero over any field of characteristic 2."""
    F = GF(2) if field is None else field
    if F.p != 2 or F.order is None:
        raise ValueError("this identity needs characteristic 2")
    x, y = LinearForm.variable(F, 2, 0), LinearForm.variable(F, 2, 1)
    return Circuit(F, 2, 2, 3, [_term(F, 1, [x, y]), _term(F, 1, [x, x + y]), _term(F, 1, [x, x])])


def _zero_constructions(field: FieldSpec, k: int, d: int, n: int) -> list:
    out = []
    if k >= 2:
        out.append(("cancellation", cancellation_circuit))
    # the identities need forms u, v with u + v and u - v nonzero
    pair_exists = n >= 2 or field.order is None or field.order > 3
    if k >= 3 and d >= 2 and pair_exists:
        out.append(("squares_identity", squares_identity))
        if field.p == 2 and field.order is not None:
            out.append(("char2_identity", char2_identity))
    return out


def _perturb(rng: StableRng, circuit: Circuit) -> Circuit:
    """Multiply one term scalar by a random nonzero value other than 1."""
    F = circuit.field
    if F.order == 2:
        return circuit.subcircuit([j for j in range(len(circuit.terms)) if j != rng.below(len(circuit.terms))])
    while True:
        c = rng.nonzero_element(F)
        if c != F.one:
            break
    j = rng.below(len(circuit.terms))
    terms = list(circuit.terms)
    terms[j] = terms[j].with_scalar(F.element(F.mul(terms[j].scalar, c)))
    return circuit.with_terms(terms)


def generate_corpus(spec: CorpusSpec) -> list[LabeledCircuit]:
    """Deterministic per seed.  ``round(count * zero_fraction)`` positions are
    built to be zero when (k, d) allow a construction; the rest are random
    circuits or perturbed zero constructions ("near misses")."""
    rng = StableRng(spec.seed)
    positions = list(range(spec.count))
    rng.shuffle(positions)
    zero_slots = set(positions[:round(spec.count * spec.zero_fraction)])
    k_lo, k_hi = spec.k_range
    d_lo, d_hi = spec.d_range
    out = []
    for idx in range(spec.count):
        field = rng.choice(list(spec.fields))
        k, d = rng.randint(k_lo, k_hi), rng.randint(d_lo, d_hi)
        n = rng.randint(*spec.n_range)
        want_zero = idx in zero_slots
        if want_zero and k < 2 <= k_hi:
            k = rng.randint(2, k_hi)
        if want_zero and k >= 3 and d < 2 <= d_hi and rng.coin():
            d = rng.randint(2, d_hi)
        options = _zero_constructions(field, k, d, n)
        if options and (want_zero or rng.coin(1, 4)):
            name, build = rng.choice(options)
            circuit = build(rng, field, k, d, n)
            if not want_zero:
                circuit, name = _perturb(rng, circuit), name + "_perturbed"
        else:
            circuit, name = random_circuit(rng, field, k, d, n), "random"
        out.append(LabeledCircuit(circuit, circuit.is_zero(spec.expand_cap), name))
    return out


# --------------------------------------------------------------------------
# suite


@dataclass
class RunReport:
    """One entry per circuit: the verdict of each mode, the label, and whether
    all verdict-producing modes agree with the label."""

    modes: tuple[str, ...]
    entries: list[dict] = dc_field(default_factory=list)
    elapsed: float = 0.0

    @property
    def all_agree(self) -> bool:
        return all(e["agree"] for e in self.entries)

    @property
    def disagreements(self) -> list[dict]:
        return [e for e in self.entries if not e["agree"]]

    def summary(self) -> dict:
        n = len(self.entries)
        per_mode = {}
        for m in self.modes:
            vals = [e["verdicts"][m] for e in self.entries]
            per_mode[m] = {v: vals.count(v) for v in sorted(set(vals))}
        return {
            "circuits": n,
            "modes": list(self.modes),
            "agreement": sum(e["agree"] for e in self.entries),
            "all_agree": self.all_agree,
            "zero_labels": sum(e["label"] == "zero" for e in self.entries),
            "per_mode": per_mode,
            "elapsed_s": round(self.elapsed, 3),
        }

    def to_json(self) -> dict:
        return {"summary": self.summary(), "entries": self.entries}


def _as_label(outcome: str) -> str:
    return "nonzero" if outcome == "nonzero" else "zero"


def run_one(item: LabeledCircuit, modes: Sequence[str], seed: int = 0,
            expand_cap: int = DEFAULT_EXPAND_CAP) -> dict:
    C = item.circuit
    verdicts: dict = {}
    timings: dict = {}
    witnesses: dict = {}
    for mode in modes:
        start = time.perf_counter()
        try:
            if mode == "hitting":
                v = blackbox_test(circuit_oracle(C), C.k, C.d, C.n, C.field)
            elif mode == "whitebox":
                v = whitebox_test(C)
            elif mode == "random":
                size = 100 * max(C.d, 1)
                v = schwartz_zippel_test(circuit_oracle(C, size - 1), C.n, C.d, size, 20, seed, C.field)
            elif mode == "expand":
                v = None
                verdicts[mode] = "zero" if C.is_zero(expand_cap) else "nonzero"
            elif mode == "certify":
                v = None
                if item.is_zero:
                    verdicts[mode] = "skipped"
                else:
                    cert = find_certificate(C)
                    verdicts[mode] = "verified" if verify_certificate(C, cert) else "failed"
            else:
                raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
        except PitError as e:
            v = None
            verdicts[mode] = f"error: {type(e).__name__}"
        if v is not None:
            verdicts[mode] = _as_label(v.outcome)
            if v.witness is not None:
                witnesses[mode] = v.to_json()["witness"]
        timings[mode] = round((time.perf_counter() - start) * 1000, 3)
    agree = all(
        (verdicts[m] in ("verified", "skipped")) if m == "certify" else verdicts[m] == item.label
        for m in modes
    )
    return {
        "label": item.label,
        "construction": item.construction,
        "k": C.k, "d": C.d, "n": C.n,
        "field": C.field.to_json(),
        "verdicts": verdicts,
        "agree": agree,
        "timings_ms": timings,
        "witnesses": witnesses,
    }


def _run_chunk(args):
    items, modes, seed, cap = args
    return [run_one(it, modes, seed, cap) for it in items]


def run_suite(corpus: Iterable[LabeledCircuit], modes: Sequence[str] = ("hitting", "expand"), *,
              seed: int = 0, jobs: int = 1, expand_cap: int = DEFAULT_EXPAND_CAP) -> RunReport:
    """Run every mode on every circuit and cross-check against the labels.

    With ``jobs > 1`` circuits are spread over worker processes; entries keep
    corpus order either way.
    """
    modes = tuple(modes)
    for m in modes:
        if m not in MODES:
            raise ValueError(f"unknown mode {m!r}; expected one of {MODES}")
    corpus = list(corpus)
    start = time.perf_counter()
    if jobs <= 1 or len(corpus) < 2:
        entries = [run_one(it, modes, seed, expand_cap) for it in corpus]
    else:
        size = max(1, len(corpus) // (4 * jobs))
        chunks = [(corpus[i:i + size], modes, seed, expand_cap) for i in range(0, len(corpus), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = [e for chunk in pool.map(_run_chunk, chunks) for e in chunk]
    return RunReport(modes, entries, time.perf_counter() - start)
