"""End-to-end acceptance checks, one test per criterion.

Each test records its outcome through the ``acceptance`` fixture; the
terminal summary prints one PASS/FAIL line per criterion.
"""
import time
import tracemalloc
from fractions import Fraction
from itertools import islice, product

import pytest

from oracles import rank_mod_p, vandermonde_image
from properties import reduction_transfer_instances, multiplier_instances
from pitkit.bench import bench
from pitkit.circuit import LinearForm, SparsePoly
from pitkit.corpus import CorpusSpec, f2_identity, generate_corpus, random_circuit, run_suite
from pitkit.field import GF, QQ, ensure_min_size
from pitkit.hitting import blackbox_test, circuit_oracle, hitting_set, hitting_set_size, required_size
from pitkit.ideals import find_certificate, map_ideal, membership, membership_witness, radsp, verify_certificate
from pitkit.reduce import ReductionMap, count_bad_betas, family_size, rank, reduction_family
from pitkit.rng import StableRng

ACCEPTANCE_FIELDS = [GF(101), GF(2), GF(2, 3), QQ]


@pytest.fixture(scope="module")
def corpus():
    spec = CorpusSpec(seed=2024, count=500, k_range=(1, 3), d_range=(1, 4), n_range=(1, 5),
                      fields=ACCEPTANCE_FIELDS, zero_fraction=0.3)
    return generate_corpus(spec)


def test_criterion_1_hitting_verdict_equals_expansion(corpus, acceptance):
    start = time.perf_counter()
    report = run_suite(corpus, ("hitting", "whitebox", "expand"))
    elapsed = time.perf_counter() - start
    zeros = sum(item.is_zero for item in corpus)
    ok = (len(corpus) >= 500 and zeros >= 0.2 * len(corpus) and report.all_agree and elapsed <= 600
          and {c.circuit.field for c in corpus} == set(ACCEPTANCE_FIELDS))
    acceptance(1, f"hitting == expand on {len(corpus)} circuits ({zeros} zero), "
                  f"{len(report.disagreements)} disagreements, {elapsed:.1f}s", ok)
    assert ok, report.disagreements[:3]


def test_criterion_2_stream_length_law(acceptance):
    cases = {(1, 1, 1): 4, (2, 3, 4): 784, (3, 4, 5): 22625}
    counted = {}
    for (k, d, n), expected in cases.items():
        field, _ = ensure_min_size(GF(101), required_size(k, d, n))
        counted[(k, d, n)] = sum(1 for _ in hitting_set(k, d, n, field))
    ok = all(counted[key] == cases[key] == hitting_set_size(*key) for key in cases)
    acceptance(2, f"stream counts {sorted(counted.values())}", ok)
    assert ok


def _direct_delta(field, beta, gamma, n):
    return [field.sum(field.mul(field.pow(beta, i * j), g) for j, g in enumerate(gamma, 1)) for i in range(1, n + 1)]


def test_criterion_3_evaluation_consistency(acceptance):
    rng = StableRng(3)
    per_field = {}
    for field in ACCEPTANCE_FIELDS:
        big = field if field.order is None or field.order > 16 else ensure_min_size(field, 16)[0]
        held = 0
        for _ in range(1000):
            k, d, n = rng.randint(1, 3), rng.randint(1, 4), rng.randint(1, 5)
            C = random_circuit(rng, field, k, d, n)
            if big != field:
                C = C.lift(ensure_min_size(field, 16)[1])
            beta = rng.field_element(big)
            gamma = [rng.field_element(big) for _ in range(k)]
            lhs = C.evaluate_raw(_direct_delta(big, beta, gamma, n))
            rhs = ReductionMap(big, beta, n, k).apply_circuit(C).evaluate_raw(gamma)
            held += lhs == rhs
        per_field[str(field)] = held
    ok = all(v == 1000 for v in per_field.values())
    acceptance(3, f"C(delta) == reduced(gamma) on 1000 triples per field: {per_field}", ok)
    assert ok


def _random_low_rank_forms(rng, F, n, max_rank):
    r = rng.randint(1, max_rank)
    while True:
        base = [LinearForm.from_raw(F, [rng.field_element(F) for _ in range(n)]) for _ in range(r)]
        if rank(base) == r:
            break
    extra = []
    for _ in range(rng.below(3)):
        cs = [rng.field_element(F) for _ in base]
        raw = [F.dot(cs, col) for col in zip(*(b.raw for b in base))]
        if any(raw):
            extra.append(LinearForm.from_raw(F, raw))
    return base + extra


def test_criterion_4_bad_beta_bound(acceptance):
    F, n, k, p = GF(101), 5, 3, 101
    rng = StableRng(4)
    worst, routes_agree = 0, True
    for _ in range(100):
        forms = _random_low_rank_forms(rng, F, n, k)
        count, bad = count_bad_betas(forms, range(p), k)
        r = rank_mod_p([f.raw for f in forms], p)
        oracle_bad = [b for b in range(p)
                      if rank_mod_p([vandermonde_image(f.raw, b, k, p) for f in forms], p) < r]
        routes_agree &= bad == oracle_bad
        worst = max(worst, count)
    x1, x2 = LinearForm.variable(F, 2, 0), LinearForm.variable(F, 2, 1)
    _, pair_bad = count_bad_betas([x1, x2], range(p), 2)
    ok = worst <= n * k * k and routes_agree and pair_bad == [0, 1]
    acceptance(4, f"max bad betas {worst} <= {n * k * k} over 100 sets; {{x1,x2}} bad set {pair_bad}", ok)
    assert ok


def test_criterion_5_reduction_family_preserves_zeroness(corpus, acceptance):
    agree = 0
    for item in corpus:
        C = item.circuit
        G, emb = ensure_min_size(C.field, family_size(C.k, C.d, C.n) - 1)
        lifted = C.lift(emb)
        all_zero = all(psi.apply_circuit(lifted).expand().is_zero()
                       for psi in reduction_family(C.k, C.d, C.n, G))
        agree += all_zero == item.is_zero
    ok = agree == len(corpus)
    acceptance(5, f"expand(C)=0 iff all reduced circuits vanish: {agree}/{len(corpus)}", ok)
    assert ok


def test_criterion_6_certificates(acceptance):
    spec = CorpusSpec(seed=6, count=200, k_range=(1, 3), d_range=(1, 3), n_range=(1, 4),
                      fields=ACCEPTANCE_FIELDS, zero_fraction=0.3)
    nonzero = [item.circuit for item in generate_corpus(spec) if not item.is_zero]
    verified = sum(verify_certificate(C, find_certificate(C)) for C in nonzero)
    ok = len(nonzero) >= 100 and verified == len(nonzero)
    acceptance(6, f"certificates verified for {verified}/{len(nonzero)} nonzero circuits", ok)
    assert ok


def _witness_rebuilds(f, gens):
    combo = membership_witness(f, gens)
    if combo is None:
        return False
    acc = SparsePoly(gens.field, gens.n)
    for gi, mono, c in combo:
        acc = acc + gens.generators[gi].expand().shift(mono).scale(c)
    return acc == (f if isinstance(f, SparsePoly) else f.expand())


def _good_map(rng, F, forms, k, n):
    target = rank(forms)
    while True:
        psi = ReductionMap(F, rng.field_element(F), n, k)
        if rank([psi.apply_form(f) for f in forms]) == target:
            return psi


def test_criterion_7_membership_properties(acceptance):
    held10 = total10 = 0
    for gens, ell, g in multiplier_instances(200, 70):
        total10 += 1
        inside = membership(g, gens)
        times = SparsePoly.from_form(ell) * g
        held10 += inside == membership(times, gens) and (not inside or _witness_rebuilds(g, gens))
    rng = StableRng(80)
    held8 = total8 = 0
    for gens, f, k, n in reduction_transfer_instances(200, 81):
        total8 += 1
        psi = _good_map(rng, gens.field, list(f.forms) + radsp(gens), k, n)
        inside = membership(f, gens)
        held8 += inside == membership(psi.apply_term(f), map_ideal(psi, gens)) and (
            not inside or _witness_rebuilds(f, gens))
    ok = total10 >= 200 and total8 >= 200 and held10 == total10 and held8 == total8
    acceptance(7, f"multiplier cancellation {held10}/{total10}, reduction transfer {held8}/{total8}", ok)
    assert ok


def test_criterion_8_f2_identity_and_flips(acceptance):
    C = f2_identity()
    verdict = blackbox_test(circuit_oracle(C), C.k, C.d, C.n, C.field)
    zero_ok = verdict.outcome == "zero" and verdict.field.order == 64 and verdict.points_evaluated == 999
    flips, flips_ok = 0, True
    # over F_2 the only other scalar is 0, which removes the term
    for j in range(len(C.terms)):
        dropped = C.with_terms([t for i, t in enumerate(C.terms) if i != j])
        v = blackbox_test(circuit_oracle(dropped), dropped.k, dropped.d, dropped.n, dropped.field)
        oracle = circuit_oracle(dropped)
        flips_ok &= v.outcome == "nonzero" and v.replay(oracle) and oracle.evaluate_raw(v.witness.delta) != 0
        flips += 1
    # in the lifted field any scalar other than 1 breaks the cancellation
    G, emb = ensure_min_size(C.field, 36)
    lifted = C.lift(emb)
    for j, t in enumerate(lifted.terms):
        for s in range(2, G.order):
            terms = list(lifted.terms)
            terms[j] = t.with_scalar(G.element(s))
            flipped = lifted.with_terms(terms)
            v = blackbox_test(flipped, flipped.k, flipped.d, flipped.n, G)
            flips_ok &= v.outcome == "nonzero" and v.replay(flipped) and v.witness.is_consistent()
            flips += 1
    ok = zero_ok and flips_ok
    acceptance(8, f"F_2 identity zero over {verdict.field}; {flips} scalar flips all nonzero with replayable witness",
               ok)
    assert ok


def _random_nonzero_poly(rng, F, n, d):
    while True:
        if rng.coin():
            poly = random_circuit(rng, F, rng.randint(1, 2), d, n).expand()
        else:
            poly = SparsePoly(F, n)
            for _ in range(rng.randint(1, 4)):
                parts = [rng.below(d + 1) for _ in range(n)]
                if sum(parts) <= d:
                    poly = poly + SparsePoly.monomial(F, parts, rng.nonzero_element(F))
        if not poly.is_zero() and poly.degree() >= 1:
            return poly


def test_criterion_9_schwartz_zippel(acceptance):
    F = GF(101)
    T = F.first(3)
    zeros = sum(1 for a, b in product(T, repeat=2) if F.mul(a, b) == 0)
    exact_ok = Fraction(zeros, 9) == Fraction(5, 9) and Fraction(zeros, 9) <= Fraction(2, 3)
    rng = StableRng(9)
    worst = Fraction(0)
    bound_ok = True
    for _ in range(50):
        n, d = rng.randint(1, 3), rng.randint(1, 3)
        poly = _random_nonzero_poly(rng, F, n, d)
        deg = poly.degree()
        size = deg + 1 + rng.below(3)
        grid = F.first(size)
        z = sum(1 for pt in product(grid, repeat=n) if poly.evaluate_raw(pt) == 0)
        frac = Fraction(z, size ** n)
        bound_ok &= frac <= Fraction(deg, size)
        worst = max(worst, frac / Fraction(deg, size))
    ok = exact_ok and bound_ok
    acceptance(9, f"y1*y2 zero fraction {zeros}/9 <= 2/3; 50 random polys, worst ratio to d/|T| {float(worst):.3f}",
               ok)
    assert ok


def _peak_while_streaming(points):
    field, _ = ensure_min_size(GF(101), required_size(3, 5, 20))
    stream = hitting_set(3, 5, 20, field)
    tracemalloc.start()
    for _ in islice(stream, points):
        pass
    peak = tracemalloc.get_traced_memory()[1]
    tracemalloc.stop()
    return peak


def test_criterion_10_streaming_performance_and_determinism(acceptance):
    first = bench(3, 5, 20, GF(101), 10**6)
    second = bench(3, 5, 20, GF(101), 10**6)
    wide = bench(4, 5, 20, GF(101), 10**6)
    early, late = _peak_while_streaming(10**4), _peak_while_streaming(10**5)
    timing_ok = max(first.seconds, second.seconds, wide.seconds) <= 10 and wide.points == 10**6
    same = first.sha256 == second.sha256 and first.points == second.points == hitting_set_size(3, 5, 20)
    memory_ok = late <= 2 * early
    ok = timing_ok and same and memory_ok
    acceptance(10, f"k=3 full set {first.points} pts in {first.seconds:.2f}s, k=4 {wide.points} pts in "
                   f"{wide.seconds:.2f}s; identical hashes {same}; peak {early // 1024}KiB@1e4 vs "
                   f"{late // 1024}KiB@1e5", ok)
    assert ok
