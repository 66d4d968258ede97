import json
import math
from fractions import Fraction

import pytest

from apollonian import density, forms, orbit
from apollonian.density import (
    ExperimentConfig,
    QuaternaryForm,
    base_curvature_set,
    classify_prime,
    count_two_squares,
    intersection_exact,
    local_density,
    progression_reciprocal_sum,
    quaternary_representation_count,
    run_density_experiment,
    select_windows,
    singular_integral_estimate,
    singular_series,
    sum_value_sizes,
    two_squares_flags,
)
from apollonian.errors import BudgetError, ValidationError
from apollonian.forms import tangency_form
from apollonian.tally import and_popcount

ROOT = (-1, 2, 2, 3)
TF_A = tangency_form((2, -1, 2, 3))  # form 1,2,5 shift 2
TF_B = tangency_form((3, -1, 2, 2))  # form 2,2,5 shift 3


def oracle_value_set(tf, bound, coprime=True, nonneg=True):
    """Plain nested loops, bounds from the ellipse axes (independent of the kernels)."""
    a, b2, c = tf.form.a, tf.form.b2, tf.form.c
    disc = tf.form.disc
    m = bound + tf.shift
    out = set()
    if m < 1:
        return out
    ylim = math.isqrt(4 * a * m // -disc) + 2
    xlim = math.isqrt(4 * c * m // -disc) + 2
    for x in range(-xlim, xlim + 1):
        for y in range(-ylim, ylim + 1):
            if (x, y) == (0, 0) or (nonneg and (x < 0 or y < 0)):
                continue
            if coprime and math.gcd(abs(x), abs(y)) != 1:
                continue
            v = tf.form.value(x, y) - tf.shift
            if 1 <= v <= bound:
                out.add(v)
    return out


def oracle_solutions_mod(qf, p, k):
    """Four nested loops over (Z/p^k)^4; only for tiny moduli."""
    m = p**k
    t = qf.target % m
    fa, fb = qf.fa.form, qf.fb.form
    count = 0
    for x in range(m):
        for y in range(m):
            va = fa.value(x, y) % m
            for xp in range(m):
                for yp in range(m):
                    if (va - fb.value(xp, yp) - t) % m == 0:
                        count += 1
    return count


def test_base_curvature_set_examples():
    base = set(base_curvature_set((2, -1, 2, 3), 11).tolist())
    assert {3, 6, 11} <= base
    assert all(1 <= a <= 11 for a in base)
    small = set(base_curvature_set((2, -1, 2, 3), 6).tolist())
    assert small <= base


def test_select_windows_full_integer_set():
    eta = 0.5
    sel = select_windows(list(range(1, 300)), eta, 50, 100)
    assert [w.k for w in sel.windows] == [6]
    w = sel.windows[0]
    expected = eta * 64 / math.sqrt(6)
    assert len(w.members) in (int(expected), int(expected) + 1, int(expected) + 2)
    assert max(w.counts) == w.counts[w.n]
    assert w.counts[w.n] >= w.mean_count  # pigeonhole
    # smaller eta windows nest inside larger ones
    sel_small = select_windows(list(range(1, 300)), 0.25, 50, 100)
    assert sel_small.windows[0].hi - sel_small.windows[0].lo < w.hi - w.lo


def test_select_windows_edge_cases():
    sel = select_windows([], 0.5, 50, 100)
    assert sel.warning is not None and sel.members() == []
    with pytest.raises(ValidationError):
        select_windows([10], 1.5, 50, 100)
    none = select_windows([10], 0.5, 200, 250)  # no power of two in range
    assert none.windows == () and none.warning is not None


def test_intersection_examples():
    n = intersection_exact(TF_A, TF_B, 11, coprime=True, nonneg=False)
    sa = oracle_value_set(TF_A, 11, nonneg=False)
    sb = oracle_value_set(TF_B, 11, nonneg=False)
    assert 6 in sa and 6 in sb
    assert 11 in sa and 11 not in sb
    assert n == len(sa & sb)
    assert n <= min(len(sa), len(sb))
    assert intersection_exact(TF_A, TF_A, 11, nonneg=False) == len(sa)


def test_intersection_matches_oracle_pairs():
    wit = orbit.tangency_witnesses(ROOT, 1, 60)
    curvs = sorted(wit)[:5]
    bound = 400
    for i, a in enumerate(curvs):
        for b in curvs[i + 1 :]:
            tfa, tfb = tangency_form(wit[a]), tangency_form(wit[b])
            got = intersection_exact(tfa, tfb, bound)
            want = len(oracle_value_set(tfa, bound) & oracle_value_set(tfb, bound))
            assert got == want


def test_quaternary_form_validation():
    qf = QuaternaryForm(TF_A, TF_B)
    assert qf.target == -1
    with pytest.raises(ValidationError):
        QuaternaryForm(tangency_form(ROOT), TF_B)  # negative shift


def test_quaternary_count_dominates_restricted_intersection():
    bound = 10**4
    qf = QuaternaryForm(TF_A, TF_B)
    r = quaternary_representation_count(qf, bound)
    assert r == 34388  # regression pin, exact lattice count
    restricted = and_popcount(
        density.box_restricted_value_bits(TF_A, bound),
        density.box_restricted_value_bits(TF_B, bound),
    )
    assert r >= restricted > 0
    band = r / (bound / (qf.fa.shift * qf.fb.shift))
    assert 5 <= band <= 60


def test_quaternary_diagonal_dominates_box():
    qf = QuaternaryForm(TF_A, TF_A)
    box = density.BoxRegion(TF_A.form, TF_A.shift, 500)
    points = sum(1 for _ in box.iter_points())
    assert quaternary_representation_count(qf, 500) >= points


def test_box_points_stay_bounded():
    box = density.BoxRegion(TF_A.form, TF_A.shift, 300)
    pts = list(box.iter_points())
    assert pts
    for x, y in pts:
        assert TF_A.form.value(x, y) <= 2 * 300


def test_budget_errors():
    qf = QuaternaryForm(TF_A, TF_B)
    with pytest.raises(BudgetError):
        quaternary_representation_count(qf, 10**6, budget=1)
    with pytest.raises(BudgetError):
        count_two_squares(10**7, 4, 1, budget=1)


def test_singular_integral_scaling():
    qf = QuaternaryForm(TF_A, TF_B)
    e1 = singular_integral_estimate(qf, 10**4)["estimate"]
    e2 = singular_integral_estimate(qf, 2 * 10**4)["estimate"]
    assert e1 > 0
    assert abs(e2 / e1 - 2.0) < 0.2  # doubling X doubles the estimate within 10%


def test_singular_integral_decreases_in_shift_product():
    wit = orbit.tangency_witnesses(ROOT, 1, 200)
    avals = sorted(wit)
    pairs = [(avals[0], avals[1]), (avals[2], avals[3]), (avals[5], avals[6])]
    estimates = []
    for a, b in pairs:
        qf = QuaternaryForm(tangency_form(wit[a]), tangency_form(wit[b]))
        estimates.append(singular_integral_estimate(qf, 10**4)["estimate"])
    assert estimates[0] > estimates[1] > estimates[2] >= 0


def test_classify_prime_example_pair():
    # a*a'*(a-a') = 2*3*(-1): 2 and 3 divide one side each, 5 and 7 are generic
    assert classify_prime(2, 2, 3) == "divides_one"
    assert classify_prime(3, 2, 3) == "divides_one"
    assert classify_prime(5, 2, 3) == "generic"
    assert classify_prime(7, 2, 3) == "generic"
    assert classify_prime(2, 66, 74) == "common_divisor"
    assert classify_prime(5, 7, 17) == "divides_difference"


def test_local_density_matches_brute_force():
    qf = QuaternaryForm(TF_A, TF_B)
    for p, k in ((2, 1), (3, 1), (5, 1), (2, 2)):
        sigma = local_density(qf, p, k)
        assert sigma == Fraction(oracle_solutions_mod(qf, p, k), p ** (3 * k))


def test_local_density_examples():
    qf = QuaternaryForm(TF_A, TF_B)
    assert local_density(qf, 5, 1) == Fraction(24, 25)
    assert local_density(qf, 5, 2) == Fraction(24, 25)  # generic, stable in k
    assert local_density(qf, 5, 3) == Fraction(24, 25)
    assert local_density(qf, 7, 3) == local_density(qf, 7, 1)
    assert local_density(qf, 2, 2) == Fraction(3, 2)
    with pytest.raises(ValidationError):
        local_density(qf, 6, 1)
    with pytest.raises(ValidationError):
        local_density(qf, 5, 0)


def test_local_density_lifting_matches_exhaustive():
    qf = QuaternaryForm(TF_A, TF_B)
    # ops = p*p admits only the k=1 base case, forcing the lifting recursion above it
    for p, k in ((5, 2), (7, 2), (5, 3), (11, 2), (13, 2)):
        exhaustive = density._solutions_with_ops(qf, p, k, ops=p ** (2 * k))
        lifted = density._solutions_with_ops(qf, p, k, ops=p * p)
        assert lifted == exhaustive
    # a pair whose target is divisible by p^2 exercises the singular branch
    wit = orbit.tangency_witnesses(ROOT, 1, 30)
    qf2 = QuaternaryForm(tangency_form(wit[27]), tangency_form(wit[2]))
    assert qf2.target == 25
    for k in (2, 3):
        exhaustive = density._solutions_with_ops(qf2, 5, k, ops=5 ** (2 * k))
        lifted = density._solutions_with_ops(qf2, 5, k, ops=25)
        assert lifted == exhaustive
    # a prime dividing a shift has no lifting path, nor does p = 2
    with pytest.raises(BudgetError):
        density._solutions_with_ops(qf, 3, 2, ops=9)
    with pytest.raises(BudgetError):
        density._solutions_with_ops(qf, 2, 3, ops=4)


def test_local_density_common_divisor_bounded_by_two():
    wit = orbit.tangency_witnesses(ROOT, 1, 130)
    avals = sorted(wit)
    checked = 0
    for i, a in enumerate(avals):
        for b in avals[i + 1 :]:
            g = math.gcd(a, b)
            if g == 1:
                continue
            qf = QuaternaryForm(tangency_form(wit[a]), tangency_form(wit[b]))
            for p in (2, 3, 5, 7):
                if g % p == 0:
                    sigma = local_density(qf, p, 1)
                    assert 0 <= sigma <= 2
                    checked += 1
        if checked >= 25:
            break
    assert checked >= 25


def test_pair_bound_shape_on_grid():
    """Intersections bounded by C * X/(aa') * prod(1+1/p) * 2^omega; measured C ~ 0.23."""
    wit = orbit.tangency_witnesses(ROOT, 1, 130)
    avals = [a for a in sorted(wit) if a >= 6][:8]
    bound = 10**4
    recorded_constant = 0.5
    for i, a in enumerate(avals):
        for b in avals[i + 1 :]:
            n = intersection_exact(tangency_form(wit[a]), tangency_form(wit[b]), bound)
            g = math.gcd(a, b)
            bad = 1.0
            for p in density.primes_up_to(abs(a * b * (a - b))):
                if (a * b * (a - b)) % p == 0 and g % p != 0:
                    bad *= 1 + 1 / p
            omega = sum(1 for p in density.primes_up_to(g) if g % p == 0) if g > 1 else 0
            assert n <= recorded_constant * (bound / (a * b)) * bad * 2**omega


def test_singular_series_report():
    qf = QuaternaryForm(TF_A, TF_B)
    rep = singular_series(qf, 50, k=2)
    cases = {r.p: r.case for r in rep.rows}
    assert cases[2] == "divides_one" and cases[3] == "divides_one"
    assert cases[5] == "generic" and cases[7] == "generic"
    assert all(r.sigma >= 0 for r in rep.rows)
    assert rep.common_divisor_factor == 1
    assert rep.within_ceiling
    rep100 = singular_series(qf, 100, k=2)
    assert abs(float(rep100.product) - float(rep.product)) / float(rep.product) < 0.10
    payload = rep.as_dict()
    json.dumps(payload)  # serialisable
    assert payload["rows"][0]["p"] == 2
    with pytest.raises(ValidationError):
        singular_series(QuaternaryForm(TF_A, TF_A), 10)


def test_prime_factors():
    assert density.prime_factors(1) == []
    assert density.prime_factors(-6) == [2, 3]
    assert density.prime_factors(2**5 * 7**2 * 97) == [2, 7, 97]


def test_two_squares_flags_match_double_loop():
    bound = 10**4
    flags = two_squares_flags(bound)
    marked = bytearray(bound + 1)
    s = 0
    while s * s <= bound:
        t = 0
        while s * s + t * t <= bound:
            marked[s * s + t * t] = 1
            t += 1
        s += 1
    for n in range(1, bound + 1):
        assert bool(flags[n]) == bool(marked[n]), n


def test_count_two_squares_examples():
    assert count_two_squares(20, 4, 1) == 5  # 1, 5, 9, 13, 17
    assert count_two_squares(100, 4, 3) == 0
    counts = [count_two_squares(x, 1, 0) for x in (10, 100, 1000)]
    assert counts == sorted(counts)
    with pytest.raises(ValidationError):
        count_two_squares(10, 4, 4)


def test_progression_sum_partition():
    members = [66, 74, 75]
    for q in (3, 5, 7, 11, 13, 15):
        total = Fraction(0)
        for r in range(q):
            out = progression_reciprocal_sum(members, q, r, eta=0.5)
            total += Fraction(out["sum"])
        assert total == sum(Fraction(1, a) for a in members)
    assert progression_reciprocal_sum([], 5, 1, eta=0.5)["sum"] == "0"
    with pytest.raises(ValidationError):
        progression_reciprocal_sum(members, 12, 1, eta=0.5)  # not squarefree
    with pytest.raises(ValidationError):
        progression_reciprocal_sum(members, 1, 0, eta=0.5)


def test_progression_ratio_bounded_on_selection():
    members = [66, 74, 75]
    for q in (3, 5, 7, 11, 13, 15):
        for r in range(q):
            out = progression_reciprocal_sum(members, q, r, eta=0.5)
            assert float(out["ratio"]) <= 5.0


def test_sum_value_sizes_basics():
    wit = orbit.tangency_witnesses(ROOT, 1, 128)
    forms_map = {a: tangency_form(wit[a]) for a in (66, 74, 75)}
    out = sum_value_sizes(forms_map, 10**5, eta=0.5)
    assert out["total"] == sum(out["sizes"].values())
    assert out["total"] >= max(out["sizes"].values())
    for a, size in out["sizes"].items():
        assert size >= math.floor(0.15 * 10**5 / a)  # calibrated per-a floor
    assert sum_value_sizes({}, 10**5, eta=0.5)["total"] == 0


def test_experiment_report():
    cfg = ExperimentConfig(root=ROOT, bound=10**5)
    rep = run_density_experiment(cfg)
    assert rep["selected"] == [66, 74, 75]
    assert rep["dropped_without_witness"] == []
    assert rep["sum_sizes"] == sum(rep["set_sizes"].values())
    assert rep["inclusion_exclusion_lower_bound"] == rep["sum_sizes"] - rep["pairwise_total"]
    assert rep["union"] >= rep["inclusion_exclusion_lower_bound"] > 0
    assert rep["union"] <= rep["kappa"]
    assert rep["union_within_kappa"]
    # bit-for-bit reproducible
    again = run_density_experiment(cfg)
    assert json.dumps(rep, sort_keys=True) == json.dumps(again, sort_keys=True)
