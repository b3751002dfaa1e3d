import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streament.distributions import FamilySpec, Pmf, exact_entropy, materialize
from streament.errors import InstanceTooLarge, InvalidParameter
from streament.harness import Constants, monte_carlo_success, trial_rng
from streament.oracles import (
    ClassifierModel,
    binom_pmf,
    binom_recip_expectation,
    decompose_entropy,
    exact_estint_probs,
    exact_genestint_probs,
    exact_mean_simple,
    hoeffding_bound,
    plug_in_estimate,
    random_hoeffding_bound,
)
from streament.stream import RegisterFile, SymbolStream
from streament.verify import random_hoeffding_rate


def test_binom_recip_examples():
    assert binom_recip_expectation(0, 0.4) == 1.0
    assert binom_recip_expectation(7, 0.0) == 1.0
    assert binom_recip_expectation(5, 1.0) == pytest.approx(1 / 6)
    # exact rational sum, m=10, r=3/10
    assert binom_recip_expectation(10, 0.3) == pytest.approx(
        0.29703840380909090909, abs=1e-15)


def test_binom_recip_matches_brute_force_grid():
    for m in range(0, 31):
        for r in np.round(np.arange(0.01, 1.0, 0.01), 2):
            brute = math.fsum(w / (j + 1) for j, w in enumerate(binom_pmf(m, float(r))))
            closed = binom_recip_expectation(m, float(r))
            assert abs(closed - brute) <= 1e-12
            assert closed <= 1 / (r * (m + 1)) + 1e-15


def test_binom_pmf_sums_to_one():
    assert math.fsum(binom_pmf(40, 0.37)) == pytest.approx(1.0, abs=1e-12)
    assert binom_pmf(3, 0.0) == [1.0, 0.0, 0.0, 0.0]


def test_exact_mean_guard():
    with pytest.raises(InstanceTooLarge):
        exact_mean_simple(materialize(FamilySpec("uniform", 1000)), 10**4)


def test_estint_probs_single_draw():
    # with N=1 and ell=1/2 the classifier says "heavy" iff the one draw hits x
    model = exact_estint_probs(Pmf((0.9, 0.1)), 1, 0.5)
    assert model.cond == pytest.approx(np.array([[0.9, 0.1], [0.1, 0.9]]))
    assert model.masses(Pmf((0.9, 0.1))) == pytest.approx([0.82, 0.18])


def test_estint_probs_threshold_is_inclusive():
    # N=4, ell=0.5: fires when count >= 2
    model = exact_estint_probs(Pmf((0.5, 0.5)), 4, 0.5)
    assert model.cond[0, 0] == pytest.approx(11 / 16)


def test_staged_classifier_rows_sum_to_one():
    p = materialize(FamilySpec("zipf", 6))
    model = exact_genestint_probs(p, (0.4, 0.15, 0.05), (3, 8, 20))
    assert np.allclose(model.cond.sum(axis=1), 1.0, atol=1e-13)
    assert model.n_intervals == 4


def test_classifier_model_validation():
    with pytest.raises(InvalidParameter):
        ClassifierModel(np.array([[0.5, 0.4]]))
    with pytest.raises(InvalidParameter):
        ClassifierModel(np.array([0.5, 0.5]))


def test_decomposition_example():
    p = Pmf((0.9, 0.1))
    dec = decompose_entropy(p, exact_estint_probs(p, 1, 0.5))
    # mpmath, 40 digits
    assert dec.per_interval[0] == pytest.approx(0.13215593733265824492, abs=1e-15)
    assert dec.per_interval[1] == pytest.approx(1.2039728043259359926, abs=1e-15)
    assert dec.recombined == pytest.approx(0.32508297339144822687, abs=1e-15)


def test_decomposition_empty_label():
    dec = decompose_entropy(Pmf((0.5, 0.5)), ClassifierModel(np.array([[1.0, 0.0], [1.0, 0.0]])))
    assert math.isnan(dec.per_interval[1]) and dec.masses[1] == 0
    assert dec.recombined == pytest.approx(math.log(2))


pmfs = st.lists(st.floats(0, 1), min_size=1, max_size=7).filter(
    lambda w: sum(w) > 1e-3).map(lambda w: Pmf(tuple(v / math.fsum(w) for v in w)))


@settings(max_examples=80)
@given(pmfs, st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_decomposition_recombines(p, labels, seed):
    rng = np.random.default_rng(seed)
    cond = rng.dirichlet(np.ones(labels), size=p.k)
    cond[:, -1] = np.clip(1.0 - cond[:, :-1].sum(axis=1), 0, None)
    dec = decompose_entropy(p, ClassifierModel(cond))
    assert dec.recombined == pytest.approx(exact_entropy(p), abs=1e-12)


def test_hoeffding_examples():
    assert hoeffding_bound(1, [(0, 1)], 1.0) == pytest.approx(0.27067056647322538379, rel=1e-13)
    assert hoeffding_bound(2, [(0, 0), (1, 1)], 0.1) == 0.0
    with pytest.raises(InvalidParameter):
        hoeffding_bound(2, [(0, 1)], 0.1)


def test_random_hoeffding_example():
    # m t^2 / (8 p (b-a)^2) = 2
    assert random_hoeffding_bound(16, 1.0, 1.0, 0, 1) == pytest.approx(
        0.40600584970983807568, rel=1e-13)
    with pytest.raises(InvalidParameter):
        random_hoeffding_bound(10, 0.0, 0.1, 0, 1)


@given(st.integers(1, 1000), st.floats(0.01, 1), st.floats(0.001, 1), st.floats(0.001, 1))
def test_bounds_decrease_in_t(m, p, a, b):
    lo, hi = sorted((a, b))
    assert random_hoeffding_bound(m, p, hi, 0, 1) <= random_hoeffding_bound(m, p, lo, 0, 1)
    assert hoeffding_bound(m, [(0, 1)] * m, hi) <= hoeffding_bound(m, [(0, 1)] * m, lo)


def test_random_hoeffding_empirical():
    rng = np.random.default_rng(5)
    for m, p, t in [(100, 0.5, 0.1), (800, 0.1, 0.05), (800, 1.0, 0.05)]:
        freq = random_hoeffding_rate(m, p, t, 10_000, rng)
        bound = random_hoeffding_bound(m, p, t, 0, 1)
        assert freq <= bound + 4 * math.sqrt(bound * (1 - bound) / 10_000)


def test_plug_in_basic():
    assert plug_in_estimate(SymbolStream(materialize(FamilySpec("dirac", 5)), 0), 100) == 0.0
    est = plug_in_estimate(SymbolStream(materialize(FamilySpec("uniform", 4)), 1), 10**6)
    assert abs(est - math.log(4)) <= 0.01


def test_plug_in_needs_a_register_per_symbol():
    rf = RegisterFile(70)
    plug_in_estimate(SymbolStream(materialize(FamilySpec("uniform", 64)), 0), 1000, rf)
    assert rf.high_water == 66


@pytest.mark.parametrize("family", ["uniform", "zipf"])
def test_plug_in_success(family):
    pmf = materialize(FamilySpec(family, 16))
    assert monte_carlo_success("plug-in", pmf, 0.25, 100, 0) >= 2 / 3


def test_monte_carlo_success_is_deterministic():
    pmf = materialize(FamilySpec("zipf", 4))
    a = monte_carlo_success("simple", pmf, 0.5, 20, 9)
    b = monte_carlo_success("simple", pmf, 0.5, 20, 9)
    assert a == b and 0 <= a <= 1


def test_loose_eps_always_succeeds():
    # eps = ln k covers [0, ln k] entirely once the bias is below eps
    pmf = materialize(FamilySpec("uniform", 3))
    assert monte_carlo_success("simple", pmf, math.log(3) * 1.5, 30, 1) == 1.0


def test_tuned_preset_values():
    c = Constants.tuned()
    assert (c.C1, c.C2, c.C_N, c.C_R) == (2, 2, 2, 2)
    assert c.beta == 2.0
