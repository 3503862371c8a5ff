"""Sequential sampling, coupled chains, and window Cesàro averages."""

import math

import numpy as np
import pytest
from scipy import stats

from artifact import (
    CouplingLaw,
    PairPotential,
    Word,
    cesaro_estimate,
    cesaro_gap,
    couple_two_pasts,
    g_exact_markov,
    sample_chain,
    write_chain_csv,
    write_coupling_csv,
)
from artifact.dynamics import WindowConditional

GOLDEN_SEED_42 = [1, 1, -1, 1, -1, -1, -1, -1, 1, -1,
                  -1, -1, -1, -1, -1, -1, 1, 1, -1, -1]


def nn(beta=1.0):
    return PairPotential(beta=beta, coupling=CouplingLaw.finite_table((1.0,)))


def zero():
    return PairPotential(beta=1.0, coupling=CouplingLaw.zero())


def truncated(beta, R):
    return PairPotential(
        beta=beta, coupling=CouplingLaw.power_law(2.0), truncation_range=R
    )


def plus_past(R):
    return Word.constant(-max(R, 1), max(R, 1), 1)


def minus_past(R):
    return Word.constant(-max(R, 1), max(R, 1), -1)


# -- reproducibility ---------------------------------------------------------------


def test_sampling_replays_bit_exactly():
    g = g_exact_markov(truncated(0.4, 3))
    a = sample_chain(g, plus_past(3), 500, seed=9)
    b = sample_chain(g, plus_past(3), 500, seed=9)
    assert np.array_equal(a.samples, b.samples)
    c = sample_chain(g, plus_past(3), 500, seed=10)
    assert not np.array_equal(a.samples, c.samples)
    d = sample_chain(g, plus_past(3), 500, seed=9, chain_id=1)
    assert not np.array_equal(a.samples, d.samples)


def test_sampling_golden_sequence():
    # frozen on first release; any change here breaks replayability of runs
    g = g_exact_markov(nn(1.0))
    run = sample_chain(g, Word(-1, (1,)), 20, seed=42)
    assert list(run.samples) == GOLDEN_SEED_42
    assert run.g_source == "exact_markov"


def test_sampling_validation():
    g = g_exact_markov(nn(1.0))
    with pytest.raises(ValueError):
        sample_chain(g, Word(-1, (1,)), 0, seed=1)
    with pytest.raises(ValueError):
        sample_chain(g, Word(-1, (1,)), 5, seed=2**64)
    with pytest.raises(ValueError):
        sample_chain(g, Word(-3, (1, 1)), 5, seed=1)  # past misses site -1


def test_sampler_depth_guard():
    wc = WindowConditional(potential=truncated(0.1, 13), window_n=14)
    with pytest.raises(ValueError):
        sample_chain(wc, plus_past(13), 5, seed=1)


# -- marginal statistics -------------------------------------------------------------


def test_zero_coupling_letters_are_uniform():
    run = sample_chain(g_exact_markov(zero()), Word(-1, (1,)), 10**5, seed=123)
    assert abs(run.frequency(1) - 0.5) <= 0.01
    counts = [int(np.sum(run.samples == s)) for s in (-1, 1)]
    assert stats.chisquare(counts).pvalue > 0.001


def test_nearest_neighbor_persistence_probability():
    # P(x_t = x_{t-1}) = e^{b/2} / (2 cosh(b/2)) at stationarity
    run = sample_chain(g_exact_markov(nn(1.0)), Word(-1, (1,)), 10**5, seed=7)
    s = run.samples
    same = float(np.mean(s[1:] == s[:-1]))
    want = math.exp(0.5) / (2.0 * math.cosh(0.5))
    assert abs(same - want) <= 0.01


def test_pair_frequencies_match_stationary_law():
    g = g_exact_markov(nn(1.0))
    run = sample_chain(g, Word(-1, (1,)), 10**5, seed=7)
    s = run.samples
    law = g.state_law()
    pairs = 10**5 - 1
    for a in (-1, 1):
        for b in (-1, 1):
            emp = float(np.mean((s[:-1] == a) & (s[1:] == b)))
            want = law[g.transfer.state_index((a,))] * g.prob((a,), b)
            sigma = math.sqrt(want * (1.0 - want) / pairs)
            assert abs(emp - want) <= 3.0 * sigma


# -- coupled chains ------------------------------------------------------------------


def test_identical_pasts_never_disagree():
    g = g_exact_markov(truncated(0.5, 2))
    run = couple_two_pasts(g, plus_past(2), plus_past(2), 2000, seed=3)
    assert int(run.disagree.sum()) == 0
    assert run.first_coalescence() == 0
    assert np.array_equal(run.chain_a.samples, run.chain_b.samples)


def test_coupled_chains_coalesce_and_stay_together():
    # once the R running letters agree the states coincide and the shared
    # draw keeps them identical: disagreements cannot reignite in isolation
    R = 3
    g = g_exact_markov(truncated(0.4, R))
    run = couple_two_pasts(g, plus_past(R), minus_past(R), 2000, seed=5)
    dis = np.nonzero(run.disagree)[0]
    for t in dis:
        assert t < R or run.disagree[max(0, t - R):t].any()
    coal = run.first_coalescence()
    assert coal is not None
    assert not run.disagree[coal:].any()


def test_disagreement_density_decays():
    g = g_exact_markov(truncated(0.3, 6))
    run = couple_two_pasts(g, plus_past(6), minus_past(6), 10**4, seed=21)
    d = run.disagreement_density()
    assert d.shape == (10,)
    assert d[0] > 0.0
    assert np.all(np.diff(d) <= 1e-12)
    assert d[-1] == 0.0


def test_coupling_is_seed_deterministic():
    g = g_exact_markov(truncated(0.3, 2))
    a = couple_two_pasts(g, plus_past(2), minus_past(2), 1000, seed=11)
    b = couple_two_pasts(g, plus_past(2), minus_past(2), 1000, seed=11)
    assert np.array_equal(a.chain_a.samples, b.chain_a.samples)
    assert np.array_equal(a.chain_b.samples, b.chain_b.samples)


# -- window conditionals as sampling sources -----------------------------------------


def test_window_conditional_normalizes_and_converges():
    p = nn(1.0)
    g = g_exact_markov(p)
    wc = WindowConditional(potential=p, window_n=24)
    for past in ((1,), (-1,)):
        total = wc.prob(past, 1) + wc.prob(past, -1)
        assert total == pytest.approx(1.0, abs=1e-12)
        assert wc.prob(past, 1) == pytest.approx(g.prob(past, 1), abs=1e-8)
    assert wc.source_label == "pi_window(24)"


# -- Cesàro averages ------------------------------------------------------------------


def test_cesaro_zero_coupling_single_site():
    est = cesaro_estimate(zero(), Word(0, (1,)), 64, plus_past(1))
    assert est == pytest.approx(0.5, abs=1e-12)


def test_cesaro_constant_function():
    assert cesaro_estimate(nn(1.0), None, 16, plus_past(1)) == 1.0


def test_cesaro_gap_shrinks_with_window():
    f = Word(0, (1,))
    p = nn(1.0)
    gaps = [
        cesaro_gap(p, f, n, Word.constant(-1, n + 2, 1), Word.constant(-1, n + 2, -1))
        for n in (8, 16, 32)
    ]
    assert gaps[2] < gaps[1] < gaps[0]


def test_cesaro_validation():
    p = nn(1.0)
    with pytest.raises(ValueError):
        cesaro_estimate(p, None, 0, plus_past(1))
    with pytest.raises(ValueError):
        cesaro_estimate(p, Word(0, (1,)), 1 << 16, Word.constant(-1, (1 << 16) + 2, 1))
    with pytest.raises(ValueError):
        cesaro_estimate(p, Word(0, (1,)), 8, Word(-1, (1,)))  # boundary too short


# -- artifact writers ------------------------------------------------------------------


def test_csv_writers_round_trip(tmp_path):
    g = g_exact_markov(truncated(0.4, 2))
    run = couple_two_pasts(g, plus_past(2), minus_past(2), 50, seed=2)
    cpath = tmp_path / "couple.csv"
    write_coupling_csv(run, cpath)
    rows = cpath.read_text().strip().splitlines()
    assert rows[0] == "site,letter_a,letter_b,disagree"
    assert len(rows) == 51
    first = rows[1].split(",")
    assert int(first[1]) == int(run.chain_a.samples[0])

    spath = tmp_path / "chain.csv"
    write_chain_csv(run.chain_a, spath)
    rows = spath.read_text().strip().splitlines()
    assert rows[0] == "site,letter"
    assert len(rows) == 51
