import math

import numpy as np
import pytest

from percolative.errors import InfeasibleInit, NotTreeLike
from percolative.exact_gibbs import build, entropy, log_partition_and_entropy
from percolative.group_tree import EvenFree, Involutive
from percolative.interaction import coloring, hardcore, ising, potts
from percolative.labeled_graph import from_permutations, random_graph
from percolative.tree_engine import ExtremalAllState, TreeModel
from percolative.estimators import (
    Estimate,
    GlauberChain,
    dobrushin_alpha,
    feasible_init,
    glauber_sample,
    graph_distances,
    lw_diagnostic,
    percolative_entropy,
    specific_entropy_truncated,
    ssm_profile,
)
from percolative.estimators.estimate import summarize

P3 = Involutive(3)
LOG2 = math.log(2)
K4 = from_permutations(P3, [[1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]])


def sigmoid(x):
    return 1 / (1 + np.exp(-x))


def test_estimate_invariants():
    with pytest.raises(ValueError):
        Estimate(0.0, -1.0, 1, 0, "x")
    e = summarize([0.3, 0.3, 0.3], 1, "m")
    assert e.stderr == 0 and e.exact
    e = summarize([0.0, 1.0], 1, "m")
    assert e.value == 0.5 and e.stderr == pytest.approx(0.5)


def test_percolative_trivial_cases():
    e = percolative_entropy(ising(0.0, P3), 4, n_outer=700, rng=1)
    assert e.value == LOG2 and e.stderr == 0
    e = percolative_entropy(hardcore(1.3, P3), 3, n_outer=300, rng=2, p=0.0)
    root = TreeModel(hardcore(1.3, P3), 3).root_marginal()
    assert e.stderr == 0
    assert e.value == pytest.approx(-(root * np.log(root)).sum(), abs=1e-14)
    with pytest.raises(ValueError):
        percolative_entropy(ising(0.1, P3), -1, n_outer=10)
    with pytest.raises(ValueError):
        percolative_entropy(ising(0.1, P3), 3, n_outer=10, generator_radius=2)


def test_percolative_in_range_and_deterministic():
    spec = potts(0.8, 3, P3)
    a = percolative_entropy(spec, 3, n_outer=1500, rng=7, workers=1)
    b = percolative_entropy(spec, 3, n_outer=1500, rng=7, workers=4)
    assert a == b
    assert 0 < a.value < math.log(3)
    s = percolative_entropy(spec, 3, n_outer=1500, rng=7, stratified=True)
    assert abs(s.value - a.value) < 4 * math.hypot(s.stderr, a.stderr)
    ex = percolative_entropy(spec, 2, ExtremalAllState(1), n_outer=500, rng=3, n_inner=2)
    assert ex.samples == 500 and 0 < ex.value < math.log(3)


def test_percolative_radius_sweep_monotone():
    spec = hardcore(1.0, P3)
    est = [percolative_entropy(spec, r, n_outer=20_000, rng=5, generator_radius=7)
           for r in (3, 4, 5)]
    for a, b in zip(est, est[1:]):
        assert b.value <= a.value + 3 * math.hypot(a.stderr, b.stderr)


def test_ssm_profiles():
    zero = ssm_profile(ising(0.0, P3), 4)
    assert np.all(zero.values == 0) and zero.decay_rate() is None
    prof = ssm_profile(ising(0.2, P3), 5)
    assert np.all(prof.values > 0) and np.all(np.diff(prof.values) < 0)
    ex = ssm_profile(ising(0.2, P3), 2, "exhaustive")
    np.testing.assert_allclose(ex.values, prof.values[:2], atol=1e-10)
    col = ssm_profile(coloring(5, P3), 3, "random-search", field_grid=[np.zeros(5)])
    assert np.all(np.diff(col.values) < 0)
    with pytest.raises(ValueError):
        ssm_profile(ising(0.2, P3), 2, "bogus")


@pytest.mark.parametrize("spec", [hardcore(1.0, P3), potts(0.5, 3, P3)])
def test_random_search_is_lower_bound(spec):
    grid = [np.zeros(spec.alphabet_size), np.eye(spec.alphabet_size)[0]]
    rs = ssm_profile(spec, 2, "random-search", grid, rng=4)
    ex = ssm_profile(spec, 2, "exhaustive", grid)
    assert np.all(rs.values <= ex.values + 1e-12)


def test_ssm_budget():
    from percolative.errors import BudgetExceeded
    with pytest.raises(BudgetExceeded):
        ssm_profile(ising(0.2, P3), 3, "exhaustive", budget=2 ** 10)


def test_dobrushin_against_brute_force():
    fine = np.linspace(-3, 3, 6001)
    for beta in (0.05, 0.1, 0.15, 0.2, 0.25, 0.3):
        # neighbour log-odds 2*beta*sum(s); flipping one neighbour moves it by 4*beta
        best = 0.0
        for m in (-2, 0, 2):
            x = 2 * beta * m + fine
            best = max(best, float(np.max(np.abs(sigmoid(x + 2 * beta) - sigmoid(x - 2 * beta)))))
        oracle = 3 * best
        assert oracle == pytest.approx(3 * math.tanh(beta), abs=1e-9)
        assert dobrushin_alpha(ising(beta, P3)) == pytest.approx(oracle, abs=1e-6)
    assert dobrushin_alpha(ising(0.0, P3)) == 0.0
    assert dobrushin_alpha(potts(0.0, 3, P3)) == 0.0
    assert dobrushin_alpha(potts(0.1, 3, P3)) < 1
    assert dobrushin_alpha(ising(0.3, EvenFree(2))) == pytest.approx(4 * math.tanh(0.3), abs=1e-6)


def test_glauber_basics():
    g = random_graph(P3, 2000, np.random.default_rng(0))
    x = glauber_sample(g, ising(0.0, P3), 1, rng=3)
    assert abs(x.mean() - 0.5) < 4 * 0.5 / math.sqrt(2000)
    chain = GlauberChain(g, hardcore(3.0, P3), rng=1)
    nbr = g.step(1), g.step(2), g.step(3)
    for _ in range(20):
        y = chain.run(1)
        for p in nbr:
            assert not np.any((y == 1) & (y[p] == 1))
    c = feasible_init(g, coloring(4, P3))
    for p in nbr:
        assert not np.any(c == c[p])
    with pytest.raises(InfeasibleInit):
        GlauberChain(g, hardcore(1.0, P3), init=np.ones(2000, dtype=int))
    assert np.array_equal(glauber_sample(g, ising(0.4, P3), 5, rng=9),
                          glauber_sample(g, ising(0.4, P3), 5, rng=9))


def test_glauber_five_cycle_marginal():
    g = from_permutations(EvenFree(1), [[1, 2, 3, 4, 0]])
    spec = ising(0.3, EvenFree(1))
    chain = GlauberChain(g, spec, rng=2, init=np.array([0, 0, 1, 0, 1]))
    chain.run(100)
    xs = np.array([chain.run(1) for _ in range(100_000)])
    exact = build(g, spec)
    for v in range(5):
        p = exact.marginal([v]).probs[0]
        hits = (xs[:, v] == 0).astype(float)
        batches = hits.reshape(100, -1).mean(axis=1)       # batch means absorb correlation
        se = batches.std(ddof=1) / math.sqrt(batches.size)
        assert abs(hits.mean() - p) <= 4 * se
    pair = build(g, spec).marginal([0, 1]).probs
    emp = np.mean((xs[:, 0] == 0) & (xs[:, 1] == 0))
    assert abs(emp - pair[0, 0]) < 0.01


def test_specific_entropy_trivial_and_exact():
    g = random_graph(P3, 200, np.random.default_rng(1))
    e = specific_entropy_truncated(g, ising(0.0, P3), 2, 20, rng=0)
    assert e.value == pytest.approx(LOG2, abs=1e-15) and e.stderr == 0
    small = random_graph(P3, 8, np.random.default_rng(2))
    diam = int(graph_distances(small).max())
    spec = hardcore(1.5, P3)
    est = specific_entropy_truncated(small, spec, diam, 400, rng=3, source="exact")
    exact = entropy(build(small, spec)) / 8
    assert abs(est.value - exact) <= 3 * est.stderr + 1e-12
    with pytest.raises(NotTreeLike):
        specific_entropy_truncated(small, spec, 2, 10, rng=0)


def test_specific_entropy_nonincreasing_and_bracketed():
    g = random_graph(P3, 14, np.random.default_rng(4))
    spec = ising(0.2, P3)
    exact = log_partition_and_entropy(g, spec)[1] / g.n
    vals = [specific_entropy_truncated(g, spec, r, 150, rng=1, source="exact") for r in range(4)]
    for a, b in zip(vals, vals[1:]):
        assert b.value <= a.value + 3 * math.hypot(a.stderr, b.stderr)
    for r, e in enumerate(vals):
        bias = ssm_profile(spec, r, r_min=r).at(r)
        assert exact - 3 * e.stderr - 1e-12 <= e.value <= exact + bias * LOG2 + 3 * e.stderr


def test_specific_entropy_ball_source():
    g = random_graph(P3, 600, np.random.default_rng(6))
    spec = ising(0.2, P3)
    glauber = specific_entropy_truncated(g, spec, 2, 40, rng=2)
    assert 0.6 < glauber.value < LOG2
    assert "ssm_bias" in glauber.extra and 0 < glauber.extra["tree_like"] <= 1


def test_lw_diagnostic():
    g = random_graph(P3, 8, np.random.default_rng(0))
    assert lw_diagnostic(g, ising(0.0, P3), 1, 0.01, "exact") == 0.0
    assert lw_diagnostic(K4, ising(0.3, P3), 2, 0.999, "exact") == 1.0
    big = random_graph(P3, 2000, np.random.default_rng(1))
    frac = lw_diagnostic(big, ising(0.2, P3), 1, 0.05, "mc", rng=0)
    assert frac < 0.1
