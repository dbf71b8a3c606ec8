import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import ising_cycle_transfer
from percolative.errors import BudgetExceeded, NotTreeLike, ZeroPartition
from percolative.exact_gibbs import (
    Distribution,
    build,
    conditional_entropy,
    entropy,
    log_partition_and_entropy,
    percolation_identity_rhs,
    pushforward_marginal,
    tv_distance,
)
from percolative.group_tree import EvenFree, Involutive, ball
from percolative.interaction import coloring, hardcore, ising, potts
from percolative.labeled_graph import from_permutations, random_graph

K2 = from_permutations(Involutive(1), [[1, 0]])
K4 = from_permutations(Involutive(3), [[1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]])


def cycle(n):
    return from_permutations(EvenFree(1), [[(i + 1) % n for i in range(n)]])


@st.composite
def small_model(draw):
    parity = draw(st.sampled_from([Involutive(2), Involutive(3), EvenFree(1), EvenFree(2)]))
    n = draw(st.sampled_from([4, 6]))
    kind = draw(st.sampled_from(["ising", "potts", "hardcore", "coloring"]))
    x = draw(st.floats(0.05, 1.5))
    spec = {"ising": lambda: ising(x, parity), "potts": lambda: potts(x, 3, parity),
            "hardcore": lambda: hardcore(x, parity),
            "coloring": lambda: coloring(parity.degree + 1, parity)}[kind]()
    g = random_graph(parity, n, np.random.default_rng(draw(st.integers(0, 2 ** 32))))
    assume(not (kind == "coloring" and g.has_multi_edges))  # a loop admits no colouring
    return g, spec


@pytest.mark.parametrize("beta", [0.0, 0.3, 1.1])
def test_five_cycle_matches_transfer_matrix(beta):
    eg = build(cycle(5), ising(beta, EvenFree(1)))
    log_z, h = ising_cycle_transfer(beta, 5)
    assert eg.log_Z == pytest.approx(log_z, abs=1e-12)
    assert entropy(eg) == pytest.approx(h, abs=1e-12)


def test_k2_hardcore():
    eg = build(K2, hardcore(1.0, Involutive(1)))
    assert math.exp(eg.log_Z) == pytest.approx(3.0)
    assert entropy(eg) / 2 == pytest.approx(0.5493061443340549, abs=1e-12)
    assert conditional_entropy(eg, 0, [1]) == pytest.approx(2 / 3 * math.log(2), abs=1e-12)
    with pytest.raises(ValueError):
        conditional_entropy(eg, 0, [0])


@given(small_model())
def test_percolation_identity(gs):
    g, spec = gs
    eg = build(g, spec)
    assert abs(percolation_identity_rhs(eg) - entropy(eg) / g.n) <= 1e-9


@given(small_model())
def test_streaming_matches_table(gs):
    g, spec = gs
    eg = build(g, spec)
    log_z, h = log_partition_and_entropy(g, spec)
    assert log_z == pytest.approx(eg.log_Z, abs=1e-10)
    assert h == pytest.approx(entropy(eg), abs=1e-10)


@given(small_model())
def test_data_processing(gs):
    g, spec = gs
    eg = build(g, spec)
    v = 0
    rest = list(range(1, g.n))
    for k in range(len(rest)):
        for S in itertools.combinations(rest, k):
            for u in rest:
                if u in S:
                    continue
                assert conditional_entropy(eg, v, list(S) + [u]) <= \
                    conditional_entropy(eg, v, S) + 1e-12


def test_workers_do_not_change_results():
    g = random_graph(Involutive(3), 20, np.random.default_rng(2))
    spec = ising(0.2, Involutive(3))
    assert log_partition_and_entropy(g, spec, workers=1) == \
        log_partition_and_entropy(g, spec, workers=4)


def test_errors():
    g = random_graph(Involutive(3), 20, np.random.default_rng(2))
    with pytest.raises(BudgetExceeded):
        build(g, ising(0.1, Involutive(3)), budget=2 ** 10)
    triangle = cycle(3)
    with pytest.raises(ZeroPartition):
        build(triangle, coloring(2, EvenFree(1)))
    with pytest.raises(BudgetExceeded):
        percolation_identity_rhs(build(g, ising(0.1, Involutive(3))), max_n=10)


def test_marginals_and_sampling():
    g = random_graph(Involutive(3), 6, np.random.default_rng(5))
    eg = build(g, ising(0.4, Involutive(3)))
    assert eg.dense.sum() == pytest.approx(1.0)
    m = eg.marginal([3, 1])
    assert m.probs.shape == (2, 2)
    np.testing.assert_allclose(m.marginal([1]).probs, eg.marginal([1]).probs, atol=1e-14)
    np.testing.assert_allclose(m.probs.T, eg.marginal([1, 3]).probs, atol=1e-14)
    x = eg.sample(np.random.default_rng(0), 20000)
    freq = (x[:, 2] == 0).mean()
    p = eg.marginal([2]).probs[0]
    assert abs(freq - p) < 4 * math.sqrt(p * (1 - p) / 20000)


def test_pushforward():
    g = random_graph(Involutive(3), 8, np.random.default_rng(1))
    eg = build(g, ising(0.0, Involutive(3)))
    d = pushforward_marginal(eg, 0, 1)
    assert d.sites == ball(Involutive(3), 1).elements
    np.testing.assert_allclose(d.probs, np.full((2,) * 4, 1 / 16))
    with pytest.raises(NotTreeLike):
        pushforward_marginal(build(K4, ising(0.1, Involutive(3))), 0, 2)


def test_tv_distance():
    assert tv_distance([0.5, 0.5], [1.0, 0.0]) == pytest.approx(0.5)
    assert tv_distance(Distribution((0,), np.array([0.2, 0.8])), [0.2, 0.8]) == 0.0
    with pytest.raises(ValueError):
        tv_distance([1.0], [0.5, 0.5])
