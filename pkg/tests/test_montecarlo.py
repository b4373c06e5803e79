import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpzlab import combinat as cb
from kpzlab import montecarlo as mc
from kpzlab.combinat import SymmetryClass
from kpzlab.errors import DomainError


@pytest.mark.parametrize("cls", list(SymmetryClass))
def test_sampled_configs_are_symmetric(cls):
    rng = mc.block_rng(7, 0)
    for _ in range(20):
        cfg = mc.sample_points(3.0, cls, alpha=0.7, beta=0.6, rng=rng)
        assert cfg.is_closed(atol=1e-15)
        assert np.all((cfg.x >= 0) & (cfg.x <= 1) & (cfg.y >= 0) & (cfg.y <= 1))


def test_diag_point_counts():
    cfg = mc.sample_points(4.0, "diag", alpha=1.0, seed=3)
    on = np.isclose(cfg.x, cfg.y, rtol=0, atol=0)
    assert on.sum() == cfg.on_diagonal
    assert (len(cfg) - cfg.on_diagonal) % 2 == 0


def test_lis_of_config_matches_combinat():
    rng = mc.block_rng(11, 0)
    for _ in range(50):
        cfg = mc.sample_points(2.5, "plain", rng=rng)
        order = np.argsort(cfg.x)
        ranks = np.argsort(np.argsort(cfg.y[order])) + 1
        assert mc.lis_of_config(cfg) == cb.lis(tuple(int(r) for r in ranks))


def test_boundary_config():
    cfg = mc.sample_boundary_config(1.0, 0.5, 0.4, with_origin=True, seed=2)
    assert cfg.weak
    assert mc.lis_of_config(cfg) >= cfg.origin
    with pytest.raises(DomainError):
        mc.sample_boundary_config(1.0, 2.0, 0.6)


def test_weak_chain_on_axis():
    cfg = mc.PointConfig(np.zeros(3), np.array([0.1, 0.2, 0.3]), weak=True, origin=2)
    assert mc.lis_of_config(cfg) == 5


def test_block_rng_keys():
    a = mc.block_rng(1, 0).random(4)
    assert np.array_equal(a, mc.block_rng(1, 0).random(4))
    assert not np.array_equal(a, mc.block_rng(1, 1).random(4))
    assert not np.array_equal(a, mc.block_rng(2, 0).random(4))
    with pytest.raises(DomainError):
        mc.block_rng(-1, 0)


def test_prefix_stability():
    small = mc.simulate_hammersley(2.0, 1500, 9).values
    big = mc.simulate_hammersley(2.0, 3000, 9).values
    assert np.array_equal(small, big[:1500])


def test_worker_independence():
    a = mc.simulate_hammersley(2.0, 3000, 4, "diag", alpha=0.5).values
    b = mc.simulate_hammersley(2.0, 3000, 4, "diag", alpha=0.5, workers=2).values
    assert np.array_equal(a, b)


def test_batch_csv():
    batch = mc.simulate_png(3.0, 5, 1)
    lines = batch.to_csv().splitlines()
    assert lines[0] == "seed,trial,observable"
    assert len(lines) == 6


def test_merge():
    a = mc.simulate_hammersley(1.0, 100, 1)
    b = mc.simulate_hammersley(1.0, 100, 2)
    m = a.merge(b)
    assert m.trials == 200 and m.seeds == (1, 2)
    with pytest.raises(DomainError):
        a.merge(a)
    with pytest.raises(DomainError):
        a.merge(mc.simulate_hammersley(2.0, 100, 3))


def test_empirical_cdf():
    emp = mc.empirical_cdf(np.array([0, 1, 1, 3]))
    assert list(emp.cdf) == [0.25, 0.75, 0.75, 1.0]
    assert emp.at(10) == 1.0
    assert emp.stderr[0] == pytest.approx(math.sqrt(0.25 * 0.75 / 4))
    assert emp.to_csv().splitlines()[0] == "l,empirical_cdf,stderr"


def test_binomial_z():
    assert mc.binomial_z(0.5, 0.5, 100) == 0.0
    assert mc.binomial_z(0.6, 0.5, 100) == pytest.approx(2.0)
    assert mc.binomial_z(1.0, 1.0, 10) == 0.0
    assert mc.binomial_z(0.9, 1.0, 10) == -math.inf


def test_kolmogorov_uses_both_limits():
    # a point mass at 0 against the uniform law on (-1, 1): both limits give 1/2
    d = mc.kolmogorov_distance(np.zeros(10), lambda s: (np.asarray(s) + 1) / 2)
    assert d == pytest.approx(0.5)
    d = mc.kolmogorov_distance(np.zeros(10), lambda s: np.ones_like(s))
    assert d == pytest.approx(1.0)


def test_scaled():
    assert np.allclose(mc.scaled([16, 24], 8.0), [0.0, 4.0])


@pytest.mark.parametrize("T", [2.0, 5.0, 10.0])
def test_png_height_is_lis(T):
    for seed in range(50):
        h, l, _ = mc.png_simulate(T, seed)
        assert h == l


def test_png_single_nucleation():
    h, steps = mc.png_height(4.0, events=[(0.0, 1.0)], profile=True)
    assert h == 1
    assert sorted(steps) == [(-3.0, -1), (3.0, 1)]


def test_png_annihilation():
    # two nucleations whose inner steps meet at x = 0, t = 2
    h = mc.png_height(3.0, events=[(-1.0, 1.0), (1.0, 1.0)])
    assert h == 1
    steps = mc.png_evolve([(-1.0, 1.0), (1.0, 1.0)], 3.0)
    assert len(steps) == 2


def test_png_time_bound():
    with pytest.raises(DomainError):
        mc.png_evolve([], 50.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.floats(0.05, 0.9), st.integers(0, 10**6))
def test_johansson_rsk(n, q, seed):
    a = np.full(n + 1, math.sqrt(q))
    X, L = mc.johansson_lpp(a, a, seed=seed)
    P = cb.rsk_matrix(X.tolist())[0]
    assert (len(P[0]) if P else 0) == L


def test_johansson_domain():
    with pytest.raises(DomainError):
        mc.johansson_lpp([1.2], [0.9])
    with pytest.raises(DomainError):
        mc.johansson_lpp([0.5, 0.5], [0.5])


def test_small_sample_plain_vs_exact():
    from kpzlab.groupavg import hammersley_cdf_exact
    batch = mc.simulate_hammersley(1.0, 20000, 55)
    emp = mc.empirical_cdf(batch)
    for l in range(0, 3):
        assert abs(mc.binomial_z(emp.at(l), hammersley_cdf_exact(1.0, l), batch.trials)) < 4
