import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xycolor.encoding import ColoringProblem, SpaceKind
from xycolor.graphs import named_graph
from xycolor.mixers import MixerFamily, MixerMode, MixerSpec
from xycolor.qaoa import (
    INFEASIBLE_KEY,
    QaoaParams,
    QaoaRunSpec,
    count_interior_local_maxima,
    distribution_mean,
    landscape_scan,
    run_qaoa,
    tail_bound,
    tail_probability,
)

RING3 = MixerSpec(MixerFamily.XY_RING, MixerMode.SIMULTANEOUS, 3)
RING2 = MixerSpec(MixerFamily.XY_RING, MixerMode.SIMULTANEOUS, 2)
X3 = MixerSpec(MixerFamily.X, MixerMode.SIMULTANEOUS, 3)


def triangle(kappa):
    return ColoringProblem(named_graph("triangle"), kappa)


def test_params_validation():
    with pytest.raises(ValueError):
        QaoaParams((0.1,), (0.1, 0.2))
    with pytest.raises(ValueError):
        QaoaParams((np.nan,), (0.1,))
    p = QaoaParams.from_flat([1.0, 2.0, 3.0, 4.0])
    assert p.gammas == (1.0, 2.0) and p.betas == (3.0, 4.0)
    assert p.flat() == (1.0, 2.0, 3.0, 4.0)


def test_run_spec_validation():
    with pytest.raises(ValueError):
        QaoaRunSpec(triangle(3), RING2, ("wstate",), SpaceKind.FEASIBLE)
    with pytest.raises(ValueError):
        QaoaRunSpec(triangle(3), X3, ("wstate",), SpaceKind.FEASIBLE)
    with pytest.raises(ValueError):
        QaoaRunSpec(triangle(3), RING3, ("plus_all",), SpaceKind.FEASIBLE)
    with pytest.raises(ValueError):
        QaoaRunSpec(triangle(3), RING3, ("wstate",), SpaceKind.FEASIBLE, alpha=1.0)


def test_p0_wstate_baseline():
    # W state: each edge properly colored with probability 1 - 1/kappa
    spec = QaoaRunSpec(triangle(3), RING3, ("wstate",), SpaceKind.FEASIBLE)
    res = run_qaoa(spec, QaoaParams((), ()))
    assert abs(res.approximation_ratio - 2 / 3) < 1e-12
    spec2 = QaoaRunSpec(triangle(2), RING2, ("wstate",), SpaceKind.FEASIBLE)
    res2 = run_qaoa(spec2, QaoaParams((), ()))
    assert abs(res2.approximation_ratio - 0.75) < 1e-12  # 3 * (1/2) / 2


def test_p0_classical_baseline():
    spec = QaoaRunSpec(triangle(3), RING3, ("classical", (0, 1, 2)), SpaceKind.FEASIBLE)
    res = run_qaoa(spec, QaoaParams((), ()))
    assert res.approximation_ratio == 1.0 and res.prob_optimal == 1.0


def test_distribution_complete_and_normalized():
    spec = QaoaRunSpec(triangle(3), RING3, ("wstate",), SpaceKind.FEASIBLE)
    res = run_qaoa(spec, QaoaParams((0.4,), (0.9,)))
    assert set(res.cost_distribution) == {0, 1, 2, 3}
    assert abs(sum(res.cost_distribution.values()) - 1.0) < 1e-12
    assert abs(distribution_mean(res.cost_distribution) - 3 * res.approximation_ratio) < 1e-12


def test_full_binary_distribution_has_infeasible_mass():
    spec = QaoaRunSpec(triangle(3), X3, ("plus_all",), SpaceKind.FULL_BINARY, alpha=1.0)
    res = run_qaoa(spec, QaoaParams((0.3,), (0.5,)))
    assert INFEASIBLE_KEY in res.cost_distribution
    assert res.cost_distribution[INFEASIBLE_KEY] > 0
    assert abs(sum(res.cost_distribution.values()) - 1.0) < 1e-9


@pytest.mark.parametrize(
    "mixer",
    [
        RING3,
        MixerSpec(MixerFamily.XY_COMPLETE, MixerMode.SIMULTANEOUS, 3),
        MixerSpec(MixerFamily.XY_RING, MixerMode.PARITY_PARTITIONED, 2),
        MixerSpec(MixerFamily.XY_COMPLETE, MixerMode.BINARY_PARTITIONED, 2),
    ],
)
def test_feasible_full_binary_consistency(mixer):
    prob = triangle(mixer.kappa)
    params = QaoaParams((0.7, 0.2), (0.3, 1.1))
    res_f = run_qaoa(QaoaRunSpec(prob, mixer, ("wstate",), SpaceKind.FEASIBLE), params)
    res_b = run_qaoa(QaoaRunSpec(prob, mixer, ("wstate",), SpaceKind.FULL_BINARY), params)
    assert abs(res_f.approximation_ratio - res_b.approximation_ratio) < 1e-9
    assert abs(res_f.prob_optimal - res_b.prob_optimal) < 1e-9


def test_color_relabeling_invariance():
    prob = ColoringProblem(named_graph("prism"), 3)
    params = QaoaParams((0.5, 1.2), (0.8, 0.4))
    base = None
    for perm in itertools.permutations(range(3)):
        init = ("classical", tuple(perm[c] for c in (0, 1, 2, 0, 1, 2)))
        spec = QaoaRunSpec(prob, RING3, init, SpaceKind.FEASIBLE)
        r = run_qaoa(spec, params, keep_state=False).approximation_ratio
        if base is None:
            base = r
        assert abs(r - base) < 1e-12


def test_x_mixer_total_probability_conserved():
    spec = QaoaRunSpec(triangle(3), X3, ("wstate",), SpaceKind.FULL_BINARY)
    res = run_qaoa(spec, QaoaParams((0.9,), (0.6,)))
    assert abs(res.final_state.norm - 1.0) < 1e-9


def test_landscape_zero_cell_equals_baseline():
    spec = QaoaRunSpec(triangle(3), RING3, ("wstate",), SpaceKind.FEASIBLE)
    grid = landscape_scan(spec, [0.0, 0.5], [0.0, 0.5])
    assert abs(grid[0, 0] - 2 / 3) < 1e-12
    assert grid.shape == (2, 2)


def test_landscape_is_rugged_for_triangle():
    # several interior local maxima on a coarse scan (the stochastic-search
    # motivation); just require more than one
    spec = QaoaRunSpec(triangle(3), RING3, ("wstate",), SpaceKind.FEASIBLE)
    grid = landscape_scan(spec, np.linspace(0, np.pi, 15), np.linspace(0, np.pi, 15))
    assert count_interior_local_maxima(grid) >= 2


def test_serialization():
    spec = QaoaRunSpec(triangle(2), RING2, ("wstate",), SpaceKind.FEASIBLE)
    d = run_qaoa(spec, QaoaParams((0.1,), (0.2,))).to_dict()
    assert set(d) == {"approximation_ratio", "prob_optimal", "cost_distribution"}
    assert set(d["cost_distribution"]) == {"0", "1", "2", "3"}


# ---------------------------------------------------------------------------
# tail bound

def test_tail_bound_examples():
    assert tail_bound(2.0, 1, [0, 1, 2]) == 1.0  # delta at the max
    assert abs(tail_bound(1.0, 1, [0, 1, 2]) - 0.0) < 1e-12
    assert abs(tail_bound(2 / 3 * 2 + 0, 0, [0, 1, 2]) - 2 / 3) < 1e-12


def test_tail_bound_validation():
    with pytest.raises(ValueError):
        tail_bound(0.5, 1, [0, 1, 2])  # mean below threshold
    with pytest.raises(ValueError):
        tail_bound(1.5, 0.7, [0, 1, 2])  # l not a member


@given(st.integers(0, 10 ** 9))
@settings(max_examples=200)
def test_tail_bound_holds_for_random_distributions(seed):
    rng = np.random.default_rng(seed)
    values = list(range(12))
    p = rng.dirichlet(np.ones(12))
    dist = dict(zip(values, p))
    mu = distribution_mean(dist)
    for l in values:
        if mu >= l:
            assert tail_probability(dist, l) >= tail_bound(mu, l, values) - 1e-12


def test_tail_probability_ignores_infeasible():
    dist = {0: 0.2, 5: 0.3, INFEASIBLE_KEY: 0.5}
    assert abs(tail_probability(dist, 1) - 0.3) < 1e-15
    assert abs(distribution_mean(dist) - 1.5) < 1e-15
