import warnings

import numpy as np
import pytest

import flatpaths
from flatpaths.lattice import PeriodicGraph, apply_refinement, gen_lattice, induced_subgraph, level_sets
from flatpaths.cohomology import is_h1_trivial
from flatpaths.sweep import (SweepResult, ClusterOverlapWarning, ClusterOverlapError, InsufficientDataError,
                             NotHypercubicError, DEFAULT_MUS, separation_threshold, cluster_bands, coupling_sweep,
                             fit_decay, first_order_coefficients, perturbation_check, separable_lower_bound,
                             hypercubic_layout, scaling_check, verify_criterion)

from conftest import random_graph


GRAPHS = "tests/example_data/graphs"


def load(name):
    return next(flatpaths.read_files("{}/{}.json".format(GRAPHS, name))).to_graph()


def test_separation_threshold():
    graph, potential = load("z2_injective")
    assert separation_threshold(graph, potential) == pytest.approx(12.0)
    graph, potential = load("z2_constant")
    assert separation_threshold(graph, potential) == 0.0


def test_cluster_bands_ties_go_to_smaller_value():
    labels = cluster_bands([[0.0, 1.0], [4.0, 6.0], [9.0, 11.0]], [0.0, 1.0], 10.0)
    assert labels.tolist() == [0, 0, 1]


def test_single_vertex_sweep():
    graph = PeriodicGraph(1, 1, [])
    result = coupling_sweep(graph, [2.0], (1.0, 10.0, 100.0), grid=8)
    assert result.measures.tolist() == [0.0, 0.0, 0.0]
    with pytest.raises(InsufficientDataError):
        fit_decay(result)


def test_sweep_rejects_unsorted_couplings():
    graph, potential = load("z2_injective")
    with pytest.raises(ValueError):
        coupling_sweep(graph, potential, (100.0, 10.0))
    with pytest.raises(ValueError):
        coupling_sweep(graph, potential, ())


def test_injective_measure_decays():
    graph, potential = load("z2_injective")
    with pytest.warns(ClusterOverlapWarning):
        result = coupling_sweep(graph, potential, DEFAULT_MUS, grid=48)
    assert np.all(np.diff(result.measures) < 0)
    fit = fit_decay(result)
    assert -1.3 <= fit.slope <= -0.9


def test_injective_cluster_lengths_scale_inverse_coupling():
    graph, potential = load("z2_injective")
    result = coupling_sweep(graph, potential, (100.0, 1000.0, 10000.0), grid=24)
    assert result.cluster_lengths.shape == (3, 4)
    ratios = result.cluster_lengths[1:] / result.cluster_lengths[:-1]
    assert np.all((ratios >= 0.05) & (ratios <= 0.2))


def test_stripe_measure_stays_bounded():
    graph, potential = load("z2_stripe")
    result = coupling_sweep(graph, potential, (1000.0,), grid=48)
    assert result.measures[-1] >= 7.9
    assert np.allclose(result.cluster_lengths[0], [4.0, 4.0], atol=0.05)


@pytest.mark.parametrize("name", ["z2_injective", "z2_stripe"])
def test_cluster_lengths_add_up_to_total_measure(name):
    graph, potential = load(name)
    result = coupling_sweep(graph, potential, (100.0, 1000.0), grid=16)
    assert np.all(result.mus >= result.threshold)
    assert np.allclose(result.cluster_lengths.sum(axis=1), result.measures, rtol=0.0, atol=1e-6)


def test_sweep_merge_tolerance():
    graph, potential = load("z2_injective")
    tight = coupling_sweep(graph, potential, (100.0,), grid=8, refine=False)
    loose = coupling_sweep(graph, potential, (100.0,), grid=8, refine=False, rel_tol=0.5)
    assert tight.measures[0] < 10.0
    assert loose.measures[0] >= 290.0


@pytest.mark.parametrize("measures, slope", [
    (5.0 / np.array([10.0, 100.0, 1000.0]), -1.0),
    (np.array([3.0, 3.0, 3.0]), 0.0),
])
def test_fit_decay(measures, slope):
    fit = fit_decay(SweepResult([10.0, 100.0, 1000.0], measures))
    assert fit.slope == pytest.approx(slope, abs=1e-12)
    assert fit.residual == pytest.approx(0.0, abs=1e-12)
    assert fit.samples == 3


def test_first_order_coefficients_singleton():
    graph, potential = load("z2_injective")
    coefficients = first_order_coefficients(graph, potential, 2.0, grid=8)
    assert coefficients.vertices == (2,)
    assert np.all(coefficients.coefficients == 0.0)
    assert coefficients.flat == (True,)


def test_first_order_coefficients_trivial_tree_are_flat():
    graph = PeriodicGraph(1, 3, [(0, 1, (0,)), (1, 2, (0,)), (2, 0, (1,))])
    potential = [0.0, 1.0, 0.0]
    coefficients = first_order_coefficients(graph, potential, level_sets(graph, potential)[0], grid=16)
    assert coefficients.vertices == (0, 2)
    assert coefficients.flat == (True, True)
    assert np.allclose(coefficients.coefficients[0], [-1.0, 1.0])


def test_first_order_coefficients_stripe_has_dispersive_branch():
    graph, potential = load("z2_stripe")
    coefficients = first_order_coefficients(graph, potential, 0.0, grid=16)
    assert not all(coefficients.flat)
    spread = coefficients.coefficients.max(axis=0) - coefficients.coefficients.min(axis=0)
    assert spread.max() > 1e-3


def test_first_order_coefficients_unknown_value():
    graph, potential = load("z2_injective")
    with pytest.raises(ValueError):
        first_order_coefficients(graph, potential, 0.5)


def test_first_order_flatness_matches_h1_triviality(rng):
    for _ in range(50):
        graph = random_graph(rng)
        potential = rng.integers(0, 3, size=graph.nu).astype(float)
        for level_set in level_sets(graph, potential):
            trivial, _ = is_h1_trivial(induced_subgraph(graph, level_set.vertices))
            coefficients = first_order_coefficients(graph, potential, level_set, grid=24)
            assert all(coefficients.flat) is trivial


def test_perturbation_check_scales_inverse_coupling():
    graph, potential = load("z2_injective")
    deviations = [perturbation_check(graph, potential, 1.0, mu, grid=12).max_deviation
                  for mu in (100.0, 1000.0, 10000.0)]
    assert 5.0 <= deviations[0] / deviations[1] <= 20.0
    assert 5.0 <= deviations[1] / deviations[2] <= 20.0
    assert deviations[1] <= 1e-2 * 16.0


def test_perturbation_check_without_edges():
    graph = PeriodicGraph(1, 2, [])
    report = perturbation_check(graph, [0.0, 1.0], 1.0, 100.0, grid=4)
    assert report.max_deviation == 0.0


def test_perturbation_check_below_threshold():
    graph, potential = load("z2_injective")
    with pytest.raises(ClusterOverlapError):
        perturbation_check(graph, potential, 1.0, 5.0)


@pytest.mark.parametrize("name, bound", [
    ("z2_constant", 8.0),
    ("z2_stripe", 8.0),
    ("z2_injective", 0.0),
])
def test_separable_lower_bound(name, bound):
    graph, potential = load(name)
    assert separable_lower_bound(graph, potential) == bound


def test_separable_lower_bound_on_generated_stripe():
    graph, potential = gen_lattice("stripe", 2, values=(0.0, 1.0, 2.0))
    assert separable_lower_bound(graph, potential) == 12.0


def test_separable_lower_bound_needs_lattice():
    graph = PeriodicGraph(1, 2, [(0, 1, (0,)), (0, 1, (1,)), (0, 0, (1,))])
    assert hypercubic_layout(graph) is None
    with pytest.raises(NotHypercubicError):
        separable_lower_bound(graph, [0.0, 1.0])


def test_hypercubic_layout_of_relabelled_chain():
    graph = PeriodicGraph(1, 2, [(0, 1, (0,)), (0, 1, (1,))])
    periods, residues = hypercubic_layout(graph)
    assert periods == (2,)
    assert sorted(residues) == [(0,), (1,)]
    assert separable_lower_bound(graph, [0.0, 1.0]) == 0.0


def test_separable_lower_bound_without_layout_fields():
    graph, potential = load("z2_stripe_plain")
    assert graph.lattice is None
    periods, residues = hypercubic_layout(graph)
    assert periods == (2, 1)
    assert residues == [(0, 0), (1, 0)]
    assert separable_lower_bound(graph, potential) == 8.0
    refined, refined_potential = apply_refinement(graph, potential, "auto")
    assert refined.nu > graph.nu
    assert separable_lower_bound(refined, refined_potential) == 8.0


def test_constant_potential_measure_matches_bound():
    graph, potential = load("z2_constant")
    result = coupling_sweep(graph, potential, (10.0, 1000.0), grid=32)
    assert np.allclose(result.measures, 8.0, atol=1e-6)


@pytest.mark.parametrize("mu", [1.0, 10.0, 1000.0])
def test_scaling_check(mu):
    graph, potential = load("z2_injective")
    assert scaling_check(graph, potential, mu, grid=8) < 1e-10


@pytest.mark.parametrize("name, decays", [
    ("z2_injective", True),
    ("z2_stripe", False),
])
def test_verify_criterion(name, decays):
    graph, potential = load(name)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ClusterOverlapWarning)
        check = verify_criterion(graph, potential, grid=24)
    assert check.report.decays is decays
    assert check.consistent
