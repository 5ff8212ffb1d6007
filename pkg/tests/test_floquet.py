import numpy as np
import pytest

from flatpaths.lattice import PeriodicGraph, gen_lattice, induced_subgraph, level_sets
from flatpaths.cohomology import GaugePotential, chain_psi_theta, solve_gauge, is_h1_trivial
from flatpaths.floquet import (FloquetMatrix, NonHermitianError, NumericalContractError, assemble_floquet,
                               assemble_restricted_laplacian, hermitian_eigenvalues, compute_bands, spectrum_measure,
                               merge_intervals, merge_tolerance, gauge_conjugate, gauge_invariance_check, theta_grid)

from conftest import random_graph


Z1_CELL3 = PeriodicGraph(1, 3, [(0, 1, (0,)), (1, 2, (0,)), (2, 0, (1,))])
Z2_CELL4 = PeriodicGraph(2, 4, [(0, 2, (0, 0)), (2, 0, (1, 0)), (1, 3, (0, 0)), (3, 1, (1, 0)),
                                (0, 1, (0, 0)), (1, 0, (0, 1)), (2, 3, (0, 0)), (3, 2, (0, 1))])
SINGLE = PeriodicGraph(2, 1, [])


def test_floquet_matrix_at_zero():
    matrix = assemble_floquet(Z1_CELL3, None, 0.0, (0.0,)).matrix
    assert np.allclose(matrix, np.ones((3, 3)) - np.eye(3))


def test_floquet_matrix_at_half():
    matrix = assemble_floquet(Z1_CELL3, None, 0.0, (0.5,)).matrix
    assert matrix[2, 0] == pytest.approx(-1.0)
    assert matrix[0, 2] == pytest.approx(-1.0)
    assert matrix[0, 1] == pytest.approx(1.0)
    assert matrix[1, 2] == pytest.approx(1.0)


def test_floquet_matrix_single_vertex():
    matrix = assemble_floquet(SINGLE, [2.5], 4.0, (0.1, 0.2)).matrix
    assert matrix.shape == (1, 1)
    assert matrix[0, 0] == pytest.approx(10.0)


def test_floquet_matrix_sums_parallel_edges():
    theta = (0.1, 0.3)
    matrix = assemble_floquet(Z2_CELL4, None, 0.0, theta).matrix
    assert matrix[0, 1] == pytest.approx(1.0 + np.exp(-2j * np.pi * theta[1]))
    assert np.allclose(matrix, matrix.conj().T)


def test_floquet_matrix_self_loop():
    graph = PeriodicGraph(1, 1, [(0, 0, (1,))])
    matrix = assemble_floquet(graph, None, 0.0, (0.2,)).matrix
    assert matrix[0, 0] == pytest.approx(2.0 * np.cos(2.0 * np.pi * 0.2))


def test_restricted_laplacian():
    assert np.allclose(assemble_restricted_laplacian(Z1_CELL3, [1], (0.3,)).matrix, [[0.0]])
    matrix = assemble_restricted_laplacian(Z2_CELL4, [0, 1], (0.0, 0.25)).matrix
    assert matrix.shape == (2, 2)
    assert matrix[0, 1] == pytest.approx(1.0 + np.exp(-0.5j * np.pi))
    with pytest.raises(ValueError):
        assemble_restricted_laplacian(Z1_CELL3, [], (0.0,))


@pytest.mark.parametrize("theta", [0.0, 0.1, 0.37, 0.5, 0.9])
def test_eigenvalues_of_chain_cell(theta):
    expected = sorted(2.0 * np.cos(2.0 * np.pi * (theta + k) / 3.0) for k in range(3))
    values = hermitian_eigenvalues(assemble_floquet(Z1_CELL3, None, 0.0, (theta,)), check_residual=True)
    assert np.allclose(values, expected, atol=1e-12)


def test_eigenvalues_of_diagonal_matrix():
    assert np.allclose(hermitian_eigenvalues(np.diag([3.0, -1.0, 2.0])), [-1.0, 2.0, 3.0])


def test_non_hermitian_matrix():
    with pytest.raises(NonHermitianError):
        hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert issubclass(NonHermitianError, NumericalContractError)


def test_theta_grid():
    thetas = theta_grid((4, 2))
    assert thetas.shape == (8, 2)
    assert thetas[1].tolist() == [0.0, 0.5]
    assert thetas[-1].tolist() == [0.75, 0.5]


def test_single_vertex_bands():
    bands = compute_bands(SINGLE, [0.5], 7.0, 8)
    assert np.allclose(bands.intervals, [[3.5, 3.5]])
    assert spectrum_measure(bands).measure == 0.0


def test_chain_bands_cover_interval():
    bands = compute_bands(Z1_CELL3, None, 1.0, 256)
    assert bands.intervals[0, 0] == pytest.approx(-2.0, abs=1e-8)
    assert bands.intervals[-1, 1] == pytest.approx(2.0, abs=1e-8)
    assert spectrum_measure(bands).measure == pytest.approx(4.0, abs=0.05)


def test_refinement_only_widens_bands():
    coarse = compute_bands(Z1_CELL3, [0.0, 0.3, 1.0], 1.0, 7, refine=False)
    refined = compute_bands(Z1_CELL3, [0.0, 0.3, 1.0], 1.0, 7, refine=True)
    assert np.all(refined.intervals[:, 0] <= coarse.intervals[:, 0])
    assert np.all(refined.intervals[:, 1] >= coarse.intervals[:, 1])
    assert refined.refinement_depth > 0 == coarse.refinement_depth


def test_square_lattice_spectrum():
    bands = compute_bands(Z2_CELL4, None, 1.0, 64)
    estimate = spectrum_measure(bands)
    assert estimate.intervals[0][0] == pytest.approx(-4.0, abs=1e-6)
    assert estimate.intervals[-1][1] == pytest.approx(4.0, abs=1e-6)
    assert estimate.measure == pytest.approx(8.0, abs=1e-6)


def test_auto_refined_chain_spectrum():
    graph, potential = gen_lattice("hypercubic", 1)
    assert spectrum_measure(compute_bands(graph, potential, 1.0, 256)).measure == pytest.approx(4.0, abs=0.05)


def test_bands_are_sorted_per_theta():
    bands = compute_bands(Z2_CELL4, [0.0, 1.0, 2.0, 3.0], 3.0, 16)
    assert np.all(np.diff(bands.eigenvalues, axis=1) >= 0)
    assert np.all(bands.intervals[:, 0] <= bands.intervals[:, 1])


def test_invalid_grid():
    with pytest.raises(ValueError):
        compute_bands(Z1_CELL3, None, 1.0, 1)


@pytest.mark.parametrize("intervals, measure, components", [
    ([[0.0, 1.0], [0.5, 2.0]], 2.0, 1),
    ([[0.0, 1.0], [2.0, 3.0]], 2.0, 2),
    ([[2.0, 3.0], [0.0, 1.0], [1.0, 1.5]], 2.5, 2),
    ([[1.0, 1.0]], 0.0, 1),
])
def test_spectrum_measure(intervals, measure, components):
    estimate = spectrum_measure(intervals)
    assert estimate.measure == pytest.approx(measure)
    assert len(estimate.intervals) == components


def test_merge_tolerance():
    assert len(merge_intervals([[0.0, 1.0], [1.0 + 1e-12, 2.0]], 1e-9)) == 1
    assert len(merge_intervals([[0.0, 1.0], [1.0 + 1e-6, 2.0]], 1e-9)) == 2


def test_relative_merge_tolerance():
    assert merge_tolerance([[-0.5, 0.5]]) == pytest.approx(1e-9)
    assert merge_tolerance([[-300.0, 2.0]], 1e-3) == pytest.approx(0.3)
    estimate = spectrum_measure([[0.0, 1.0], [1.5, 2.0]], rel_tol=0.25)
    assert estimate.measure == pytest.approx(2.0)
    assert len(estimate.intervals) == 1


def test_measure_grows_with_nested_grids():
    potential = [0.0, 1.0, 2.0, 3.0]
    measures = [spectrum_measure(compute_bands(Z2_CELL4, potential, 5.0, n, refine=False)).measure
                for n in (4, 8, 16, 32)]
    assert np.all(np.diff(measures) >= -1e-9)


def test_bands_match_dense_sampling(rng):
    for _ in range(20):
        nu = int(rng.integers(1, 4))
        edges = []
        for _ in range(int(rng.integers(1, 2 * nu + 2))):
            u, v = (int(x) for x in rng.integers(0, nu, size=2))
            offset = (int(rng.choice([-1, 0, 1])),)
            if u == v and not any(offset):
                continue
            edges.append((u, v, offset))
        graph = PeriodicGraph(1, nu, edges)
        potential = rng.normal(size=nu)
        dense = compute_bands(graph, potential, 1.5, 10000, refine=False)
        refined = compute_bands(graph, potential, 1.5, 64)
        assert np.abs(refined.intervals - dense.intervals).max() <= 1e-4


def test_gauge_conjugate_constant_phase():
    matrix = assemble_floquet(Z2_CELL4, None, 0.0, (0.2, 0.7))
    for value in (0.0, 0.37):
        phi = GaugePotential(matrix.vertices, np.full(4, value))
        assert np.allclose(gauge_conjugate(matrix, phi).matrix, matrix.matrix, atol=1e-14)


def test_gauge_conjugation_removes_phases():
    # level set {0, 2} of the 3-cell is a tree joined through the wrapping edge
    vertices = [0, 2]
    fragment = induced_subgraph(Z1_CELL3, vertices)
    theta = (0.31,)
    phi = solve_gauge(fragment, chain_psi_theta(fragment, theta))
    conjugated = gauge_conjugate(assemble_restricted_laplacian(Z1_CELL3, vertices, theta), phi)
    assert np.allclose(conjugated.matrix, assemble_restricted_laplacian(Z1_CELL3, vertices, (0.0,)).matrix,
                       atol=1e-12)


def test_gauge_invariance_check(rng):
    eigenvalue_deviation, entry_deviation = gauge_invariance_check(Z1_CELL3, [0, 2], rng.random((8, 1)))
    assert eigenvalue_deviation < 1e-10
    assert entry_deviation < 1e-12


def test_gauge_invariance_on_random_graphs(rng):
    for _ in range(50):
        graph = random_graph(rng)
        potential = rng.integers(0, 3, size=graph.nu).astype(float)
        thetas = rng.random((100, graph.d))
        for level_set in level_sets(graph, potential):
            if not is_h1_trivial(induced_subgraph(graph, level_set.vertices))[0]:
                continue
            eigenvalue_deviation, entry_deviation = gauge_invariance_check(graph, level_set.vertices, thetas)
            assert eigenvalue_deviation < 1e-10
            assert entry_deviation < 1e-12


def test_floquet_matrix_repr():
    matrix = FloquetMatrix(np.eye(2), (0, 1))
    assert matrix.shape == (2, 2)
