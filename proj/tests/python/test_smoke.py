"""End-to-end smoke tests for the python bindings.

Numerical depth lives in the C++ test suite; these tests check that the
bindings expose the pipeline faithfully: types convert, determinism holds,
and small problems produce the right answers.
"""

import math

import numpy as np
import pytest

import ptrans


SPIKES = ptrans.ComplexMeasure(
    nodes=[0.3 - 0.4j, -0.7 + 0.2j],
    weights=[2.0 + 0.0j, 1.0 - 1.0j],
)


def test_moments_roundtrip_through_interpolation():
    # n = 2p keeps the Hankel pencil square and nonsingular on clean data.
    moments = ptrans.gen_moments(SPIKES, 4)
    assert moments.n == 4
    assert moments.sigma == 0.0
    # a_0 is the total weight.
    assert moments.values[0] == pytest.approx(sum(SPIKES.weights), abs=1e-12)

    solution = ptrans.interpolate(moments)
    # Poles come sorted by descending |residue|.
    assert len(solution.poles) == 2
    assert solution.poles[0] == pytest.approx(SPIKES.nodes[0], abs=1e-10)
    assert solution.poles[1] == pytest.approx(SPIKES.nodes[1], abs=1e-10)
    assert solution.residues[0] == pytest.approx(SPIKES.weights[0], abs=1e-10)
    assert solution.residues[1] == pytest.approx(SPIKES.weights[1], abs=1e-10)

    # Clean moments of a rank-2 measure make the order-4 pencil singular; the
    # library reports that as a typed error instead of returning ghost poles.
    with pytest.raises(ptrans.SingularPencil):
        ptrans.interpolate(ptrans.gen_moments(SPIKES, 8))


def test_noise_is_keyed_and_quadrature_combined():
    clean = ptrans.gen_moments(SPIKES, 12)
    spec = ptrans.NoiseSpec(sigma=0.1, seed=7, stream=3)
    a = ptrans.add_noise(clean, spec)
    b = ptrans.add_noise(clean, spec)
    assert a.values == b.values, "same (seed, stream) must reproduce the draw"
    c = ptrans.add_noise(clean, ptrans.NoiseSpec(sigma=0.1, seed=7, stream=4))
    assert a.values != c.values, "different streams must decorrelate"
    assert a.sigma == pytest.approx(0.1)
    again = ptrans.add_noise(a, ptrans.NoiseSpec(sigma=0.1, seed=8, stream=0))
    assert again.sigma == pytest.approx(math.hypot(0.1, 0.1))


def test_snr_matches_definition():
    assert ptrans.snr(SPIKES, 0.5) == pytest.approx(min(abs(w) for w in SPIKES.weights) / 0.5)


def test_pure_noise_closed_form_at_origin():
    assert ptrans.h2_closed_form(0j, 0j, 1.0, 0j) == pytest.approx(1.0 / math.pi, rel=1e-12)
    # Pure-noise value is sigma-free.
    assert ptrans.h2_closed_form(0j, 0j, 0.25, 0.3 + 0.1j) == pytest.approx(
        ptrans.h2_closed_form(0j, 0j, 1.0, 0.3 + 0.1j), rel=1e-12
    )


def test_expected_F_is_hermitian_numpy_matrix():
    F = ptrans.expected_F(SPIKES, 8, 0.3, 0.2 + 0.1j)
    assert isinstance(F, np.ndarray)
    assert F.shape == (4, 4)
    assert np.allclose(F, F.conj().T)


def test_grid_fields_are_numpy_arrays():
    lattice = ptrans.Lattice.square(1.0, 41)
    field = ptrans.analytic_density(SPIKES, 8, 0.1, lattice)
    assert field.values.shape == (41, 41)
    assert field.mask.shape == (41, 41)
    assert field.mask.dtype == np.uint8
    # The boundary ring is masked out by the Laplacian stencil.
    assert field.mask[0, 0] == 0 and field.mask[20, 20] == 1
    # Density concentrates near the nodes (n = 8 keeps a visible pure-noise
    # background, so the in-disk share stays well below 1).
    assert ptrans.mass_fraction_near(field, SPIKES.nodes, 0.3) > 0.5


def test_transform_recovers_clean_spikes():
    data = ptrans.gen_moments(SPIKES, 8)
    lattice = ptrans.Lattice.square(1.0, 81)
    transform = ptrans.ptransform(data, lattice, R=6, sigma_prime=1e-6,
                                  spec=ptrans.NoiseSpec(sigma=0.0, seed=11, stream=0))
    assert transform.pool.R == 6
    result = ptrans.estimate_params(transform, tau=0.5, radius=0.1,
                                    min_height_fraction=0.05)
    assert result.p_hat == 2
    by_weight = sorted(zip(result.weights_hat, result.nodes_hat),
                       key=lambda wn: -abs(wn[0]))
    assert by_weight[0][1] == pytest.approx(SPIKES.nodes[0], abs=2e-2)
    assert by_weight[1][1] == pytest.approx(SPIKES.nodes[1], abs=2e-2)
    assert by_weight[0][0] == pytest.approx(SPIKES.weights[0], abs=1e-2)
    # Transform mass approximates the total weight a_0.
    assert ptrans.lattice_mass(transform.grid) == pytest.approx(
        sum(SPIKES.weights).real, rel=0.05
    )
    for cluster in result.clusters:
        assert cluster.cardinality_fraction == pytest.approx(1.0)
        assert len(cluster.members) >= 6


def test_mc_density_reports_errors_and_determinism():
    lattice = ptrans.Lattice.square(1.5, 21)
    spec = ptrans.NoiseSpec(sigma=0.0, seed=5, stream=0)
    mc1 = ptrans.mc_condensed_density(SPIKES, 4, 0.5, lattice, 200, spec)
    mc2 = ptrans.mc_condensed_density(SPIKES, 4, 0.5, lattice, 200, spec)
    assert mc1.trials == 200
    assert np.array_equal(mc1.density.values, mc2.density.values)
    interior = mc1.std_error.mask.astype(bool)
    assert (mc1.std_error.values[interior] >= 0).all()


def test_degenerate_moments_raise_typed_errors():
    zeros = ptrans.MomentSequence(values=[0j] * 8)
    with pytest.raises(ptrans.SingularPencil):
        ptrans.interpolate(zeros)
    with pytest.raises(ValueError):
        ptrans.ComplexMeasure(nodes=[0.5 + 0j, 0.5 + 0j], weights=[1.0 + 0j, 1.0 + 0j])


def test_benchmark_configuration_is_wired():
    measure = ptrans.benchmark_measure()
    assert measure.size() == 5
    assert max(abs(w) for w in measure.weights) == pytest.approx(20.0)
    config = ptrans.benchmark_config()
    assert config.n == 80
    assert config.sigma == pytest.approx(0.2)
    assert config.M == 50 and config.R == 100
    assert config.sigma_prime == pytest.approx(math.sqrt(1e-4) * config.sigma)
    assert config.lattice.nx == config.lattice.ny == 200
    assert ptrans.snr(measure, config.sigma) == pytest.approx(5.0)

    radii = ptrans.support_radii(measure, config.n, config.sigma,
                                 ptrans.Lattice.square(1.5, 101))
    assert len(radii) == 5
    assert any(r.found for r in radii)
