#pragma once

#include <cstdint>
#include <vector>

#include "ptrans/density.hpp"
#include "ptrans/model.hpp"
#include "ptrans/pencil.hpp"

namespace ptrans {

/// Pole/residue solutions of R independently perturbed copies of one moment
/// vector. solutions[r-1] belongs to pseudosample r.
struct PseudosamplePool {
  int R = 0;
  double sigma_prime = 0.0;
  std::vector<PencilSolution> solutions;
  int failed = 0;  ///< Draws redrawn after a solver failure.
};

/// Pseudosample-averaged log-potential and its scaled Laplacian.
struct PTransformResult {
  GridField grid;          ///< Real part of (1/2pi) Laplacian of the potential.
  GridField grid_modulus;  ///< Modulus of the same complex field.
  PseudosamplePool pool;
  int n = 0;
  double sigma = 0.0;        ///< Noise level carried by the input moments.
  double sigma_prime = 0.0;  ///< Perturbation level of the pseudosamples.
  std::uint64_t seed = 0;
};

/// Interpolates R perturbed copies data + noise(sigma_prime). spec supplies the
/// (seed, stream) key; its sigma field is ignored. A draw whose pencil solve
/// fails is redrawn up to 10 times (counted in failed) before the error
/// propagates. sigma_prime = 0 reproduces interpolate(data) R times.
PseudosamplePool make_pseudosamples(const MomentSequence& data, int R, double sigma_prime,
                                    const NoiseSpec& spec);

/// Pool-averaged logarithmic potential
/// (1/R) sum_r sum_j c_j^(r) log|z - xi_j^(r)| on the lattice. Distances
/// below 1e-9 are clamped to half the grid spacing.
ComplexGridField accumulate_potential(const PseudosamplePool& pool, const Lattice& lattice);

/// Whether every pole of the pool lies inside the lattice box.
bool pool_inside(const PseudosamplePool& pool, const Lattice& lattice);

/// Full transform: pool, potential, (1/2pi) Laplacian; the real part is the
/// canonical field, the modulus is kept as a diagnostic.
PTransformResult ptransform(const MomentSequence& data, const Lattice& lattice, int R,
                            double sigma_prime, const NoiseSpec& spec);

}  // namespace ptrans
