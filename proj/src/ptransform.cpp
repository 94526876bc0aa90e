#include "ptrans/ptransform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ptrans {

PseudosamplePool make_pseudosamples(const MomentSequence& data, int R, double sigma_prime,
                                    const NoiseSpec& spec) {
  if (R < 1) {
    throw std::invalid_argument("need at least one pseudosample");
  }
  if (sigma_prime < 0.0) {
    throw std::invalid_argument("perturbation level must be nonnegative");
  }
  PseudosamplePool pool;
  pool.R = R;
  pool.sigma_prime = sigma_prime;
  pool.solutions.reserve(static_cast<std::size_t>(R));
  constexpr int kMaxRetries = 10;
  for (int r = 1; r <= R; ++r) {
    for (int attempt = 0;; ++attempt) {
      const NoiseSpec draw{sigma_prime, spec.seed,
                           substream(spec.stream, static_cast<std::uint64_t>(r) |
                                                      (static_cast<std::uint64_t>(attempt) << 40))};
      try {
        pool.solutions.push_back(interpolate(add_noise(data, draw)));
        break;
      } catch (const SingularPencil&) {
        ++pool.failed;
        if (attempt >= kMaxRetries) throw;
      } catch (const IllConditionedVandermonde&) {
        ++pool.failed;
        if (attempt >= kMaxRetries) throw;
      }
    }
  }
  return pool;
}

ComplexGridField accumulate_potential(const PseudosamplePool& pool, const Lattice& lattice) {
  lattice.validate();
  if (pool.R < 1 || pool.solutions.size() != static_cast<std::size_t>(pool.R)) {
    throw std::invalid_argument("pool is empty or inconsistent");
  }
  ComplexGridField field = ComplexGridField::zeros(lattice);
  const double clamp = 0.5 * std::min(lattice.hx(), lattice.hy());
  const int nx = lattice.nx;
  const int ny = lattice.ny;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const Complex z = lattice.point(ix, iy);
      PairwiseAccumulator<Complex> acc;
      for (const auto& sol : pool.solutions) {
        Complex sum{0.0, 0.0};
        for (std::size_t j = 0; j < sol.poles.size(); ++j) {
          double dist = std::abs(z - sol.poles[j]);
          if (dist < 1e-9) dist = clamp;
          sum += sol.residues[j] * std::log(dist);
        }
        acc.add(sum);
      }
      field.at(ix, iy) = acc.total() / static_cast<double>(pool.R);
    }
  }
  return field;
}

bool pool_inside(const PseudosamplePool& pool, const Lattice& lattice) {
  for (const auto& sol : pool.solutions) {
    for (const auto& pole : sol.poles) {
      if (!lattice.contains(pole)) return false;
    }
  }
  return true;
}

PTransformResult ptransform(const MomentSequence& data, const Lattice& lattice, int R,
                            double sigma_prime, const NoiseSpec& spec) {
  PTransformResult result;
  result.pool = make_pseudosamples(data, R, sigma_prime, spec);
  const ComplexGridField potential = accumulate_potential(result.pool, lattice);
  ComplexGridField lap = laplacian(potential);
  const double scale = 1.0 / (2.0 * std::numbers::pi);
  result.grid = GridField::zeros(lattice);
  result.grid_modulus = GridField::zeros(lattice);
  for (std::size_t i = 0; i < lap.values.size(); ++i) {
    const Complex v = lap.values[i] * scale;
    result.grid.values[i] = v.real();
    result.grid.mask[i] = lap.mask[i];
    result.grid_modulus.values[i] = std::abs(v);
    result.grid_modulus.mask[i] = lap.mask[i];
  }
  result.n = data.n();
  result.sigma = data.sigma;
  result.sigma_prime = sigma_prime;
  result.seed = spec.seed;
  return result;
}

}  // namespace ptrans
