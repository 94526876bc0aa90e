#pragma once

#include <complex>
#include <vector>

#include "ptrans/rng.hpp"

namespace ptrans {

using Complex = std::complex<double>;

/// Nodes (and interpolation poles) must stay pairwise separated by at least
/// this much to count as distinct.
inline constexpr double kMinNodeSeparation = 1e-10;

/// Discrete complex measure: p point masses c_j placed at nodes xi_j in the
/// complex plane.
struct ComplexMeasure {
  std::vector<Complex> nodes;
  std::vector<Complex> weights;

  int size() const { return static_cast<int>(nodes.size()); }

  /// Throws std::invalid_argument on empty or mismatched lists, non-finite
  /// entries, or near-coincident nodes.
  void validate() const;
};

/// Moment vector a_0..a_{n-1}. sigma records the total noise level the values
/// carry (0 for clean moments).
struct MomentSequence {
  std::vector<Complex> values;
  double sigma = 0.0;

  int n() const { return static_cast<int>(values.size()); }
};

/// Clean moments s_k = sum_j c_j xi_j^k for k = 0..n-1.
/// n must be even and at least 2.
MomentSequence gen_moments(const ComplexMeasure& measure, int n);

/// Adds one circular complex gaussian draw per moment, E|v_k|^2 = spec.sigma^2.
/// The result's sigma field combines the input level with spec.sigma in
/// quadrature. spec.sigma = 0 returns the input bit for bit.
MomentSequence add_noise(const MomentSequence& clean, const NoiseSpec& spec);

/// min_j |c_j| / sigma. Rejects sigma <= 0.
double snr(const ComplexMeasure& measure, double sigma);

}  // namespace ptrans
