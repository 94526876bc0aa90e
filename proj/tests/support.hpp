// Helpers shared by the unit tests and the acceptance runner.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "ptrans/model.hpp"
#include "ptrans/rng.hpp"

namespace test_support {

using ptrans::Complex;

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Random p-node measure with |xi| in [0.3, 1.2], pairwise node distance
/// >= 0.05 and |c| in [0.5, 20], phases uniform.
inline ptrans::ComplexMeasure random_measure(ptrans::SplitStream& rng, int p) {
  std::vector<Complex> nodes;
  nodes.reserve(p);
  while (static_cast<int>(nodes.size()) < p) {
    const double radius = 0.3 + 0.9 * rng.uniform();
    const double angle = kTwoPi * rng.uniform();
    const Complex cand = std::polar(radius, angle);
    const bool separated = std::all_of(nodes.begin(), nodes.end(), [&](Complex seen) {
      return std::abs(cand - seen) >= 0.05;
    });
    if (separated) nodes.push_back(cand);
  }
  std::vector<Complex> weights;
  weights.reserve(p);
  for (int j = 0; j < p; ++j) {
    const double amp = 0.5 + 19.5 * rng.uniform();
    weights.push_back(std::polar(amp, kTwoPi * rng.uniform()));
  }
  return ptrans::ComplexMeasure{std::move(nodes), std::move(weights)};
}

/// Largest recovery error over all nodes and weights, matching every true
/// node to its nearest estimate.
inline double max_recovery_error(const ptrans::ComplexMeasure& truth,
                                 const std::vector<Complex>& nodes_hat,
                                 const std::vector<Complex>& weights_hat) {
  double worst = 0.0;
  for (int j = 0; j < truth.size(); ++j) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes_hat.size(); ++i) {
      const double d = std::abs(nodes_hat[i] - truth.nodes[j]);
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    worst = std::max(worst, best_dist);
    if (best < weights_hat.size()) {
      worst = std::max(worst, std::abs(weights_hat[best] - truth.weights[j]));
    }
  }
  return worst;
}

}  // namespace test_support
