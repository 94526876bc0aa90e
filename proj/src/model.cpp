#include "ptrans/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptrans {

void ComplexMeasure::validate() const {
  if (nodes.empty()) {
    throw std::invalid_argument("measure needs at least one node");
  }
  if (nodes.size() != weights.size()) {
    throw std::invalid_argument("nodes and weights differ in length");
  }
  for (const auto& xi : nodes) {
    if (!std::isfinite(xi.real()) || !std::isfinite(xi.imag())) {
      throw std::invalid_argument("non-finite node");
    }
  }
  for (const auto& c : weights) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("non-finite weight");
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (std::abs(nodes[i] - nodes[j]) < kMinNodeSeparation) {
        throw std::invalid_argument("nodes closer than the minimum separation");
      }
    }
  }
}

MomentSequence gen_moments(const ComplexMeasure& measure, int n) {
  measure.validate();
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("moment count must be even and at least 2");
  }
  MomentSequence out;
  out.values.assign(static_cast<std::size_t>(n), Complex{0.0, 0.0});
  out.sigma = 0.0;
  // Accumulate in extended precision so the stored moments carry essentially
  // one rounding each; the downstream parameter map can amplify moment error
  // by many orders of magnitude.
  using LComplex = std::complex<long double>;
  std::vector<LComplex> powers(measure.nodes.size(), LComplex{1.0L, 0.0L});
  std::vector<LComplex> nodes(measure.nodes.size());
  std::vector<LComplex> weights(measure.nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    nodes[j] = LComplex{measure.nodes[j].real(), measure.nodes[j].imag()};
    weights[j] = LComplex{measure.weights[j].real(), measure.weights[j].imag()};
  }
  for (int k = 0; k < n; ++k) {
    LComplex s{0.0L, 0.0L};
    for (std::size_t j = 0; j < powers.size(); ++j) {
      s += weights[j] * powers[j];
      powers[j] *= nodes[j];
    }
    out.values[static_cast<std::size_t>(k)] =
        Complex{static_cast<double>(s.real()), static_cast<double>(s.imag())};
  }
  return out;
}

MomentSequence add_noise(const MomentSequence& clean, const NoiseSpec& spec) {
  if (spec.sigma < 0.0) {
    throw std::invalid_argument("noise level must be nonnegative");
  }
  MomentSequence out = clean;
  if (spec.sigma == 0.0) {
    return out;
  }
  const auto noise = complex_gaussian_vector(clean.n(), spec);
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    out.values[k] += noise[k];
  }
  out.sigma = std::hypot(clean.sigma, spec.sigma);
  return out;
}

double snr(const ComplexMeasure& measure, double sigma) {
  measure.validate();
  if (sigma <= 0.0) {
    throw std::invalid_argument("noise level must be positive");
  }
  double min_amp = std::numeric_limits<double>::infinity();
  for (const auto& c : measure.weights) {
    min_amp = std::min(min_amp, std::abs(c));
  }
  return min_amp / sigma;
}

}  // namespace ptrans
