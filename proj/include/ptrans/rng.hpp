#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace ptrans {

/// Keyed noise source. sigma is the per-sample level with E|v|^2 = sigma^2;
/// (seed, stream) select a reproducible substream. Identical triples produce
/// identical draw sequences on every platform.
struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Deterministic generator for one (seed, stream) pair. The engine is a
/// mt19937_64 keyed through splitmix64; gaussians use an explicit polar
/// Box-Muller so the draw sequence does not depend on the standard library
/// implementation.
class SplitStream {
 public:
  SplitStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform double in [0, 1).
  double uniform();
  /// Uniform double in (0, 1].
  double uniform_pos();
  /// Circular complex gaussian with E|v|^2 = sigma^2
  /// (each real component has variance sigma^2 / 2).
  std::complex<double> complex_gaussian(double sigma);

 private:
  std::mt19937_64 eng_;
};

/// n iid circular complex gaussian draws with E|v_k|^2 = spec.sigma^2.
std::vector<std::complex<double>> complex_gaussian_vector(int n, const NoiseSpec& spec);

/// Derives a fresh stream id from (stream, salt); used for per-replication
/// substreams and for retry draws.
std::uint64_t substream(std::uint64_t stream, std::uint64_t salt);

/// Fixed-order pairwise (binary counter) summation. For a given push order the
/// result is independent of how the surrounding work was scheduled, which keeps
/// trial averages bit-stable across thread counts.
template <class T>
class PairwiseAccumulator {
 public:
  void add(T x) {
    std::uint64_t mask = 1;
    std::size_t level = 0;
    while (count_ & mask) {
      x += levels_[level];
      mask <<= 1;
      ++level;
    }
    if (level == levels_.size()) {
      levels_.push_back(x);
    } else {
      levels_[level] = x;
    }
    ++count_;
  }

  T total() const {
    T sum{};
    std::uint64_t mask = 1;
    for (std::size_t level = 0; level < levels_.size(); ++level, mask <<= 1) {
      if (count_ & mask) sum += levels_[level];
    }
    return sum;
  }

  std::uint64_t count() const { return count_; }

 private:
  std::vector<T> levels_;
  std::uint64_t count_ = 0;
};

}  // namespace ptrans
