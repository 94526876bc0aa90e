#include "ptrans/rng.hpp"

#include <cmath>
#include <numbers>

namespace ptrans {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64(std::uint64_t& state) {
  state += kGolden;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SplitStream::SplitStream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state ^= stream * kGolden + 0x243f6a8885a308d3ULL;
  const std::uint64_t b = splitmix64(state);
  const std::uint64_t c = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  eng_.seed(seq);
}

double SplitStream::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double SplitStream::uniform_pos() {
  return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
}

std::complex<double> SplitStream::complex_gaussian(double sigma) {
  const double u1 = uniform_pos();
  const double u2 = uniform();
  const double radius = sigma * std::sqrt(-std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::vector<std::complex<double>> complex_gaussian_vector(int n, const NoiseSpec& spec) {
  SplitStream stream(spec.seed, spec.stream);
  std::vector<std::complex<double>> draws(static_cast<std::size_t>(n));
  for (auto& v : draws) v = stream.complex_gaussian(spec.sigma);
  return draws;
}

std::uint64_t substream(std::uint64_t stream, std::uint64_t salt) {
  std::uint64_t state = stream ^ (salt * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64(state);
}

}  // namespace ptrans
