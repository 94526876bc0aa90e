#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "ptrans/harness.hpp"
#include "ptrans/model.hpp"
#include "ptrans/pencil.hpp"
#include "support.hpp"

using ptrans::Complex;
using ptrans::ComplexMeasure;
using ptrans::MomentSequence;
using ptrans::NoiseSpec;

namespace {

MomentSequence from_values(std::vector<Complex> values) {
  MomentSequence m;
  m.values = std::move(values);
  return m;
}

double min_distance_to(const std::vector<Complex>& pool, Complex target) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pool) best = std::min(best, std::abs(p - target));
  return best;
}

}  // namespace

TEST_CASE("build_hankel fills both shifts") {
  const auto pair = ptrans::build_hankel(from_values({2.0, 0.0, 2.0, 0.0}));
  REQUIRE(pair.u0.rows() == 2);
  CHECK(pair.u0(0, 0) == Complex(2.0, 0.0));
  CHECK(pair.u0(0, 1) == Complex(0.0, 0.0));
  CHECK(pair.u0(1, 0) == Complex(0.0, 0.0));
  CHECK(pair.u0(1, 1) == Complex(2.0, 0.0));
  CHECK(pair.u1(0, 0) == Complex(0.0, 0.0));
  CHECK(pair.u1(0, 1) == Complex(2.0, 0.0));
  CHECK(pair.u1(1, 0) == Complex(2.0, 0.0));
  CHECK(pair.u1(1, 1) == Complex(0.0, 0.0));
}

TEST_CASE("build_hankel scalar case and index arithmetic") {
  const auto scalar = ptrans::build_hankel(from_values({2.0, 1.0}));
  REQUIRE(scalar.u0.rows() == 1);
  CHECK(scalar.u0(0, 0) == Complex(2.0, 0.0));
  CHECK(scalar.u1(0, 0) == Complex(1.0, 0.0));

  std::vector<Complex> ramp(80);
  for (int k = 0; k < 80; ++k) ramp[k] = Complex(static_cast<double>(k), 0.0);
  const auto big = ptrans::build_hankel(from_values(ramp));
  REQUIRE(big.u0.rows() == 40);
  CHECK(big.u0(39, 39) == Complex(78.0, 0.0));
  CHECK(big.u1(39, 39) == Complex(79.0, 0.0));
  CHECK(big.u0(12, 27) == Complex(39.0, 0.0));

  CHECK_THROWS_AS(ptrans::build_hankel(from_values({1.0, 2.0, 3.0})), std::invalid_argument);
}

TEST_CASE("hankel matrices are constant along anti-diagonals") {
  auto rng = ptrans::SplitStream(7, 0);
  std::vector<Complex> a(12);
  for (auto& v : a) v = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  const auto pair = ptrans::build_hankel(from_values(a));
  const int m = static_cast<int>(pair.u0.rows());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      CHECK(pair.u0(i, j) == a[static_cast<std::size_t>(i) + j]);
      CHECK(pair.u1(i, j) == a[static_cast<std::size_t>(i) + j + 1]);
    }
  }
}

TEST_CASE("solve_pencil scalar and 2x2 cases") {
  const auto scalar = ptrans::solve_pencil(ptrans::build_hankel(from_values({2.0, 1.0})));
  REQUIRE(scalar.size() == 1);
  CHECK(std::abs(scalar[0] - Complex(0.5, 0.0)) < 1e-14);

  auto roots = ptrans::solve_pencil(ptrans::build_hankel(from_values({2.0, 0.0, 2.0, 0.0})));
  REQUIRE(roots.size() == 2);
  std::sort(roots.begin(), roots.end(),
            [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(std::abs(roots[0] - Complex(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(roots[1] - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("solve_pencil recovers the benchmark nodes from clean moments") {
  const auto measure = ptrans::benchmark_measure();
  const auto moments = ptrans::gen_moments(measure, 10);
  const auto poles = ptrans::solve_pencil(ptrans::build_hankel(moments));
  REQUIRE(poles.size() == 5);
  for (const auto& node : measure.nodes) {
    CHECK(min_distance_to(poles, node) < 1e-6);
  }
}

TEST_CASE("singular pencils raise the typed error") {
  CHECK_THROWS_AS(
      ptrans::solve_pencil(ptrans::build_hankel(from_values({0.0, 0.0, 0.0, 0.0}))),
      ptrans::SingularPencil);

  // Clean rank-1 moments overstuffed into a 2x2 pencil are singular too.
  const auto moments = ptrans::gen_moments(ComplexMeasure{{0.5}, {2.0}}, 4);
  CHECK_THROWS_AS(ptrans::solve_pencil(ptrans::build_hankel(moments)),
                  ptrans::SingularPencil);
}

TEST_CASE("residues_from_poles solves the Vandermonde system") {
  const auto single =
      ptrans::residues_from_poles(from_values({2.0, 1.0}), {Complex(0.5, 0.0)});
  REQUIRE(single.size() == 1);
  CHECK(std::abs(single[0] - Complex(2.0, 0.0)) < 1e-14);

  const auto pair = ptrans::residues_from_poles(from_values({2.0, 0.0, 2.0, 0.0}),
                                                {Complex(1.0, 0.0), Complex(-1.0, 0.0)});
  REQUIRE(pair.size() == 2);
  CHECK(std::abs(pair[0] - Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(pair[1] - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("residues round-trip a random three-node measure") {
  auto rng = ptrans::SplitStream(11, 0);
  const auto measure = test_support::random_measure(rng, 3);
  const auto moments = ptrans::gen_moments(measure, 6);
  double rcond = 0.0;
  const auto residues = ptrans::residues_from_poles(moments, measure.nodes, &rcond);
  REQUIRE(residues.size() == 3);
  CHECK(rcond > 0.0);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(residues[j] - measure.weights[j]) < 1e-8);
  }
}

TEST_CASE("near-coincident poles raise the typed error") {
  CHECK_THROWS_AS(
      ptrans::residues_from_poles(from_values({2.0, 0.0, 2.0, 0.0}),
                                  {Complex(0.5, 0.0), Complex(0.5 + 1e-12, 0.0)}),
      ptrans::IllConditionedVandermonde);
}

TEST_CASE("interpolate handles the n=2 case") {
  const auto sol = ptrans::interpolate(from_values({2.0, 1.0}));
  REQUIRE(sol.poles.size() == 1);
  CHECK(std::abs(sol.poles[0] - Complex(0.5, 0.0)) < 1e-14);
  CHECK(std::abs(sol.residues[0] - Complex(2.0, 0.0)) < 1e-14);
}

TEST_CASE("exact interpolation round-trip over random measures") {
  auto rng = ptrans::SplitStream(2025, 0);
  for (int trial = 0; trial < 25; ++trial) {
    const int p = 1 + static_cast<int>(rng.uniform() * 5.0);
    const auto measure = test_support::random_measure(rng, p);
    const auto moments = ptrans::gen_moments(measure, 2 * p);
    const auto sol = ptrans::interpolate(moments);
    REQUIRE(static_cast<int>(sol.poles.size()) == p);
    const double err = test_support::max_recovery_error(measure, sol.poles, sol.residues);
    CHECK(err < 1e-8);
  }
}

TEST_CASE("crowded round-trips stay at the conditioning floor") {
  // With 6..8 nodes the moments-to-parameters map can amplify the rounding
  // already present in the stored double moments by 1e7 and more, so the
  // uniform 1e-8 bound of the small-p case is out of reach for tail draws;
  // most draws still hit it and the rest stay within the amplified-rounding
  // envelope.
  auto rng = ptrans::SplitStream(2026, 0);
  int tight = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const int p = 6 + static_cast<int>(rng.uniform() * 3.0);
    const auto measure = test_support::random_measure(rng, p);
    const auto moments = ptrans::gen_moments(measure, 2 * p);
    const auto sol = ptrans::interpolate(moments);
    REQUIRE(static_cast<int>(sol.poles.size()) == p);
    const double err = test_support::max_recovery_error(measure, sol.poles, sol.residues);
    CHECK(err < 2e-5);
    if (err < 1e-8) ++tight;
  }
  CHECK(tight >= 20);
}

TEST_CASE("solution reconstructs the leading moments") {
  const auto measure = ptrans::benchmark_measure();
  const auto data = ptrans::add_noise(ptrans::gen_moments(measure, 20), NoiseSpec{0.2, 5, 1});
  const auto sol = ptrans::interpolate(data);
  REQUIRE(sol.poles.size() == 10);

  double max_moment = 0.0;
  for (const auto& v : data.values) max_moment = std::max(max_moment, std::abs(v));
  if (sol.condition_flag > 1e-10) {
    for (int k = 0; k < 10; ++k) {
      Complex rebuilt{0.0, 0.0};
      for (std::size_t j = 0; j < sol.poles.size(); ++j) {
        rebuilt += sol.residues[j] * std::pow(sol.poles[j], k);
      }
      CHECK(std::abs(rebuilt - data.values[static_cast<std::size_t>(k)]) <=
            1e-6 * max_moment);
    }
  } else {
    WARN_MESSAGE(false, "residue solve too ill-conditioned for the reconstruction check");
  }
}

TEST_CASE("poles come back sorted by descending residue magnitude") {
  const auto measure = ptrans::benchmark_measure();
  const auto data = ptrans::add_noise(ptrans::gen_moments(measure, 80), NoiseSpec{0.2, 100, 0});
  const auto sol = ptrans::interpolate(data);
  REQUIRE(sol.poles.size() == 40);
  for (std::size_t j = 1; j < sol.residues.size(); ++j) {
    CHECK(std::abs(sol.residues[j - 1]) >= std::abs(sol.residues[j]));
  }
}

TEST_CASE("scaling the moments scales the residues and fixes the poles") {
  auto rng = ptrans::SplitStream(31, 2);
  const auto measure = test_support::random_measure(rng, 3);
  auto data = ptrans::add_noise(ptrans::gen_moments(measure, 6), NoiseSpec{0.01, 31, 0});
  const Complex gamma{1.3, -0.7};
  auto scaled = data;
  for (auto& v : scaled.values) v *= gamma;

  const auto base = ptrans::interpolate(data);
  const auto after = ptrans::interpolate(scaled);
  REQUIRE(base.poles.size() == after.poles.size());
  for (std::size_t j = 0; j < base.poles.size(); ++j) {
    CHECK(std::abs(after.poles[j] - base.poles[j]) <=
          1e-10 * (1.0 + std::abs(base.poles[j])));
    const Complex expect = gamma * base.residues[j];
    CHECK(std::abs(after.residues[j] - expect) <= 1e-10 * std::abs(expect));
  }
}

TEST_CASE("embedded clean measure keeps p poles at the nodes under tiny noise") {
  auto rng = ptrans::SplitStream(47, 0);
  const auto measure = test_support::random_measure(rng, 2);
  const auto data =
      ptrans::add_noise(ptrans::gen_moments(measure, 12), NoiseSpec{1e-8, 47, 1});
  const auto sol = ptrans::interpolate(data);
  REQUIRE(sol.poles.size() == 6);
  int captured = 0;
  for (const auto& node : measure.nodes) {
    int hits = 0;
    for (const auto& pole : sol.poles) {
      if (std::abs(pole - node) < 1e-4) ++hits;
    }
    CHECK(hits == 1);
    captured += hits;
  }
  CHECK(captured == 2);
}

TEST_CASE("noisy benchmark solves put poles near most nodes") {
  // Single noisy solves at n = 80, sigma = 0.2 recover the three central
  // nodes essentially always, while the two nodes with the fastest radial
  // decay are each missed in a minority of draws.  A solve can also abort
  // entirely when the noise pushes the pencil or the pole Vandermonde past
  // the conditioning guard; that happens for roughly one draw in seven.
  const auto measure = ptrans::benchmark_measure();
  const auto clean = ptrans::gen_moments(measure, 80);
  int solved = 0;
  int near4 = 0;
  int near5 = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    try {
      const auto data =
          ptrans::add_noise(clean, NoiseSpec{0.2, static_cast<std::uint64_t>(1000 + s), 0});
      const auto sol = ptrans::interpolate(data);
      ++solved;
      int covered = 0;
      for (const auto& node : measure.nodes) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& pole : sol.poles) best = std::min(best, std::abs(pole - node));
        if (best <= 0.05) ++covered;
      }
      if (covered >= 4) ++near4;
      if (covered >= 5) ++near5;
    } catch (const std::runtime_error&) {
      // Conditioning guard tripped; the draw produces no estimate.
    }
  }
  CHECK(solved >= 75);
  CHECK(near4 * 100 >= solved * 85);
  CHECK(near5 * 100 >= solved * 55);
}
