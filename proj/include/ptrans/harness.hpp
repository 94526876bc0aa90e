#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ptrans/estimate.hpp"

namespace ptrans {

/// Settings for a full estimation experiment over M independent data sets.
struct ExperimentConfig {
  ComplexMeasure measure;
  int n = 80;
  double sigma = 0.2;
  int M = 50;                 ///< Outer replications.
  int R = 100;                ///< Pseudosamples per replication.
  double sigma_prime = 0.002; ///< Pseudosample perturbation level.
  Lattice lattice = Lattice{};
  double tau = 0.5;
  double radius = 0.02;
  double min_height = 0.02;
  std::uint64_t seed = 1;
};

/// Five-component benchmark measure: decaying complex exponentials, two of
/// them closer than the classical resolution limit at n = 80.
ComplexMeasure benchmark_measure();

/// Standard benchmark run settings for that measure.
ExperimentConfig benchmark_config();

/// Aggregate recovery statistics over the accepted replications.
struct ParamStats {
  int requested = 0;
  int accepted = 0;
  int discarded_few_candidates = 0;
  int discarded_low_p = 0;
  int discarded_duplicate_match = 0;
  int discarded_failed_transform = 0;  ///< Solver failure exhausted the pseudosample retries.
  double acceptance_rate = 0.0;

  /// Model-order statistics over every replication that produced an estimate
  /// (including later-discarded ones; the discard rules censor p_hat < p, so
  /// accepted-only accounting would force a nonnegative bias).
  double p_bias = 0.0;
  double p_sd = 0.0;
  double p_mse = 0.0;

  std::vector<Complex> xi_true;
  std::vector<Complex> xi_bias;
  std::vector<double> xi_sd;
  std::vector<double> xi_mse;
  std::vector<Complex> c_true;
  std::vector<Complex> c_bias;
  std::vector<double> c_sd;
  std::vector<double> c_mse;

  /// Fraction of accepted replications with |xi_hat - xi| <= 0.03, per node.
  std::vector<double> recall_within_003;

  /// Mean |weight| of the surplus components — those ranked beyond the top p
  /// by transform peak height — averaged over every replication that produced
  /// an estimate with p_hat > p.
  double a_res = 0.0;
  int a_res_count = 0;  ///< Replications contributing to a_res.
};

/// Runs the transform + clustering pipeline on M noisy data sets and matches
/// estimates to the true nodes (nearest neighbour; a duplicate match, a
/// candidate shortage, p_hat < p, or an unrecoverable solver failure discards
/// that replication — the sweep itself never aborts). bias / sd / MSE use the
/// population convention, so MSE = sd^2 + |bias|^2 exactly.
ParamStats run_table1(const ExperimentConfig& config);

/// Squared-error comparison between the plain interpolation estimate and the
/// pseudosample-averaged one, rank-matched by descending |weight|.
struct ErrorComparison {
  std::vector<double> e0;  ///< Per replication, single solve on the data.
  std::vector<double> eR;  ///< Per replication, pool average.
  int failed = 0;          ///< Replications skipped for solver failures.
  double fraction_eR_smaller = 0.0;
  double mean_e0 = 0.0;
  double mean_eR = 0.0;
  double sd_e0 = 0.0;
  double sd_eR = 0.0;
};

ErrorComparison run_error_comparison(const ExperimentConfig& config);

/// Data-free support radius for one node, from the analytic density profiled
/// along the line towards its nearest neighbour.
struct SupportRadius {
  bool found = false;   ///< A local maximum existed near the node.
  double radius = 0.0;  ///< Interquartile range of the profile peak.
};

/// Interquartile widths of the analytic-density peaks, probed along the
/// segment from each node towards its nearest neighbour (half the separation
/// each way). The lattice only supplies the stencil spacing.
std::vector<SupportRadius> support_radii(const ComplexMeasure& measure, int n, double sigma,
                                         const Lattice& lattice);

}  // namespace ptrans
