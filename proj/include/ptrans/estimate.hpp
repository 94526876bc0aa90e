#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ptrans/ptransform.hpp"

namespace ptrans {

/// One pool pole with its residue and originating pseudosample index (1-based).
struct PoolMember {
  Complex pole;
  Complex residue;
  int r = 0;
};

/// Pool poles attracted by one candidate peak.
struct Cluster {
  Complex candidate;
  double height = 0.0;  ///< Transform field value at the candidate peak.
  std::vector<PoolMember> members;
  double radius = 0.0;
  /// Distinct pseudosample indices present, divided by R.
  double cardinality_fraction = 0.0;

  Complex mean_pole() const;
  Complex mean_residue() const;
};

/// Final parameter estimate extracted from a transform field and its pool.
struct EstimationResult {
  int p_hat = 0;
  std::vector<Complex> nodes_hat;    ///< Cluster pole means, sorted by |weight| desc.
  std::vector<Complex> weights_hat;  ///< Matching residue means.
  std::vector<Cluster> clusters;
  int n_candidates = 0;  ///< Raw local maxima before any filtering.
  /// Mean surplus |weight| when more components than true nodes were kept;
  /// filled by the benchmark harness, absent otherwise.
  std::optional<double> residual_amplitude;
};

/// Strict 8-neighbourhood local maxima of the valid interior, at or above
/// min_height_fraction times the global maximum, sorted by descending value.
/// Fields whose maximum is not positive yield no candidates.
std::vector<std::pair<Complex, double>> local_maxima(const GridField& field,
                                                     double min_height_fraction);

/// All pool poles within radius of the candidate, with the fraction of
/// pseudosamples represented.
Cluster build_cluster(Complex candidate, const PseudosamplePool& pool, double radius);

/// Candidate peaks -> greedy non-overlap pass (descending value, drop any
/// candidate within radius of an accepted one) -> exclusive pole assignment to
/// the nearest accepted candidate -> cardinality filter at tau. radius <= 0
/// selects 5 lattice spacings. Clusters left without members are dropped.
EstimationResult estimate_params(const PTransformResult& transform, double tau = 0.5,
                                 double radius = -1.0, double min_height_fraction = 0.05);

}  // namespace ptrans
