#include "ptrans/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ptrans {

Complex Cluster::mean_pole() const {
  Complex sum{0.0, 0.0};
  for (const auto& member : members) sum += member.pole;
  return members.empty() ? sum : sum / static_cast<double>(members.size());
}

Complex Cluster::mean_residue() const {
  Complex sum{0.0, 0.0};
  for (const auto& member : members) sum += member.residue;
  return members.empty() ? sum : sum / static_cast<double>(members.size());
}

std::vector<std::pair<Complex, double>> local_maxima(const GridField& field,
                                                     double min_height_fraction) {
  if (min_height_fraction < 0.0 || min_height_fraction >= 1.0) {
    throw std::invalid_argument("min height fraction must lie in [0, 1)");
  }
  const int nx = field.lattice.nx;
  const int ny = field.lattice.ny;
  double global_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    if (field.mask[i]) global_max = std::max(global_max, field.values[i]);
  }
  std::vector<std::pair<Complex, double>> maxima;
  if (!(global_max > 0.0)) {
    return maxima;
  }
  const double threshold = min_height_fraction * global_max;
  for (int iy = 1; iy < ny - 1; ++iy) {
    for (int ix = 1; ix < nx - 1; ++ix) {
      if (!field.valid(ix, iy)) continue;
      const double v = field.at(ix, iy);
      if (v < threshold) continue;
      bool is_max = true;
      bool neighbours_valid = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (!field.valid(ix + dx, iy + dy)) {
            neighbours_valid = false;
            is_max = false;
            break;
          }
          if (field.at(ix + dx, iy + dy) >= v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max && neighbours_valid) {
        maxima.emplace_back(field.lattice.point(ix, iy), v);
      }
    }
  }
  std::stable_sort(maxima.begin(), maxima.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return maxima;
}

Cluster build_cluster(Complex candidate, const PseudosamplePool& pool, double radius) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("cluster radius must be positive");
  }
  Cluster cluster;
  cluster.candidate = candidate;
  cluster.radius = radius;
  std::set<int> samples;
  for (std::size_t s = 0; s < pool.solutions.size(); ++s) {
    const auto& sol = pool.solutions[s];
    const int r = static_cast<int>(s) + 1;
    for (std::size_t j = 0; j < sol.poles.size(); ++j) {
      if (std::abs(sol.poles[j] - candidate) <= radius) {
        cluster.members.push_back({sol.poles[j], sol.residues[j], r});
        samples.insert(r);
      }
    }
  }
  cluster.cardinality_fraction =
      pool.R > 0 ? static_cast<double>(samples.size()) / pool.R : 0.0;
  return cluster;
}

EstimationResult estimate_params(const PTransformResult& transform, double tau, double radius,
                                 double min_height_fraction) {
  if (tau < 0.0 || tau > 1.0) {
    throw std::invalid_argument("tau must lie in [0, 1]");
  }
  const Lattice& lattice = transform.grid.lattice;
  if (radius <= 0.0) {
    radius = 5.0 * std::min(lattice.hx(), lattice.hy());
  }

  EstimationResult result;
  const auto candidates = local_maxima(transform.grid, min_height_fraction);
  result.n_candidates = static_cast<int>(candidates.size());

  std::vector<std::pair<Complex, double>> accepted;
  for (const auto& [z, value] : candidates) {
    bool overlaps = false;
    for (const auto& prev : accepted) {
      if (std::abs(z - prev.first) < radius) {
        overlaps = true;
        break;
      }
    }
    if (!overlaps) accepted.push_back({z, value});
  }

  // Exclusive assignment: every pool pole joins at most one cluster, the one
  // around its nearest accepted candidate (if within radius).
  std::vector<Cluster> clusters(accepted.size());
  std::vector<std::set<int>> samples(accepted.size());
  for (std::size_t k = 0; k < accepted.size(); ++k) {
    clusters[k].candidate = accepted[k].first;
    clusters[k].height = accepted[k].second;
    clusters[k].radius = radius;
  }
  const auto& pool = transform.pool;
  for (std::size_t s = 0; s < pool.solutions.size(); ++s) {
    const auto& sol = pool.solutions[s];
    const int r = static_cast<int>(s) + 1;
    for (std::size_t j = 0; j < sol.poles.size(); ++j) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_k = accepted.size();
      for (std::size_t k = 0; k < accepted.size(); ++k) {
        const double dist = std::abs(sol.poles[j] - accepted[k].first);
        if (dist <= radius && dist < best) {
          best = dist;
          best_k = k;
        }
      }
      if (best_k < accepted.size()) {
        clusters[best_k].members.push_back({sol.poles[j], sol.residues[j], r});
        samples[best_k].insert(r);
      }
    }
  }
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    clusters[k].cardinality_fraction =
        pool.R > 0 ? static_cast<double>(samples[k].size()) / pool.R : 0.0;
  }

  std::vector<Cluster> kept;
  for (auto& cluster : clusters) {
    if (!cluster.members.empty() && cluster.cardinality_fraction >= tau) {
      kept.push_back(std::move(cluster));
    }
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Cluster& a, const Cluster& b) {
    return std::abs(a.mean_residue()) > std::abs(b.mean_residue());
  });

  result.clusters = std::move(kept);
  result.p_hat = static_cast<int>(result.clusters.size());
  result.nodes_hat.reserve(result.clusters.size());
  result.weights_hat.reserve(result.clusters.size());
  for (const auto& cluster : result.clusters) {
    result.nodes_hat.push_back(cluster.mean_pole());
    result.weights_hat.push_back(cluster.mean_residue());
  }
  return result;
}

}  // namespace ptrans
