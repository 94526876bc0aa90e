#include "ptrans/pencil.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace ptrans {

HankelPair build_hankel(const MomentSequence& moments) {
  const int n = moments.n();
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("hankel pencil needs an even moment count >= 2");
  }
  const int m = n / 2;
  HankelPair pair;
  pair.u0.resize(m, m);
  pair.u1.resize(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      pair.u0(i, j) = moments.values[static_cast<std::size_t>(i + j)];
      pair.u1(i, j) = moments.values[static_cast<std::size_t>(i + j + 1)];
    }
  }
  return pair;
}

std::vector<Complex> solve_pencil(const HankelPair& pencil) {
  const auto m = pencil.u0.rows();
  if (m == 0 || pencil.u0.cols() != m || pencil.u1.rows() != m || pencil.u1.cols() != m) {
    throw std::invalid_argument("pencil matrices must be square and equally sized");
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(pencil.u0);
  const double rcond = lu.rcond();
  if (!std::isfinite(rcond) || rcond < kRcondFloor) {
    throw SingularPencil("u0 is numerically singular (rcond " + std::to_string(rcond) + ")");
  }
  const Eigen::MatrixXcd shifted = lu.solve(pencil.u1);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(shifted, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw SingularPencil("eigenvalue iteration failed on the shifted pencil");
  }
  const auto& values = solver.eigenvalues();
  std::vector<Complex> poles(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    poles[static_cast<std::size_t>(i)] = values(i);
  }
  return poles;
}

std::vector<Complex> residues_from_poles(const MomentSequence& moments,
                                         const std::vector<Complex>& poles,
                                         double* rcond_out) {
  const int m = static_cast<int>(poles.size());
  if (m == 0) {
    throw std::invalid_argument("need at least one pole");
  }
  if (moments.n() < m) {
    throw std::invalid_argument("need at least as many moments as poles");
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (std::abs(poles[static_cast<std::size_t>(i)] - poles[static_cast<std::size_t>(j)]) <
          kMinNodeSeparation) {
        throw IllConditionedVandermonde("near-coincident poles");
      }
    }
  }
  Eigen::MatrixXcd vand(m, m);
  for (int j = 0; j < m; ++j) {
    Complex power{1.0, 0.0};
    for (int k = 0; k < m; ++k) {
      vand(k, j) = power;
      power *= poles[static_cast<std::size_t>(j)];
    }
  }
  Eigen::VectorXcd rhs(m);
  for (int k = 0; k < m; ++k) {
    rhs(k) = moments.values[static_cast<std::size_t>(k)];
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(vand);
  const double rcond = lu.rcond();
  if (rcond_out != nullptr) {
    *rcond_out = rcond;
  }
  if (!std::isfinite(rcond) || rcond < kRcondFloor) {
    throw IllConditionedVandermonde("vandermonde system is numerically singular (rcond " +
                                    std::to_string(rcond) + ")");
  }
  Eigen::VectorXcd sol = lu.solve(rhs);
  // One refinement step recovers a couple of digits when the poles crowd.
  Eigen::VectorXcd residual = rhs - vand * sol;
  sol += lu.solve(residual);
  std::vector<Complex> residues(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    residues[static_cast<std::size_t>(j)] = sol(j);
  }
  return residues;
}

namespace {

using LComplex = std::complex<long double>;
using MatrixXcl = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXcl = Eigen::Matrix<LComplex, Eigen::Dynamic, 1>;

long double interpolation_residual(const std::vector<LComplex>& moments,
                                   const std::vector<LComplex>& poles,
                                   const std::vector<LComplex>& residues) {
  const std::size_t n = moments.size();
  const std::size_t m = poles.size();
  long double worst = 0.0L;
  std::vector<LComplex> power(m, LComplex{1.0L, 0.0L});
  for (std::size_t k = 0; k < n; ++k) {
    LComplex rebuilt{0.0L, 0.0L};
    for (std::size_t j = 0; j < m; ++j) {
      rebuilt += residues[j] * power[j];
      power[j] *= poles[j];
    }
    worst = std::max(worst, std::abs(rebuilt - moments[k]));
  }
  return worst;
}

// Newton steps on the full interpolation system sum_j c_j xi_j^k = a_k,
// k = 0..n-1 (2m equations, 2m unknowns), carried out in extended precision.
// The double-precision eigensolve leaves a few orders of magnitude on the
// table when nodes crowd; each step is accepted only if the worst moment
// residual shrinks, so a degenerate Jacobian simply leaves the input as is.
void polish(const MomentSequence& moments, std::vector<Complex>& poles,
            std::vector<Complex>& residues) {
  const int n = moments.n();
  const int m = static_cast<int>(poles.size());
  if (n != 2 * m) return;

  long double scale = 0.0L;
  std::vector<LComplex> data(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const Complex v = moments.values[static_cast<std::size_t>(k)];
    data[static_cast<std::size_t>(k)] = LComplex{v.real(), v.imag()};
    scale = std::max(scale, std::abs(data[static_cast<std::size_t>(k)]));
  }
  if (scale == 0.0L) return;

  std::vector<LComplex> xp(static_cast<std::size_t>(m));
  std::vector<LComplex> xr(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    xp[static_cast<std::size_t>(j)] = LComplex{poles[static_cast<std::size_t>(j)].real(),
                                               poles[static_cast<std::size_t>(j)].imag()};
    xr[static_cast<std::size_t>(j)] = LComplex{residues[static_cast<std::size_t>(j)].real(),
                                               residues[static_cast<std::size_t>(j)].imag()};
  }

  long double best = interpolation_residual(data, xp, xr);
  const long double floor = 1e-17L * scale;
  bool improved = false;
  const int max_iters = m <= 10 ? 4 : 2;
  for (int iter = 0; iter < max_iters && best > floor; ++iter) {
    MatrixXcl jac(n, 2 * m);
    VectorXcl rhs(n);
    std::vector<LComplex> prev(static_cast<std::size_t>(m), LComplex{0.0L, 0.0L});
    std::vector<LComplex> power(static_cast<std::size_t>(m), LComplex{1.0L, 0.0L});
    for (int k = 0; k < n; ++k) {
      LComplex rebuilt{0.0L, 0.0L};
      for (int j = 0; j < m; ++j) {
        const std::size_t sj = static_cast<std::size_t>(j);
        jac(k, j) = power[sj];
        jac(k, m + j) = static_cast<long double>(k) * xr[sj] * prev[sj];
        rebuilt += xr[sj] * power[sj];
        prev[sj] = power[sj];
        power[sj] *= xp[sj];
      }
      rhs(k) = data[static_cast<std::size_t>(k)] - rebuilt;
    }
    Eigen::PartialPivLU<MatrixXcl> lu(jac);
    const VectorXcl step = lu.solve(rhs);
    if (!step.allFinite()) break;

    std::vector<LComplex> cand_poles = xp;
    std::vector<LComplex> cand_residues = xr;
    for (int j = 0; j < m; ++j) {
      cand_residues[static_cast<std::size_t>(j)] += step(j);
      cand_poles[static_cast<std::size_t>(j)] += step(m + j);
    }
    const long double cand = interpolation_residual(data, cand_poles, cand_residues);
    if (!std::isfinite(static_cast<double>(cand)) || cand >= best) break;
    xp = std::move(cand_poles);
    xr = std::move(cand_residues);
    best = cand;
    improved = true;
  }
  if (!improved) return;
  for (int j = 0; j < m; ++j) {
    poles[static_cast<std::size_t>(j)] =
        Complex{static_cast<double>(xp[static_cast<std::size_t>(j)].real()),
                static_cast<double>(xp[static_cast<std::size_t>(j)].imag())};
    residues[static_cast<std::size_t>(j)] =
        Complex{static_cast<double>(xr[static_cast<std::size_t>(j)].real()),
                static_cast<double>(xr[static_cast<std::size_t>(j)].imag())};
  }
}

}  // namespace

PencilSolution interpolate(const MomentSequence& moments) {
  PencilSolution out;
  const HankelPair pair = build_hankel(moments);
  std::vector<Complex> poles = solve_pencil(pair);
  std::vector<Complex> residues = residues_from_poles(moments, poles, &out.condition_flag);
  polish(moments, poles, residues);

  std::vector<std::size_t> order(poles.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(residues[a]) > std::abs(residues[b]);
  });
  out.poles.reserve(poles.size());
  out.residues.reserve(poles.size());
  for (std::size_t idx : order) {
    out.poles.push_back(poles[idx]);
    out.residues.push_back(residues[idx]);
  }
  return out;
}

}  // namespace ptrans
