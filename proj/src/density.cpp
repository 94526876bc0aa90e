#include "ptrans/density.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ptrans/pencil.hpp"

namespace ptrans {

namespace {

constexpr double kPi = std::numbers::pi;

/// log |det B| through a partial-pivot LU; -inf when a pivot underflows.
double log_abs_det(const Eigen::MatrixXcd& mat) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(mat);
  double sum = 0.0;
  const auto& diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double mag = std::abs(diag(i));
    if (mag == 0.0) {
      return -std::numeric_limits<double>::infinity();
    }
    sum += std::log(mag);
  }
  return sum;
}

template <class Field>
Field laplacian_impl(const Field& field) {
  field.lattice.validate();
  Field out = Field::zeros(field.lattice);
  const int nx = field.lattice.nx;
  const int ny = field.lattice.ny;
  const double ihx2 = 1.0 / (field.lattice.hx() * field.lattice.hx());
  const double ihy2 = 1.0 / (field.lattice.hy() * field.lattice.hy());
  std::fill(out.mask.begin(), out.mask.end(), std::uint8_t{0});
  for (int iy = 1; iy < ny - 1; ++iy) {
    for (int ix = 1; ix < nx - 1; ++ix) {
      if (!(field.valid(ix, iy) && field.valid(ix - 1, iy) && field.valid(ix + 1, iy) &&
            field.valid(ix, iy - 1) && field.valid(ix, iy + 1))) {
        continue;
      }
      const auto center = field.at(ix, iy);
      out.at(ix, iy) = (field.at(ix - 1, iy) + field.at(ix + 1, iy) - 2.0 * center) * ihx2 +
                       (field.at(ix, iy - 1) + field.at(ix, iy + 1) - 2.0 * center) * ihy2;
      out.mask[static_cast<std::size_t>(iy) * nx + ix] = 1;
    }
  }
  return out;
}

/// Shared state for evaluating expected_F over many z with one assembly.
struct ExpectedFKernel {
  Eigen::MatrixXcd u0;
  Eigen::MatrixXcd u1;
  int n = 0;
  double sigma = 0.0;

  ExpectedFKernel(const MomentSequence& clean, double sigma_in) {
    HankelPair pair = build_hankel(clean);
    u0 = std::move(pair.u0);
    u1 = std::move(pair.u1);
    n = clean.n();
    sigma = sigma_in;
  }

  void evaluate(Complex z, Eigen::MatrixXcd& out, Eigen::MatrixXcd& scratch) const {
    const auto m = u0.rows();
    scratch = u1 - z * u0;
    out.noalias() = scratch * scratch.adjoint();
    const double level = 0.5 * n * sigma * sigma;
    if (level > 0.0) {
      const double diag = 1.0 + std::norm(z);
      for (Eigen::Index i = 0; i < m; ++i) {
        out(i, i) += level * diag;
        if (i + 1 < m) {
          out(i, i + 1) -= level * std::conj(z);
          out(i + 1, i) -= level * z;
        }
      }
    }
  }
};

}  // namespace

std::pair<int, int> Lattice::nearest_index(Complex z) const {
  int ix = static_cast<int>(std::lround((z.real() - x_min) / hx()));
  int iy = static_cast<int>(std::lround((z.imag() - y_min) / hy()));
  ix = std::clamp(ix, 0, nx - 1);
  iy = std::clamp(iy, 0, ny - 1);
  return {ix, iy};
}

Lattice Lattice::square(double half, int n) {
  Lattice lattice;
  lattice.x_min = -half;
  lattice.x_max = half;
  lattice.y_min = -half;
  lattice.y_max = half;
  lattice.nx = n;
  lattice.ny = n;
  lattice.validate();
  return lattice;
}

void Lattice::validate() const {
  if (nx < 3 || ny < 3) {
    throw std::invalid_argument("lattice needs at least 3 points per side");
  }
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw std::invalid_argument("lattice extents must be increasing");
  }
}

GridField GridField::zeros(const Lattice& lattice) {
  lattice.validate();
  GridField field;
  field.lattice = lattice;
  const std::size_t cells = static_cast<std::size_t>(lattice.nx) * lattice.ny;
  field.values.assign(cells, 0.0);
  field.mask.assign(cells, std::uint8_t{1});
  return field;
}

ComplexGridField ComplexGridField::zeros(const Lattice& lattice) {
  lattice.validate();
  ComplexGridField field;
  field.lattice = lattice;
  const std::size_t cells = static_cast<std::size_t>(lattice.nx) * lattice.ny;
  field.values.assign(cells, Complex{0.0, 0.0});
  field.mask.assign(cells, std::uint8_t{1});
  return field;
}

GridField laplacian(const GridField& field) { return laplacian_impl(field); }

ComplexGridField laplacian(const ComplexGridField& field) { return laplacian_impl(field); }

double value_near(const GridField& field, Complex z) {
  const auto [ix, iy] = field.lattice.nearest_index(z);
  return field.at(ix, iy);
}

double lattice_mass(const GridField& field) {
  double sum = 0.0;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    if (field.mask[i]) sum += field.values[i];
  }
  return sum * field.lattice.cell_area();
}

Complex disk_mass(const ComplexGridField& field, Complex center, double radius) {
  Complex sum{0.0, 0.0};
  const int nx = field.lattice.nx;
  const int ny = field.lattice.ny;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      if (!field.valid(ix, iy)) continue;
      if (std::abs(field.lattice.point(ix, iy) - center) <= radius) {
        sum += field.at(ix, iy);
      }
    }
  }
  return sum * field.lattice.cell_area();
}

double mass_fraction_near(const GridField& field, const std::vector<Complex>& nodes,
                          double radius) {
  double near = 0.0;
  double total = 0.0;
  const int nx = field.lattice.nx;
  const int ny = field.lattice.ny;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      if (!field.valid(ix, iy)) continue;
      const double v = field.at(ix, iy);
      if (v <= 0.0) continue;
      total += v;
      const Complex z = field.lattice.point(ix, iy);
      for (const auto& node : nodes) {
        if (std::abs(z - node) <= radius) {
          near += v;
          break;
        }
      }
    }
  }
  if (total <= 0.0) return 0.0;
  return near / total;
}

double h2_closed_form(Complex s0, Complex s1, double sigma, Complex z) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("closed form needs sigma > 0");
  }
  const double t = 1.0 + std::norm(z);
  const double sig2 = sigma * sigma;
  const double num = sig2 * t + std::norm(s0 + std::conj(z) * s1);
  const double den = kPi * sig2 * t * t * t;
  const double expo = -std::norm(z * s0 - s1) / (sig2 * t);
  return num / den * std::exp(expo);
}

double pure_noise_potential(int n, Complex z) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("moment count must be even and at least 2");
  }
  const int m = n / 2;
  const double t = std::norm(z);
  if (t <= 1.0) {
    double poly = 1.0;
    for (int j = m - 1; j >= 0; --j) poly = poly * t + 1.0;
    return std::log(poly) / m;
  }
  const double u = 1.0 / t;
  double poly = 1.0;
  for (int j = m - 1; j >= 0; --j) poly = poly * u + 1.0;
  return (m * std::log(t) + std::log(poly)) / m;
}

double pure_noise_density(int n, Complex z) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("moment count must be even and at least 2");
  }
  const int m = n / 2;
  const double t = std::norm(z);
  double value = 0.0;
  if (t <= 1.0) {
    // P, P', P'' of P(t) = sum_{j=0}^m t^j by Horner.
    double p = 1.0, dp = 0.0, ddp = 0.0;
    for (int j = m - 1; j >= 0; --j) {
      ddp = ddp * t + 2.0 * dp;
      dp = dp * t + p;
      p = p * t + 1.0;
    }
    value = (t * (ddp * p - dp * dp) + dp * p) / (p * p);
  } else {
    // Rescaled by t^{-m} to stay bounded outside the unit disk:
    // Q = sum u^j, S1 = sum (m-i) u^i, S2 = sum (m-i)(m-i-1) u^i, u = 1/t.
    const double u = 1.0 / t;
    double q = 0.0, s1 = 0.0, s2 = 0.0;
    double upow = 1.0;
    for (int i = 0; i <= m; ++i) {
      q += upow;
      if (i <= m - 1) s1 += (m - i) * upow;
      if (i <= m - 2) s2 += static_cast<double>(m - i) * (m - i - 1) * upow;
      upow *= u;
    }
    value = ((s1 + s2) * q - s1 * s1) / (t * q * q);
  }
  return value / (kPi * m);
}

Eigen::MatrixXcd expected_F_from_moments(const MomentSequence& clean, double sigma, Complex z) {
  if (sigma < 0.0) {
    throw std::invalid_argument("noise level must be nonnegative");
  }
  ExpectedFKernel kernel(clean, sigma);
  Eigen::MatrixXcd out;
  Eigen::MatrixXcd scratch;
  kernel.evaluate(z, out, scratch);
  return out;
}

Eigen::MatrixXcd expected_F(const ComplexMeasure& measure, int n, double sigma, Complex z) {
  return expected_F_from_moments(gen_moments(measure, n), sigma, z);
}

double analytic_log_potential(const MomentSequence& clean, double sigma, Complex z) {
  const ExpectedFKernel kernel(clean, sigma);
  const int m = clean.n() / 2;
  Eigen::MatrixXcd f(m, m), scratch(m, m);
  kernel.evaluate(z, f, scratch);
  const Eigen::MatrixXcd herm = 0.5 * (f + f.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  solver.compute(herm, Eigen::EigenvaluesOnly);
  const auto& mu = solver.eigenvalues();
  const double mu_max = mu(m - 1);
  if (!(mu_max > 0.0)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double clip = kEigenvalueClip * mu_max;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    if (mu(k) > clip) sum += std::log(mu(k));
  }
  return sum;
}

McDensity mc_condensed_density(const ComplexMeasure& measure, int n, double sigma,
                               const Lattice& lattice, int trials, const NoiseSpec& spec) {
  lattice.validate();
  if (trials < 2) {
    throw std::invalid_argument("need at least two trials");
  }
  if (sigma < 0.0) {
    throw std::invalid_argument("noise level must be nonnegative");
  }
  const MomentSequence clean = gen_moments(measure, n);
  const int m = n / 2;
  const int nx = lattice.nx;
  const int ny = lattice.ny;
  const std::size_t cells = static_cast<std::size_t>(nx) * ny;
  const double ihx2 = 1.0 / (lattice.hx() * lattice.hx());
  const double ihy2 = 1.0 / (lattice.hy() * lattice.hy());
  const double scale = 4.0 / n;  // (2/n) log|det|^2 = (4/n) log|det|

  std::vector<PairwiseAccumulator<double>> acc_u(cells), acc_h(cells), acc_h2(cells);
  std::vector<double> u_grid(cells, 0.0);
  Eigen::MatrixXcd b(m, m);
  HankelPair pair;

  McDensity out;
  out.trials = trials;
  constexpr int kMaxRedraws = 100;

  for (int trial = 0; trial < trials; ++trial) {
    bool ok = false;
    for (int attempt = 0; attempt <= kMaxRedraws && !ok; ++attempt) {
      const NoiseSpec draw{sigma, spec.seed,
                           substream(spec.stream, static_cast<std::uint64_t>(trial) |
                                                      (static_cast<std::uint64_t>(attempt) << 40))};
      const MomentSequence sample = add_noise(clean, draw);
      if (m > 1) {
        pair = build_hankel(sample);
      }
      ok = true;
      for (int iy = 0; iy < ny && ok; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
          const Complex z = lattice.point(ix, iy);
          double lad;
          if (m == 1) {
            const double mag = std::abs(sample.values[1] - z * sample.values[0]);
            lad = mag == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(mag);
          } else {
            b = pair.u1 - z * pair.u0;
            lad = log_abs_det(b);
          }
          const double u = scale * lad;
          if (!std::isfinite(u)) {
            ok = false;
            ++out.resampled;
            break;
          }
          u_grid[static_cast<std::size_t>(iy) * nx + ix] = u;
        }
      }
    }
    if (!ok) {
      throw std::runtime_error("determinant underflow persisted across redraws");
    }
    for (std::size_t i = 0; i < cells; ++i) acc_u[i].add(u_grid[i]);
    for (int iy = 1; iy < ny - 1; ++iy) {
      for (int ix = 1; ix < nx - 1; ++ix) {
        const std::size_t i = static_cast<std::size_t>(iy) * nx + ix;
        const double lap = (u_grid[i - 1] + u_grid[i + 1] - 2.0 * u_grid[i]) * ihx2 +
                           (u_grid[i - nx] + u_grid[i + nx] - 2.0 * u_grid[i]) * ihy2;
        const double h = lap / (4.0 * kPi);
        acc_h[i].add(h);
        acc_h2[i].add(h * h);
      }
    }
  }

  out.potential = GridField::zeros(lattice);
  out.density = GridField::zeros(lattice);
  out.std_error = GridField::zeros(lattice);
  std::fill(out.density.mask.begin(), out.density.mask.end(), std::uint8_t{0});
  std::fill(out.std_error.mask.begin(), out.std_error.mask.end(), std::uint8_t{0});
  const double inv_t = 1.0 / trials;
  for (std::size_t i = 0; i < cells; ++i) {
    out.potential.values[i] = acc_u[i].total() * inv_t;
  }
  for (int iy = 1; iy < ny - 1; ++iy) {
    for (int ix = 1; ix < nx - 1; ++ix) {
      const std::size_t i = static_cast<std::size_t>(iy) * nx + ix;
      const double mean = acc_h[i].total() * inv_t;
      const double sum_sq = acc_h2[i].total();
      const double var = std::max(0.0, (sum_sq - trials * mean * mean) / (trials - 1));
      out.density.values[i] = mean;
      out.density.mask[i] = 1;
      out.std_error.values[i] = std::sqrt(var * inv_t);
      out.std_error.mask[i] = 1;
    }
  }
  return out;
}

GridField analytic_density(const ComplexMeasure& measure, int n, double sigma,
                           const Lattice& lattice) {
  lattice.validate();
  if (sigma < 0.0) {
    throw std::invalid_argument("noise level must be nonnegative");
  }
  const MomentSequence clean = gen_moments(measure, n);
  const ExpectedFKernel kernel(clean, sigma);
  const int m = n / 2;

  GridField potential = GridField::zeros(lattice);
  Eigen::MatrixXcd f(m, m), scratch(m, m), herm(m, m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  for (int iy = 0; iy < lattice.ny; ++iy) {
    for (int ix = 0; ix < lattice.nx; ++ix) {
      const Complex z = lattice.point(ix, iy);
      kernel.evaluate(z, f, scratch);
      herm = 0.5 * (f + f.adjoint().eval());
      solver.compute(herm, Eigen::EigenvaluesOnly);
      const auto& mu = solver.eigenvalues();
      const double mu_max = mu(m - 1);
      const std::size_t i = static_cast<std::size_t>(iy) * lattice.nx + ix;
      if (!(mu_max > 0.0)) {
        potential.mask[i] = 0;
        continue;
      }
      const double clip = kEigenvalueClip * mu_max;
      double sum = 0.0;
      for (Eigen::Index k = 0; k < m; ++k) {
        if (mu(k) > clip) sum += std::log(mu(k));
      }
      potential.values[i] = sum;
    }
  }
  GridField density = laplacian(potential);
  const double scale = 1.0 / (2.0 * kPi * n);
  for (std::size_t i = 0; i < density.values.size(); ++i) {
    if (density.mask[i]) density.values[i] *= scale;
  }
  return density;
}

IdentifiabilityReport identifiability_report(const GridField& field,
                                             const ComplexMeasure& measure,
                                             const std::vector<double>& radii) {
  measure.validate();
  if (radii.size() != measure.nodes.size()) {
    throw std::invalid_argument("one radius per node required");
  }
  const Lattice& lattice = field.lattice;
  const int nx = lattice.nx;
  const int ny = lattice.ny;
  IdentifiabilityReport report;
  report.unimodal.resize(radii.size(), false);
  report.maxima_count.resize(radii.size(), 0);

  // Relative floor that keeps rounding jitter in flat regions from counting
  // as maxima of the restriction.
  constexpr double kRelativeFloor = 1e-6;

  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double r = radii[k];
    const Complex node = measure.nodes[k];
    if (!(r > 0.0)) {
      throw std::invalid_argument("disk radii must be positive");
    }
    if (node.real() - r < lattice.x_min + lattice.hx() ||
        node.real() + r > lattice.x_max - lattice.hx() ||
        node.imag() - r < lattice.y_min + lattice.hy() ||
        node.imag() + r > lattice.y_max - lattice.hy()) {
      throw std::invalid_argument("identifiability disk leaves the lattice interior");
    }
    const auto in_disk = [&](int ix, int iy) {
      return std::abs(lattice.point(ix, iy) - node) <= r;
    };
    double vmax = -std::numeric_limits<double>::infinity();
    for (int iy = 1; iy < ny - 1; ++iy) {
      for (int ix = 1; ix < nx - 1; ++ix) {
        if (field.valid(ix, iy) && in_disk(ix, iy)) {
          vmax = std::max(vmax, field.at(ix, iy));
        }
      }
    }
    if (!(vmax > 0.0)) {
      report.maxima_count[k] = 0;
      report.unimodal[k] = false;
      continue;
    }
    const double floor = vmax * kRelativeFloor;
    int count = 0;
    for (int iy = 1; iy < ny - 1; ++iy) {
      for (int ix = 1; ix < nx - 1; ++ix) {
        if (!field.valid(ix, iy) || !in_disk(ix, iy)) continue;
        const double v = field.at(ix, iy);
        if (v < floor) continue;
        bool is_max = true;
        for (int dy = -1; dy <= 1 && is_max; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int jx = ix + dx;
            const int jy = iy + dy;
            if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
            if (!field.valid(jx, jy) || !in_disk(jx, jy)) continue;
            if (field.at(jx, jy) >= v) {
              is_max = false;
              break;
            }
          }
        }
        if (is_max) ++count;
      }
    }
    report.maxima_count[k] = count;
    report.unimodal[k] = count == 1;
  }

  report.disks_disjoint = true;
  for (std::size_t i = 0; i < radii.size() && report.disks_disjoint; ++i) {
    for (std::size_t j = i + 1; j < radii.size(); ++j) {
      if (std::abs(measure.nodes[i] - measure.nodes[j]) <= std::max(radii[i], radii[j])) {
        report.disks_disjoint = false;
        break;
      }
    }
  }
  report.identifiable = report.disks_disjoint &&
                        std::all_of(report.unimodal.begin(), report.unimodal.end(),
                                    [](bool b) { return b; });
  return report;
}

}  // namespace ptrans
