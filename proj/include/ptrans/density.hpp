#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "ptrans/model.hpp"

namespace ptrans {

/// Relative eigenvalue cutoff: eigenvalues at or below this fraction of the
/// largest one are treated as numerically zero in log-determinant sums.
inline constexpr double kEigenvalueClip = 1e-13;

/// Regular rectangular lattice, node (ix, iy) at
/// (x_min + ix hx, y_min + iy hy), 0 <= ix < nx, 0 <= iy < ny.
struct Lattice {
  double x_min = -1.5;
  double x_max = 1.5;
  double y_min = -1.5;
  double y_max = 1.5;
  int nx = 200;
  int ny = 200;

  double hx() const { return (x_max - x_min) / (nx - 1); }
  double hy() const { return (y_max - y_min) / (ny - 1); }
  double cell_area() const { return hx() * hy(); }
  Complex point(int ix, int iy) const {
    return {x_min + ix * hx(), y_min + iy * hy()};
  }
  bool contains(Complex z) const {
    return z.real() >= x_min && z.real() <= x_max && z.imag() >= y_min && z.imag() <= y_max;
  }
  /// Index of the lattice point nearest to z, clamped to the lattice.
  std::pair<int, int> nearest_index(Complex z) const;

  /// Square lattice over [-half, half]^2 with n points per side.
  static Lattice square(double half = 1.5, int n = 200);

  /// Throws std::invalid_argument unless nx, ny >= 3 and the extents are
  /// properly ordered.
  void validate() const;
};

/// Real scalar field sampled on a lattice. values is row-major with rows of
/// constant y (index iy * nx + ix); mask entries are 1 where the value is
/// meaningful and 0 where it is excluded (boundary ring after a laplacian,
/// degenerate points).
struct GridField {
  Lattice lattice;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;

  double& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * lattice.nx + ix]; }
  double at(int ix, int iy) const {
    return values[static_cast<std::size_t>(iy) * lattice.nx + ix];
  }
  bool valid(int ix, int iy) const {
    return mask[static_cast<std::size_t>(iy) * lattice.nx + ix] != 0;
  }

  static GridField zeros(const Lattice& lattice);
};

/// Complex-valued counterpart of GridField (accumulated potentials).
struct ComplexGridField {
  Lattice lattice;
  std::vector<Complex> values;
  std::vector<std::uint8_t> mask;

  Complex& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * lattice.nx + ix]; }
  Complex at(int ix, int iy) const {
    return values[static_cast<std::size_t>(iy) * lattice.nx + ix];
  }
  bool valid(int ix, int iy) const {
    return mask[static_cast<std::size_t>(iy) * lattice.nx + ix] != 0;
  }

  static ComplexGridField zeros(const Lattice& lattice);
};

/// Five-point discrete Laplacian. Output cells are valid only where the centre
/// and all four stencil neighbours are valid interior points; everything else
/// is masked out with value 0.
GridField laplacian(const GridField& field);
ComplexGridField laplacian(const ComplexGridField& field);

/// Field value at the lattice point nearest to z.
double value_near(const GridField& field, Complex z);

/// Sum of values times cell area over valid cells.
double lattice_mass(const GridField& field);

/// Complex sum of values times cell area over valid cells within radius of
/// center.
Complex disk_mass(const ComplexGridField& field, Complex center, double radius);

/// Positive-part mass fraction: sum of positive valid values within radius of
/// any node, divided by the sum of all positive valid values. Returns 0 when
/// the field has no positive mass.
double mass_fraction_near(const GridField& field, const std::vector<Complex>& nodes,
                          double radius);

/// Closed-form n=2 condensed density for moments (s0, s1) at noise level
/// sigma > 0. Pure noise (s0 = s1 = 0) reduces to 1 / (pi (1+|z|^2)^2).
double h2_closed_form(Complex s0, Complex s1, double sigma, Complex z);

/// z-dependent part of the pure-noise log-potential,
/// w(z) = (2/n) log sum_{j=0}^{n/2} |z|^{2j}.
double pure_noise_potential(int n, Complex z);

/// Exact Laplacian (1/4pi) (Delta w) of the pure-noise potential; the
/// sigma-independent pure-noise limit of the analytic density.
double pure_noise_density(int n, Complex z);

/// Expectation of (u1(a) - z u0(a)) (u1(a) - z u0(a))^conj over the noise:
/// B_s B_s^H plus (n sigma^2 / 2) A(z), A tridiagonal with diagonal 1+|z|^2,
/// superdiagonal -conj(z), subdiagonal -z. Hermitian by construction.
Eigen::MatrixXcd expected_F(const ComplexMeasure& measure, int n, double sigma, Complex z);

/// Same, but from precomputed clean moments.
Eigen::MatrixXcd expected_F_from_moments(const MomentSequence& clean, double sigma, Complex z);

/// Sum of log mu_j over the clipped eigenvalues of the hermitized expected_F
/// at a single point; the potential whose scaled Laplacian is the analytic
/// density. NaN where no eigenvalue is positive.
double analytic_log_potential(const MomentSequence& clean, double sigma, Complex z);

/// Monte Carlo condensed density estimate with pointwise standard errors.
struct McDensity {
  GridField density;    ///< (1/4pi) Laplacian of the trial-averaged potential.
  GridField std_error;  ///< Pointwise MC standard error of density.
  GridField potential;  ///< Trial-averaged u_n.
  long long resampled = 0;  ///< Trials rejected for determinant underflow.
  int trials = 0;
};

/// Averages (2/n) log|det(u1(a) - z u0(a))|^2 over `trials` fresh noise draws
/// at level sigma on top of the measure's clean moments, then applies the
/// discrete Laplacian. spec supplies the (seed, stream) key; its sigma field is
/// ignored. Trials whose determinant underflows anywhere are redrawn.
McDensity mc_condensed_density(const ComplexMeasure& measure, int n, double sigma,
                               const Lattice& lattice, int trials, const NoiseSpec& spec);

/// Deterministic approximation: (1 / 2 pi n) times the discrete Laplacian of
/// sum log mu_j over eigenvalues mu_j of the hermitized expected_F exceeding
/// the relative cutoff. Points with no positive eigenvalue are masked. The
/// output is not clamped and can be negative away from the nodes.
GridField analytic_density(const ComplexMeasure& measure, int n, double sigma,
                           const Lattice& lattice);

/// Unimodality / separation diagnostics for per-node disks.
struct IdentifiabilityReport {
  std::vector<bool> unimodal;     ///< Exactly one local max inside each disk.
  std::vector<int> maxima_count;  ///< Local maxima found per disk.
  bool disks_disjoint = false;
  bool identifiable = false;  ///< All disks unimodal and pairwise separated.
};

/// Checks, for each node's disk of the given radius, that the restriction of
/// the field has exactly one 8-neighbourhood local maximum, and that the
/// disks are separated in the sense that no disk reaches another node (every
/// pairwise node distance exceeds the larger of the two radii), so each disk
/// isolates its own peak. Throws std::invalid_argument when a disk leaves the
/// valid interior of the lattice.
IdentifiabilityReport identifiability_report(const GridField& field,
                                             const ComplexMeasure& measure,
                                             const std::vector<double>& radii);

}  // namespace ptrans
