#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptrans/model.hpp"

namespace ptrans {

/// Reciprocal-condition guard threshold for the pencil and Vandermonde solves.
inline constexpr double kRcondFloor = 1e-14;

/// The Hankel pencil matrix u0 is numerically singular (or the eigensolver
/// failed on it).
class SingularPencil : public std::runtime_error {
 public:
  explicit SingularPencil(const std::string& what) : std::runtime_error(what) {}
};

/// The residue system is numerically unsolvable: near-coincident poles or a
/// Vandermonde matrix with reciprocal condition below the guard.
class IllConditionedVandermonde : public std::runtime_error {
 public:
  explicit IllConditionedVandermonde(const std::string& what) : std::runtime_error(what) {}
};

/// Square Hankel pair of order n/2 built from a_0..a_{n-1}:
/// u0(i,j) = a_{i+j}, u1(i,j) = a_{i+j+1}.
struct HankelPair {
  Eigen::MatrixXcd u0;
  Eigen::MatrixXcd u1;
};

/// Poles with matched residues, sorted by descending |residue|.
/// condition_flag keeps the reciprocal condition estimate of the residue solve.
struct PencilSolution {
  std::vector<Complex> poles;
  std::vector<Complex> residues;
  double condition_flag = 0.0;
};

HankelPair build_hankel(const MomentSequence& moments);

/// Generalized eigenvalues of (u1, u0), i.e. the roots of det(u1 - z u0).
/// Throws SingularPencil when u0 is numerically singular.
std::vector<Complex> solve_pencil(const HankelPair& pencil);

/// Solves the square Vandermonde system sum_j c_j poles_j^k = a_k,
/// k = 0..m-1 with m = poles.size(), applying one step of iterative
/// refinement. Throws
/// IllConditionedVandermonde on near-coincident poles or a numerically singular
/// system. rcond_out, when given, receives the reciprocal condition estimate.
std::vector<Complex> residues_from_poles(const MomentSequence& moments,
                                         const std::vector<Complex>& poles,
                                         double* rcond_out = nullptr);

/// Full interpolation step: n/2 poles and residues from one moment vector.
/// The raw eigensolver output is polished with up to two guarded Newton steps
/// on the full moment system, each accepted only if the worst moment residual
/// shrinks.
PencilSolution interpolate(const MomentSequence& moments);

}  // namespace ptrans
