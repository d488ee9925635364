#pragma once

#include "rankone/operators.hpp"

#include <optional>
#include <vector>

namespace rankone {

/// Where eigenvalues and atoms live.
enum class SupportKind { real_line, unit_circle };

const char* to_string(SupportKind kind);

// Relative defaults; "scale" is the spectral diameter unless stated otherwise.
inline constexpr double kDefaultRelativeMergeTol = 1e-8;
inline constexpr double kDefaultRelativeWeightFloor = 1e-12;
inline constexpr double kDefaultPoleGuard = 1e-12;
inline constexpr double kDefaultKrylovTol = 1e-10;
inline constexpr double kDefaultEigenTol = 1e-10;

/// Full diagonalization M = V diag(E) V^*.
///
/// Selfadjoint input gives real eigenvalues in ascending order; unitary input
/// gives unimodular eigenvalues ordered by argument in [0, 2pi).
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
  double residual = 0.0;
  SupportKind support = SupportKind::real_line;

  Eigen::Index size() const { return values.size(); }
};

/// Throws ConvergenceError when the achieved residual max_k |M v_k - E_k v_k|
/// exceeds `tol` (default 1e-10 * max(1, ||M||_inf)).
///
/// The unitary path uses the complex Schur form: for a normal matrix the
/// triangular factor is diagonal up to rounding, so the Schur vectors are an
/// orthonormal eigenbasis even inside degenerate clusters.
EigenDecomposition eigendecompose(const DenseOperator& m, std::optional<double> tol = std::nullopt);

/// Eigendecomposition of a direct sum assembled from its summands.
EigenDecomposition direct_sum(const EigenDecomposition& a, const EigenDecomposition& b);

/// Largest pairwise distance between points (max - min on the line).
double spectral_diameter(const Vector& points, SupportKind kind);

/// Spectral diameter floored by the largest modulus, so that scalar multiples
/// of the identity still get a nonzero tolerance scale.
double tolerance_scale(const Vector& points, SupportKind kind);

Vector concat(const Vector& a, const Vector& b);

/// Groups of indices into `points` (sorted as produced by eigendecompose)
/// whose consecutive distance is at most `tol`. On the circle the last and
/// first groups merge across the 2pi wrap.
std::vector<std::vector<Eigen::Index>> cluster_points(const Vector& points, SupportKind kind, double tol);

struct Atom {
  Complex location;
  double weight = 0.0;
};

struct AtomicSpectralMeasure {
  SupportKind kind = SupportKind::real_line;
  std::vector<Atom> atoms;
  double discarded_mass = 0.0;

  double total_weight() const;
};

struct MeasureOptions {
  /// Default kDefaultRelativeMergeTol * tolerance_scale.
  std::optional<double> merge_tol;
  /// Atoms with weight <= floor are dropped into discarded_mass.
  /// Default kDefaultRelativeWeightFloor * ||phi||^2; zero drops only exact zeros.
  std::optional<double> weight_floor;
};

/// Atoms at eigenvalue clusters with weight sum_k |<v_k, phi>|^2.
AtomicSpectralMeasure spectral_measure(const EigenDecomposition& d, const Vector& phi, MeasureOptions options = {});

/// Spectral projection of phi onto eigenvectors with |E_k - location| <= radius.
Vector spectral_projection(const EigenDecomposition& d, const Vector& phi, Complex location, double radius);

/// Orthonormal basis of span{phi, M phi, M^2 phi, ...} by Arnoldi with
/// reorthogonalization, started from phi / ||phi||. Iteration stops once the
/// orthogonalized new direction has norm <= tol * max(1, ||M||_inf).
///
/// For unitary M the positive powers suffice: on a finite carrier M^{-1} = M^*
/// is a polynomial in M (Cayley-Hamilton), so the cyclic subspace generated
/// by M and M^* coincides with the plain Krylov space.
Matrix krylov_basis(const DenseOperator& m, const Vector& phi, double tol = kDefaultKrylovTol);

/// Columns of krylov_basis. For selfadjoint and unitary m the count is capped
/// by the number of distinct eigenvalues (default multiplicity_profile): once
/// the true cyclic subspace is exhausted, Arnoldi keeps amplifying rounding
/// noise along the missing eigen-directions of a repeated eigenvalue.
int krylov_dimension(const DenseOperator& m, const Vector& phi, double tol = kDefaultKrylovTol);

/// Cyclic subspace of phi under a normal operator in spectral form:
/// orthonormal basis of span{E(c) phi} over eigenvalue clusters c at
/// merge_tol, dropping components with ||E(c) phi|| <= rank_tol ||phi||.
/// Stable where Arnoldi is not, i.e. for repeated eigenvalues.
Matrix cyclic_subspace(const EigenDecomposition& d, const Vector& phi, double merge_tol,
                       double rank_tol = kDefaultKrylovTol);

/// A location charged by both measures, with both weights.
struct CommonAtom {
  Complex location;
  double weight1 = 0.0;
  double weight2 = 0.0;
};

/// Atomic form of the X / Y / Z decomposition of supp(mu1 + mu2):
/// X carries weight in both measures, Y only in mu2, Z only in mu1.
struct SupportPartition {
  std::vector<CommonAtom> common;   // X
  std::vector<Atom> second_only;    // Y
  std::vector<Atom> first_only;     // Z
};

/// Throws AmbiguousMatchError if an atom has two partners within match_tol.
SupportPartition support_partition(const AtomicSpectralMeasure& mu1, const AtomicSpectralMeasure& mu2,
                                   double match_tol);

/// F(z) = sum_k w_k / (x_k - z) for a real-line measure.
Complex borel_transform(const AtomicSpectralMeasure& mu, Complex z, double pole_guard = kDefaultPoleGuard);

/// F(z) = sum_k w_k (x_k + z) / (x_k - z) for a unit-circle measure, |z| < 1.
Complex caratheodory(const AtomicSpectralMeasure& mu, Complex z);

/// g(z) = (F(z) - 1) / (z (F(z) + 1)), the inverse of F = (1 + z g)/(1 - z g).
/// Needs 0 < |z| < 1 and a probability measure.
Complex schur_function(const AtomicSpectralMeasure& mu, Complex z);

struct EigenCluster {
  Complex location;
  std::vector<Eigen::Index> members;

  int multiplicity() const { return static_cast<int>(members.size()); }
};

struct MultiplicityProfile {
  std::vector<EigenCluster> clusters;
  /// Smallest distance between distinct clusters; +inf with fewer than two.
  double min_gap = 0.0;

  bool simple() const;
  int max_multiplicity() const;
};

/// Default gap_tol: kDefaultRelativeMergeTol * tolerance_scale.
MultiplicityProfile multiplicity_profile(const EigenDecomposition& d, std::optional<double> gap_tol = std::nullopt);

}  // namespace rankone
