#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace rankone {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Site = long;

enum class OperatorKind { selfadjoint, unitary, general };

const char* to_string(OperatorKind kind);

/// Finite square matrix tagged with its operator kind and site labels.
///
/// The checked constructor enforces the kind invariant (hermiticity within
/// 1e-12 * (1 + max|M_ij|), or max|M*M - I| <= 1e-12) and strictly
/// increasing labels. `trusted` skips the O(n^3) kind check for results that
/// hold the invariant by construction.
class DenseOperator {
 public:
  DenseOperator(Matrix entries, OperatorKind kind, std::vector<Site> site_labels);
  DenseOperator(Matrix entries, OperatorKind kind);

  static DenseOperator trusted(Matrix entries, OperatorKind kind, std::vector<Site> site_labels);
  static DenseOperator trusted(Matrix entries, OperatorKind kind);

  const Matrix& entries() const { return entries_; }
  OperatorKind kind() const { return kind_; }
  const std::vector<Site>& site_labels() const { return labels_; }
  Eigen::Index dimension() const { return entries_.rows(); }

  /// Row/column of a site label, if present.
  std::optional<Eigen::Index> index_of(Site site) const;

 private:
  struct Unchecked {};
  DenseOperator(Unchecked, Matrix entries, OperatorKind kind, std::vector<Site> site_labels);

  Matrix entries_;
  OperatorKind kind_;
  std::vector<Site> labels_;
};

std::vector<Site> site_range(Site first, Eigen::Index count);

/// Direct sum A (+) B. Labels are kept when they remain strictly increasing,
/// otherwise both blocks are relabelled 0..n-1. The kind is shared when both
/// summands agree, otherwise general.
DenseOperator direct_sum(const DenseOperator& a, const DenseOperator& b);

/// Principal submatrix on rows/columns [first, first + count).
DenseOperator principal_block(const DenseOperator& op, Eigen::Index first, Eigen::Index count);

// ---------------------------------------------------------------------------
// Two-sided Jacobi operators

/// Finite window of a Jacobi operator on sites n_min..n_max.
/// b[k] is b_{n_min+k}; a[k] is a_{n_min+k}, the hopping between that site
/// and the next one.
struct JacobiWindow {
  Site n_min = 0;
  Site n_max = 0;
  std::vector<double> b;
  std::vector<double> a;

  Eigen::Index dimension() const { return n_max - n_min + 1; }
  double b_at(Site n) const { return b.at(static_cast<std::size_t>(n - n_min)); }
  double a_at(Site n) const { return a.at(static_cast<std::size_t>(n - n_min)); }

  /// sup_n (|a_n| + |b_n|).
  double norm_estimate() const;
};

/// Throws DomainError on inconsistent lengths or a non-positive a_n.
void validate(const JacobiWindow& w);

JacobiWindow free_jacobi(Site n_min, Site n_max);

/// a = 1, b_n uniform on [-coupling, coupling], deterministic in the seed.
/// Requires n_min <= -1 < 0 <= n_max.
JacobiWindow anderson_jacobi(std::uint64_t seed, Site n_min, Site n_max, double coupling);

/// Tridiagonal matrix with (n,n) = b_n and (n,n+1) = (n+1,n) = a_n.
DenseOperator materialize_jacobi(const JacobiWindow& w);

// ---------------------------------------------------------------------------
// Extended CMV operators

/// Finite window of Verblunsky coefficients alpha_j, j_min <= j < j_max.
///
/// The matrix acts on sites j_min..j_max-1. Blocks Theta(alpha_{j_min-1})
/// and Theta(alpha_{j_max-1}) would straddle the window edges, so the edge
/// sites carry the unimodular closures boundary_left and boundary_right
/// instead. alpha_{j_max-1} is stored for completeness but is not used.
struct CMVWindow {
  Site j_min = 0;
  Site j_max = 0;
  std::vector<Complex> alpha;
  Complex boundary_left{1.0, 0.0};
  Complex boundary_right{1.0, 0.0};

  Eigen::Index dimension() const { return j_max - j_min; }
  Complex alpha_at(Site j) const { return alpha.at(static_cast<std::size_t>(j - j_min)); }
};

void validate(const CMVWindow& w);

/// Theta(alpha) = [[conj(alpha), rho], [rho, -alpha]], rho = sqrt(1 - |alpha|^2).
Eigen::Matrix2cd theta_block(Complex alpha);

/// The two factors of E = L M.
struct CMVFactors {
  Matrix l;
  Matrix m;
};

CMVFactors cmv_factors(const CMVWindow& w);

/// E = L M, unitary, site labels j_min..j_max-1.
DenseOperator materialize_cmv(const CMVWindow& w);

/// alpha_j uniform on the disc of the given radius, closures 1.
CMVWindow random_verblunsky(std::uint64_t seed, Site j_min, Site j_max, double radius);

// ---------------------------------------------------------------------------
// Rank-one couplings

struct RankOneCoupling {
  Vector phi;
  Complex lambda;
};

/// base + lambda * phi phi^*. base selfadjoint, lambda real and nonzero.
DenseOperator apply_rank_one(const DenseOperator& base, const RankOneCoupling& coupling);

}  // namespace rankone
