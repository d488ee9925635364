#include "rankone/operators.hpp"

#include "rankone/errors.hpp"
#include "rankone/linalg.hpp"
#include "rankone/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rankone {
namespace {

constexpr double kKindTolerance = 1e-12;

bool is_even(Site j) { return j % 2 == 0; }

void check_labels(const std::vector<Site>& labels, Eigen::Index dimension) {
  if (static_cast<Eigen::Index>(labels.size()) != dimension) {
    throw DomainError("site_labels has " + std::to_string(labels.size()) + " entries for a " +
                      std::to_string(dimension) + "-dimensional operator");
  }
  for (std::size_t k = 1; k < labels.size(); ++k) {
    if (labels[k] <= labels[k - 1]) throw DomainError("site_labels must be strictly increasing");
  }
}

}  // namespace

const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::selfadjoint:
      return "selfadjoint";
    case OperatorKind::unitary:
      return "unitary";
    case OperatorKind::general:
      return "general";
  }
  return "general";
}

DenseOperator::DenseOperator(Unchecked, Matrix entries, OperatorKind kind, std::vector<Site> site_labels)
    : entries_(std::move(entries)), kind_(kind), labels_(std::move(site_labels)) {}

DenseOperator::DenseOperator(Matrix entries, OperatorKind kind, std::vector<Site> site_labels)
    : DenseOperator(Unchecked{}, std::move(entries), kind, std::move(site_labels)) {
  if (entries_.rows() != entries_.cols()) throw DomainError("operator matrix must be square");
  check_labels(labels_, entries_.rows());
  if (kind_ == OperatorKind::selfadjoint) {
    const double residual = hermiticity_residual(entries_);
    if (residual > kKindTolerance * (1.0 + max_abs(entries_))) {
      throw DomainError("matrix tagged selfadjoint has hermiticity residual " + std::to_string(residual));
    }
  } else if (kind_ == OperatorKind::unitary) {
    const double residual = unitarity_residual(entries_);
    if (residual > kKindTolerance) {
      throw DomainError("matrix tagged unitary has unitarity residual " + std::to_string(residual));
    }
  }
}

DenseOperator::DenseOperator(Matrix entries, OperatorKind kind)
    : DenseOperator(entries, kind, site_range(0, entries.rows())) {}

DenseOperator DenseOperator::trusted(Matrix entries, OperatorKind kind, std::vector<Site> site_labels) {
  check_labels(site_labels, entries.rows());
  return DenseOperator(Unchecked{}, std::move(entries), kind, std::move(site_labels));
}

DenseOperator DenseOperator::trusted(Matrix entries, OperatorKind kind) {
  auto labels = site_range(0, entries.rows());
  return trusted(std::move(entries), kind, std::move(labels));
}

std::optional<Eigen::Index> DenseOperator::index_of(Site site) const {
  const auto it = std::lower_bound(labels_.begin(), labels_.end(), site);
  if (it == labels_.end() || *it != site) return std::nullopt;
  return static_cast<Eigen::Index>(it - labels_.begin());
}

std::vector<Site> site_range(Site first, Eigen::Index count) {
  std::vector<Site> labels(static_cast<std::size_t>(count));
  std::iota(labels.begin(), labels.end(), first);
  return labels;
}

DenseOperator direct_sum(const DenseOperator& a, const DenseOperator& b) {
  const Eigen::Index n1 = a.dimension();
  const Eigen::Index n2 = b.dimension();
  Matrix m = Matrix::Zero(n1 + n2, n1 + n2);
  m.topLeftCorner(n1, n1) = a.entries();
  m.bottomRightCorner(n2, n2) = b.entries();

  std::vector<Site> labels;
  if (n1 == 0 || n2 == 0 || b.site_labels().front() > a.site_labels().back()) {
    labels = a.site_labels();
    labels.insert(labels.end(), b.site_labels().begin(), b.site_labels().end());
  } else {
    labels = site_range(0, n1 + n2);
  }
  const OperatorKind kind = a.kind() == b.kind() ? a.kind() : OperatorKind::general;
  return DenseOperator::trusted(std::move(m), kind, std::move(labels));
}

DenseOperator principal_block(const DenseOperator& op, Eigen::Index first, Eigen::Index count) {
  if (first < 0 || count < 0 || first + count > op.dimension()) {
    throw DomainError("principal block out of range");
  }
  const auto begin = op.site_labels().begin() + first;
  return DenseOperator::trusted(op.entries().block(first, first, count, count), op.kind(),
                                std::vector<Site>(begin, begin + count));
}

// ---------------------------------------------------------------------------

double JacobiWindow::norm_estimate() const {
  double sup = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const double hop = k < a.size() ? std::abs(a[k]) : 0.0;
    sup = std::max(sup, hop + std::abs(b[k]));
  }
  return sup;
}

void validate(const JacobiWindow& w) {
  if (w.n_max < w.n_min) throw DomainError("jacobi window needs n_min <= n_max");
  const auto expected = static_cast<std::size_t>(w.dimension());
  if (w.b.size() != expected) {
    throw DomainError("jacobi window has " + std::to_string(w.b.size()) + " diagonal values, expected " +
                      std::to_string(expected));
  }
  if (w.a.size() != expected - 1) {
    throw DomainError("jacobi window has " + std::to_string(w.a.size()) + " off-diagonal values, expected " +
                      std::to_string(expected - 1));
  }
  for (std::size_t k = 0; k < w.a.size(); ++k) {
    if (!(w.a[k] > 0.0) || !std::isfinite(w.a[k])) {
      throw DomainError("off-diagonal a_" + std::to_string(w.n_min + static_cast<Site>(k)) +
                        " must be positive, got " + std::to_string(w.a[k]));
    }
  }
  for (std::size_t k = 0; k < w.b.size(); ++k) {
    if (!std::isfinite(w.b[k])) {
      throw DomainError("diagonal b_" + std::to_string(w.n_min + static_cast<Site>(k)) + " is not finite");
    }
  }
}

JacobiWindow free_jacobi(Site n_min, Site n_max) {
  if (n_max < n_min) throw DomainError("jacobi window needs n_min <= n_max");
  const auto n = static_cast<std::size_t>(n_max - n_min + 1);
  return JacobiWindow{n_min, n_max, std::vector<double>(n, 0.0), std::vector<double>(n - 1, 1.0)};
}

JacobiWindow anderson_jacobi(std::uint64_t seed, Site n_min, Site n_max, double coupling) {
  if (!(n_min <= -1 && n_max >= 0)) {
    throw DomainError("anderson window must straddle the origin (n_min <= -1 < 0 <= n_max)");
  }
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) throw DomainError("coupling must be non-negative");
  JacobiWindow w = free_jacobi(n_min, n_max);
  Rng rng(seed);
  for (double& b : w.b) b = rng.uniform(-coupling, coupling);
  return w;
}

DenseOperator materialize_jacobi(const JacobiWindow& w) {
  validate(w);
  const Eigen::Index n = w.dimension();
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) m(k, k) = w.b[static_cast<std::size_t>(k)];
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    m(k, k + 1) = w.a[static_cast<std::size_t>(k)];
    m(k + 1, k) = w.a[static_cast<std::size_t>(k)];
  }
  return DenseOperator::trusted(std::move(m), OperatorKind::selfadjoint, site_range(w.n_min, n));
}

// ---------------------------------------------------------------------------

void validate(const CMVWindow& w) {
  if (!is_even(w.j_min) || !is_even(w.j_max)) throw DomainError("cmv window cut indices must be even");
  if (w.j_max <= w.j_min) throw DomainError("cmv window needs j_min < j_max");
  if (static_cast<Eigen::Index>(w.alpha.size()) != w.dimension()) {
    throw DomainError("cmv window has " + std::to_string(w.alpha.size()) + " coefficients, expected " +
                      std::to_string(w.dimension()));
  }
  for (std::size_t k = 0; k < w.alpha.size(); ++k) {
    if (!(std::abs(w.alpha[k]) < 1.0)) {
      throw DomainError("verblunsky coefficient alpha_" + std::to_string(w.j_min + static_cast<Site>(k)) +
                        " must lie in the open unit disc");
    }
  }
  for (const Complex c : {w.boundary_left, w.boundary_right}) {
    if (std::abs(std::abs(c) - 1.0) > kKindTolerance) throw DomainError("cmv boundary closures must be unimodular");
  }
}

Eigen::Matrix2cd theta_block(Complex alpha) {
  const double modulus = std::abs(alpha);
  if (!(modulus <= 1.0)) throw DomainError("theta block needs |alpha| <= 1");
  const double rho = std::sqrt(std::max(0.0, 1.0 - modulus * modulus));
  Eigen::Matrix2cd theta;
  theta << std::conj(alpha), rho, rho, -alpha;
  return theta;
}

CMVFactors cmv_factors(const CMVWindow& w) {
  validate(w);
  const Eigen::Index n = w.dimension();
  CMVFactors f{Matrix::Zero(n, n), Matrix::Zero(n, n)};

  // M: Theta(alpha_{2k}) on sites (2k, 2k+1).
  for (Eigen::Index local = 0; local + 1 < n; local += 2) {
    f.m.block<2, 2>(local, local) = theta_block(w.alpha[static_cast<std::size_t>(local)]);
  }
  // L: Theta(alpha_{2k+1}) on sites (2k+1, 2k+2), closures at both edges.
  f.l(0, 0) = w.boundary_left;
  f.l(n - 1, n - 1) = w.boundary_right;
  for (Eigen::Index local = 1; local + 1 <= n - 2; local += 2) {
    f.l.block<2, 2>(local, local) = theta_block(w.alpha[static_cast<std::size_t>(local)]);
  }
  return f;
}

DenseOperator materialize_cmv(const CMVWindow& w) {
  const CMVFactors f = cmv_factors(w);
  return DenseOperator::trusted(f.l * f.m, OperatorKind::unitary, site_range(w.j_min, w.dimension()));
}

CMVWindow random_verblunsky(std::uint64_t seed, Site j_min, Site j_max, double radius) {
  if (!(radius >= 0.0 && radius < 1.0)) throw DomainError("verblunsky radius must lie in [0, 1)");
  if (!is_even(j_min) || !is_even(j_max) || j_max <= j_min) {
    throw DomainError("cmv window needs even cut indices with j_min < j_max");
  }
  CMVWindow w;
  w.j_min = j_min;
  w.j_max = j_max;
  w.alpha.resize(static_cast<std::size_t>(j_max - j_min));
  Rng rng(seed);
  for (Complex& a : w.alpha) a = rng.in_disc(radius);
  return w;
}

// ---------------------------------------------------------------------------

DenseOperator apply_rank_one(const DenseOperator& base, const RankOneCoupling& coupling) {
  if (base.kind() != OperatorKind::selfadjoint) throw DomainError("apply_rank_one needs a selfadjoint base");
  if (coupling.phi.size() != base.dimension()) {
    throw DomainError("coupling vector has dimension " + std::to_string(coupling.phi.size()) + ", operator has " +
                      std::to_string(base.dimension()));
  }
  if (coupling.lambda.imag() != 0.0) throw DomainError("selfadjoint coupling lambda must be real");
  if (coupling.lambda.real() == 0.0) throw DomainError("coupling lambda must be nonzero");
  if (coupling.phi.isZero(0.0)) throw DomainError("coupling vector must be nonzero");
  Matrix m = base.entries() + coupling.lambda.real() * outer(coupling.phi, coupling.phi);
  return DenseOperator::trusted(std::move(m), OperatorKind::selfadjoint, base.site_labels());
}

}  // namespace rankone
