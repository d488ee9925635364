#include "rankone/spectral.hpp"

#include "rankone/errors.hpp"
#include "rankone/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace rankone {
namespace {

double order_key(Complex z, SupportKind kind) {
  if (kind == SupportKind::real_line) return z.real();
  const double theta = std::arg(z);
  return theta < 0.0 ? theta + 2.0 * std::numbers::pi : theta;
}

// Sorts eigenpairs by the support's order key; stable for determinism.
void sort_pairs(EigenDecomposition& d) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return order_key(d.values(i), d.support) < order_key(d.values(j), d.support);
  });
  Vector values(d.size());
  Matrix vectors(d.vectors.rows(), d.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    values(static_cast<Eigen::Index>(k)) = d.values(order[k]);
    vectors.col(static_cast<Eigen::Index>(k)) = d.vectors.col(order[k]);
  }
  d.values = std::move(values);
  d.vectors = std::move(vectors);
}

double eigen_residual(const Matrix& m, const EigenDecomposition& d) {
  if (d.size() == 0) return 0.0;
  const Matrix r = m * d.vectors - d.vectors * d.values.asDiagonal();
  return r.colwise().norm().maxCoeff();
}

Complex weighted_location(const EigenDecomposition& d, const std::vector<Eigen::Index>& members,
                          const Eigen::VectorXd& weights) {
  double total = 0.0;
  Complex sum{0.0, 0.0};
  for (const Eigen::Index k : members) {
    total += weights(k);
    sum += weights(k) * d.values(k);
  }
  Complex location;
  if (total > 0.0) {
    location = sum / total;
  } else {
    for (const Eigen::Index k : members) location += d.values(k);
    location /= static_cast<double>(members.size());
  }
  if (d.support == SupportKind::unit_circle && std::abs(location) > 0.0) location /= std::abs(location);
  return location;
}

Complex pair_location(Complex x1, double w1, Complex x2, double w2, SupportKind kind) {
  Complex location = (w1 * x1 + w2 * x2) / (w1 + w2);
  if (kind == SupportKind::unit_circle && std::abs(location) > 0.0) location /= std::abs(location);
  return location;
}

}  // namespace

const char* to_string(SupportKind kind) {
  return kind == SupportKind::real_line ? "real-line" : "unit-circle";
}

EigenDecomposition eigendecompose(const DenseOperator& m, std::optional<double> tol) {
  const Matrix& a = m.entries();
  EigenDecomposition d;

  switch (m.kind()) {
    case OperatorKind::selfadjoint: {
      d.support = SupportKind::real_line;
      if (a.imag().isZero(0.0)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.real());
        if (solver.info() != Eigen::Success) throw ConvergenceError("symmetric eigensolver did not converge", NAN);
        d.values = solver.eigenvalues().cast<Complex>();
        d.vectors = solver.eigenvectors().cast<Complex>();
      } else {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
        if (solver.info() != Eigen::Success) throw ConvergenceError("hermitian eigensolver did not converge", NAN);
        d.values = solver.eigenvalues().cast<Complex>();
        d.vectors = solver.eigenvectors();
      }
      break;
    }
    case OperatorKind::unitary: {
      d.support = SupportKind::unit_circle;
      Eigen::ComplexSchur<Matrix> schur(a);
      if (schur.info() != Eigen::Success) throw ConvergenceError("complex Schur iteration did not converge", NAN);
      d.values = schur.matrixT().diagonal();
      for (Eigen::Index k = 0; k < d.values.size(); ++k) {
        const double r = std::abs(d.values(k));
        if (r > 0.0) d.values(k) /= r;
      }
      d.vectors = schur.matrixU();
      break;
    }
    case OperatorKind::general:
      throw DomainError("eigendecompose needs a selfadjoint or unitary operator");
  }

  sort_pairs(d);
  d.residual = eigen_residual(a, d);
  const double limit = tol.value_or(kDefaultEigenTol * std::max(1.0, infinity_norm(a)));
  if (!(d.residual <= limit)) {
    throw ConvergenceError("eigendecomposition residual " + std::to_string(d.residual) + " exceeds " +
                               std::to_string(limit),
                           d.residual);
  }
  return d;
}

EigenDecomposition direct_sum(const EigenDecomposition& a, const EigenDecomposition& b) {
  if (a.support != b.support) throw DomainError("direct_sum of decompositions with different supports");
  const Eigen::Index n1 = a.size();
  const Eigen::Index n2 = b.size();
  EigenDecomposition d;
  d.support = a.support;
  d.values = concat(a.values, b.values);
  d.vectors = Matrix::Zero(n1 + n2, n1 + n2);
  d.vectors.topLeftCorner(n1, n1) = a.vectors;
  d.vectors.bottomRightCorner(n2, n2) = b.vectors;
  d.residual = std::max(a.residual, b.residual);
  sort_pairs(d);
  return d;
}

double spectral_diameter(const Vector& points, SupportKind kind) {
  if (points.size() < 2) return 0.0;
  if (kind == SupportKind::real_line) return points.real().maxCoeff() - points.real().minCoeff();
  double diameter = 0.0;
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    for (Eigen::Index j = i + 1; j < points.size(); ++j) diameter = std::max(diameter, std::abs(points(i) - points(j)));
  }
  return diameter;
}

double tolerance_scale(const Vector& points, SupportKind kind) {
  if (points.size() == 0) return 1.0;
  const double scale = std::max(spectral_diameter(points, kind), points.cwiseAbs().maxCoeff());
  return scale > 0.0 ? scale : 1.0;
}

Vector concat(const Vector& a, const Vector& b) {
  Vector v(a.size() + b.size());
  v << a, b;
  return v;
}

std::vector<std::vector<Eigen::Index>> cluster_points(const Vector& points, SupportKind kind, double tol) {
  std::vector<std::vector<Eigen::Index>> groups;
  for (Eigen::Index k = 0; k < points.size(); ++k) {
    if (!groups.empty() && std::abs(points(k) - points(groups.back().back())) <= tol) {
      groups.back().push_back(k);
    } else {
      groups.push_back({k});
    }
  }
  if (kind == SupportKind::unit_circle && groups.size() > 1 &&
      std::abs(points(groups.front().front()) - points(groups.back().back())) <= tol) {
    std::vector<Eigen::Index> merged = groups.back();
    merged.insert(merged.end(), groups.front().begin(), groups.front().end());
    groups.front() = std::move(merged);
    groups.pop_back();
  }
  return groups;
}

double AtomicSpectralMeasure::total_weight() const {
  double total = 0.0;
  for (const Atom& atom : atoms) total += atom.weight;
  return total;
}

AtomicSpectralMeasure spectral_measure(const EigenDecomposition& d, const Vector& phi, MeasureOptions options) {
  if (phi.size() != d.vectors.rows()) throw DomainError("spectral_measure: vector dimension mismatch");
  const double merge_tol = options.merge_tol.value_or(kDefaultRelativeMergeTol * tolerance_scale(d.values, d.support));
  const double floor = options.weight_floor.value_or(kDefaultRelativeWeightFloor * phi.squaredNorm());

  const Eigen::VectorXd weights = (d.vectors.adjoint() * phi).cwiseAbs2();
  AtomicSpectralMeasure mu;
  mu.kind = d.support;
  for (const auto& members : cluster_points(d.values, d.support, merge_tol)) {
    double weight = 0.0;
    for (const Eigen::Index k : members) weight += weights(k);
    if (weight <= floor) {
      mu.discarded_mass += weight;
      continue;
    }
    mu.atoms.push_back({weighted_location(d, members, weights), weight});
  }
  return mu;
}

Vector spectral_projection(const EigenDecomposition& d, const Vector& phi, Complex location, double radius) {
  Vector out = Vector::Zero(phi.size());
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    if (std::abs(d.values(k) - location) <= radius) out += d.vectors.col(k) * d.vectors.col(k).dot(phi);
  }
  return out;
}

Matrix krylov_basis(const DenseOperator& m, const Vector& phi, double tol) {
  const Eigen::Index n = m.dimension();
  if (phi.size() != n) throw DomainError("krylov: vector dimension mismatch");
  const double norm = phi.norm();
  if (!(norm > 0.0)) throw DomainError("krylov: starting vector must be nonzero");

  const double cutoff = tol * std::max(1.0, infinity_norm(m.entries()));
  Matrix q(n, n);
  q.col(0) = phi / norm;
  Eigen::Index k = 1;
  while (k < n) {
    Vector w = m.entries() * q.col(k - 1);
    for (int pass = 0; pass < 2; ++pass) w -= q.leftCols(k) * (q.leftCols(k).adjoint() * w);
    const double r = w.norm();
    if (r <= cutoff) break;
    q.col(k) = w / r;
    ++k;
  }
  return q.leftCols(k);
}

int krylov_dimension(const DenseOperator& m, const Vector& phi, double tol) {
  auto dim = static_cast<int>(krylov_basis(m, phi, tol).cols());
  if (m.kind() == OperatorKind::general || dim <= 1) return dim;
  const auto distinct = static_cast<int>(multiplicity_profile(eigendecompose(m)).clusters.size());
  return std::min(dim, distinct);
}

Matrix cyclic_subspace(const EigenDecomposition& d, const Vector& phi, double merge_tol, double rank_tol) {
  if (phi.size() != d.size()) throw DomainError("cyclic_subspace: vector dimension mismatch");
  const double cutoff = rank_tol * phi.norm();
  std::vector<Vector> columns;
  for (const auto& members : cluster_points(d.values, d.support, merge_tol)) {
    Vector component = Vector::Zero(phi.size());
    for (Eigen::Index k : members) component += d.vectors.col(k) * d.vectors.col(k).dot(phi);
    const double norm = component.norm();
    if (norm > cutoff) columns.push_back(component / norm);
  }
  Matrix q(phi.size(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) q.col(static_cast<Eigen::Index>(c)) = columns[c];
  return q;
}

SupportPartition support_partition(const AtomicSpectralMeasure& mu1, const AtomicSpectralMeasure& mu2,
                                   double match_tol) {
  if (mu1.kind != mu2.kind) throw DomainError("support_partition: measures live on different supports");
  const std::size_t n1 = mu1.atoms.size();
  const std::size_t n2 = mu2.atoms.size();
  std::vector<int> partner_of_first(n1, -1);
  std::vector<int> partners_of_second(n2, 0);

  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      if (std::abs(mu1.atoms[i].location - mu2.atoms[j].location) > match_tol) continue;
      if (partner_of_first[i] >= 0) {
        throw AmbiguousMatchError("atom of the first measure matches two atoms of the second; "
                                  "use a smaller merge tolerance upstream");
      }
      partner_of_first[i] = static_cast<int>(j);
      if (++partners_of_second[j] > 1) {
        throw AmbiguousMatchError("atom of the second measure matches two atoms of the first; "
                                  "use a smaller merge tolerance upstream");
      }
    }
  }

  SupportPartition p;
  for (std::size_t i = 0; i < n1; ++i) {
    const Atom& a = mu1.atoms[i];
    if (partner_of_first[i] < 0) {
      p.first_only.push_back(a);
      continue;
    }
    const Atom& b = mu2.atoms[static_cast<std::size_t>(partner_of_first[i])];
    p.common.push_back({pair_location(a.location, a.weight, b.location, b.weight, mu1.kind), a.weight, b.weight});
  }
  for (std::size_t j = 0; j < n2; ++j) {
    if (partners_of_second[j] == 0) p.second_only.push_back(mu2.atoms[j]);
  }
  return p;
}

Complex borel_transform(const AtomicSpectralMeasure& mu, Complex z, double pole_guard) {
  if (mu.kind != SupportKind::real_line) throw DomainError("borel_transform needs a real-line measure");
  Complex f{0.0, 0.0};
  for (const Atom& atom : mu.atoms) {
    const Complex d = atom.location - z;
    if (std::abs(d) <= pole_guard) {
      throw PoleError("borel_transform evaluated within the pole guard of the atom at " +
                          std::to_string(atom.location.real()),
                      atom.location);
    }
    f += atom.weight / d;
  }
  return f;
}

Complex caratheodory(const AtomicSpectralMeasure& mu, Complex z) {
  if (mu.kind != SupportKind::unit_circle) throw DomainError("caratheodory needs a unit-circle measure");
  if (!(std::abs(z) < 1.0)) throw DomainError("caratheodory needs |z| < 1");
  Complex f{0.0, 0.0};
  for (const Atom& atom : mu.atoms) f += atom.weight * (atom.location + z) / (atom.location - z);
  return f;
}

Complex schur_function(const AtomicSpectralMeasure& mu, Complex z) {
  if (z == Complex{0.0, 0.0}) throw DomainError("schur_function is evaluated off the origin");
  if (std::abs(mu.total_weight() - 1.0) > 1e-8) throw DomainError("schur_function needs a probability measure");
  const Complex f = caratheodory(mu, z);
  if (f + 1.0 == Complex{0.0, 0.0}) throw NumericalError("schur_function: F(z) = -1");
  return (f - 1.0) / (z * (f + 1.0));
}

bool MultiplicityProfile::simple() const { return max_multiplicity() <= 1; }

int MultiplicityProfile::max_multiplicity() const {
  int m = 0;
  for (const EigenCluster& c : clusters) m = std::max(m, c.multiplicity());
  return m;
}

MultiplicityProfile multiplicity_profile(const EigenDecomposition& d, std::optional<double> gap_tol) {
  const double tol = gap_tol.value_or(kDefaultRelativeMergeTol * tolerance_scale(d.values, d.support));
  MultiplicityProfile profile;
  const Eigen::VectorXd uniform = Eigen::VectorXd::Ones(d.size());
  for (auto& members : cluster_points(d.values, d.support, tol)) {
    profile.clusters.push_back({weighted_location(d, members, uniform), std::move(members)});
  }

  profile.min_gap = std::numeric_limits<double>::infinity();
  const std::size_t count = profile.clusters.size();
  if (count < 2) return profile;
  for (std::size_t c = 0; c + 1 < count; ++c) {
    const Complex last = d.values(profile.clusters[c].members.back());
    const Complex next = d.values(profile.clusters[c + 1].members.front());
    profile.min_gap = std::min(profile.min_gap, std::abs(next - last));
  }
  if (d.support == SupportKind::unit_circle) {
    const Complex last = d.values(profile.clusters.back().members.back());
    const Complex first = d.values(profile.clusters.front().members.front());
    profile.min_gap = std::min(profile.min_gap, std::abs(first - last));
  }
  return profile;
}

}  // namespace rankone
