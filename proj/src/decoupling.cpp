#include "rankone/decoupling.hpp"

#include "rankone/errors.hpp"
#include "rankone/linalg.hpp"
#include "rankone/spectral.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>

namespace rankone {
namespace {

constexpr Complex kI{0.0, 1.0};

}  // namespace

std::pair<JacobiWindow, JacobiWindow> decoupled_halves(const JacobiWindow& w, Site cut) {
  validate(w);
  if (cut < w.n_min || cut + 1 > w.n_max) {
    throw DomainError("jacobi cut " + std::to_string(cut) + " needs sites " + std::to_string(cut) + " and " +
                      std::to_string(cut + 1) + " inside the window");
  }
  const auto split = static_cast<std::size_t>(cut - w.n_min + 1);
  const double hop = w.a_at(cut);

  JacobiWindow left{w.n_min, cut, {w.b.begin(), w.b.begin() + static_cast<long>(split)},
                    {w.a.begin(), w.a.begin() + static_cast<long>(split) - 1}};
  JacobiWindow right{cut + 1, w.n_max, {w.b.begin() + static_cast<long>(split), w.b.end()},
                     {w.a.begin() + static_cast<long>(split), w.a.end()}};
  left.b.back() -= hop;
  right.b.front() -= hop;
  return {std::move(left), std::move(right)};
}

JacobiDecoupling decouple_jacobi(const JacobiWindow& w, Site cut) {
  auto [left, right] = decoupled_halves(w, cut);
  Vector phi = Vector::Zero(w.dimension());
  phi(cut - w.n_min) = 1.0;
  phi(cut + 1 - w.n_min) = 1.0;
  return JacobiDecoupling{materialize_jacobi(left), materialize_jacobi(right), std::move(phi), w.a_at(cut), cut};
}

DenseOperator JacobiDecoupling::reconstruct() const {
  const DenseOperator sum = direct_sum(a1, a2);
  Matrix m = sum.entries() + lambda * outer(phi, phi);
  return DenseOperator::trusted(std::move(m), OperatorKind::selfadjoint, sum.site_labels());
}

// ---------------------------------------------------------------------------

namespace {

void check_cmv_cut(const CMVWindow& w, Site cut) {
  if (cut % 2 == 0) throw DomainError("cmv cut index must be odd so that the cut block belongs to L");
  if (cut < w.j_min + 1 || cut + 1 > w.j_max - 2) {
    throw DomainError("cmv cut " + std::to_string(cut) + " needs an interior L block on sites (" +
                      std::to_string(cut) + ", " + std::to_string(cut + 1) + ")");
  }
  if (static_cast<Eigen::Index>(w.alpha.size()) != w.dimension()) {
    throw DomainError("cmv window coefficient count does not match its range");
  }
  if (std::abs(1.0 + w.alpha_at(cut)) == 0.0) {
    throw SingularDecouplingError("alpha_" + std::to_string(cut) + " = -1: the decoupling phase is undefined");
  }
}

Complex decoupling_phase(Complex alpha) { return (1.0 + std::conj(alpha)) / (1.0 + alpha); }

}  // namespace

CMVDecoupling decouple_cmv(const CMVWindow& w, Site cut) {
  check_cmv_cut(w, cut);
  validate(w);
  const Complex x = decoupling_phase(w.alpha_at(cut));

  const CMVFactors f = cmv_factors(w);
  Matrix l_tilde = f.l;
  const Eigen::Index k = cut - w.j_min;
  l_tilde.block<2, 2>(k, k) << x, 0.0, 0.0, 1.0;

  const auto labels = site_range(w.j_min, w.dimension());
  Matrix e = f.l * f.m;
  Matrix e_tilde = l_tilde * f.m;
  Matrix difference = e - e_tilde;
  return CMVDecoupling{DenseOperator::trusted(std::move(e), OperatorKind::unitary, labels),
                       DenseOperator::trusted(std::move(e_tilde), OperatorKind::unitary, labels),
                       DenseOperator::trusted(std::move(difference), OperatorKind::general, labels), x, cut};
}

std::pair<CMVWindow, CMVWindow> decoupled_halves(const CMVWindow& w, Site cut) {
  check_cmv_cut(w, cut);
  validate(w);
  const auto split = static_cast<long>(cut + 1 - w.j_min);
  CMVWindow left{w.j_min, cut + 1, {w.alpha.begin(), w.alpha.begin() + split}, w.boundary_left,
                 decoupling_phase(w.alpha_at(cut))};
  CMVWindow right{cut + 1, w.j_max, {w.alpha.begin() + split, w.alpha.end()}, Complex{1.0, 0.0}, w.boundary_right};
  return {std::move(left), std::move(right)};
}

// ---------------------------------------------------------------------------

DenseOperator cayley(const DenseOperator& a) {
  if (a.kind() != OperatorKind::selfadjoint) throw DomainError("cayley needs a selfadjoint operator");
  const Eigen::Index n = a.dimension();
  const Matrix identity = Matrix::Identity(n, n);
  // (A - i)^{-1} and (A + i) commute.
  Matrix u = Eigen::PartialPivLU<Matrix>(a.entries() - kI * identity).solve(a.entries() + kI * identity);
  return DenseOperator::trusted(std::move(u), OperatorKind::unitary, a.site_labels());
}

DenseOperator inverse_cayley(const DenseOperator& u, double tol) {
  if (u.kind() != OperatorKind::unitary) throw DomainError("inverse_cayley needs a unitary operator");
  const EigenDecomposition d = eigendecompose(u);
  Eigen::VectorXd preimage(d.size());
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    const Complex e = d.values(k);
    const double distance = std::abs(e - 1.0);
    if (distance <= tol) {
      throw UnboundedPreimageError("unitary has an eigenvalue within " + std::to_string(distance) +
                                       " of +1; its Cayley preimage is unbounded",
                                   distance);
    }
    preimage(k) = (kI * (e + 1.0) / (e - 1.0)).real();
  }
  Matrix a = d.vectors * preimage.cast<Complex>().asDiagonal() * d.vectors.adjoint();
  a = 0.5 * (a + a.adjoint()).eval();
  return DenseOperator::trusted(std::move(a), OperatorKind::selfadjoint, u.site_labels());
}

DenseOperator unitary_rank_one(const DenseOperator& v, const Vector& phi, Complex lambda) {
  if (v.kind() != OperatorKind::unitary) throw DomainError("unitary_rank_one needs a unitary base");
  if (phi.size() != v.dimension()) throw DomainError("unitary_rank_one: vector dimension mismatch");
  if (std::abs(phi.norm() - 1.0) > 1e-10) throw DomainError("unitary_rank_one needs a unit vector phi");
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12) throw DomainError("unitary_rank_one needs |lambda| = 1");
  if (std::abs(lambda - 1.0) <= 1e-14) throw DomainError("unitary_rank_one needs lambda != 1");
  const Vector v_phi = v.entries() * phi;
  Matrix w = v.entries() + (lambda - 1.0) * outer(v_phi, phi);
  return DenseOperator::trusted(std::move(w), OperatorKind::unitary, v.site_labels());
}

}  // namespace rankone
