#include "rankone/linalg.hpp"

#include "rankone/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <vector>

namespace rankone {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_residual(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_residual(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix gram = m.adjoint() * m;
  return (gram - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

namespace {

// Rows of m that are not exactly zero.
Matrix nonzero_rows(const Matrix& m) {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!m.row(i).isZero(0.0)) rows.push_back(i);
  }
  Matrix compact(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) compact.row(static_cast<Eigen::Index>(k)) = m.row(rows[k]);
  return compact;
}

}  // namespace

Eigen::VectorXd singular_values(const Matrix& m) {
  const Matrix compact = nonzero_rows(m);
  if (compact.rows() == 0 || m.cols() == 0) return Eigen::VectorXd::Zero(std::min(m.rows(), m.cols()));

  Eigen::BDCSVD<Matrix> svd(compact);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(std::min(m.rows(), m.cols()));
  values.head(svd.singularValues().size()) = svd.singularValues();
  return values;
}

double second_singular_value(const Matrix& m) {
  const Eigen::VectorXd s = singular_values(m);
  return s.size() < 2 ? 0.0 : s(1);
}

Vector top_right_singular_vector(const Matrix& m) {
  const Matrix compact = nonzero_rows(m);
  if (compact.rows() == 0) throw DomainError("top_right_singular_vector: zero matrix");
  Eigen::JacobiSVD<Matrix> svd(compact, Eigen::ComputeThinV);
  return svd.matrixV().col(0);
}

double operator_norm(const DenseOperator& op) {
  if (op.dimension() == 0) return 0.0;
  if (op.kind() == OperatorKind::unitary) return 1.0;
  return singular_values(op.entries())(0);
}

double infinity_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

Matrix outer(const Vector& u, const Vector& v) { return u * v.adjoint(); }

}  // namespace rankone
