#pragma once

#include "rankone/operators.hpp"

namespace rankone {

double max_abs(const Matrix& m);

/// max_ij |M_ij - conj(M_ji)|.
double hermiticity_residual(const Matrix& m);

/// max entry of |M^* M - I|.
double unitarity_residual(const Matrix& m);

/// Singular values in descending order. Exactly-zero rows are dropped first;
/// they do not change M^* M.
Eigen::VectorXd singular_values(const Matrix& m);

/// Second-largest singular value (0 for matrices with fewer than two).
double second_singular_value(const Matrix& m);

/// Unit right singular vector of the largest singular value.
Vector top_right_singular_vector(const Matrix& m);

/// Spectral norm. Exactly 1 for operators tagged unitary.
double operator_norm(const DenseOperator& op);

/// max row sum of |M_ij|; an upper bound for the spectral norm.
double infinity_norm(const Matrix& m);

Matrix outer(const Vector& u, const Vector& v);

}  // namespace rankone
