#pragma once

#include "rankone/operators.hpp"

#include <utility>

namespace rankone {

/// J - a_cut (phi, .) phi = A1 (+) A2 with phi = delta_cut + delta_{cut+1}.
struct JacobiDecoupling {
  DenseOperator a1;  // sites <= cut, corner diagonal b_cut - a_cut
  DenseOperator a2;  // sites >= cut + 1, leading diagonal b_{cut+1} - a_cut
  Vector phi;
  double lambda = 0.0;
  Site cut = -1;

  /// (a1 (+) a2) + lambda phi phi^*, labelled like the original window.
  DenseOperator reconstruct() const;
};

JacobiDecoupling decouple_jacobi(const JacobiWindow& w, Site cut = -1);

/// The two half-windows whose materializations are a1 and a2.
std::pair<JacobiWindow, JacobiWindow> decoupled_halves(const JacobiWindow& w, Site cut = -1);

/// E~ replaces Theta(alpha_cut) in L by diag(x, 1), x = (1 + conj(a)) / (1 + a).
struct CMVDecoupling {
  DenseOperator e;
  DenseOperator e_tilde;
  DenseOperator difference;  // E - E~, rank one
  Complex x;
  Site cut = -1;
};

/// cut must be odd (the block belongs to L) with alpha_cut != -1.
/// Throws SingularDecouplingError at alpha_cut = -1.
CMVDecoupling decouple_cmv(const CMVWindow& w, Site cut = -1);

/// Half-windows whose materializations are the diagonal blocks of E~: the
/// left one closes with x at site cut, the right one with 1 at site cut + 1.
std::pair<CMVWindow, CMVWindow> decoupled_halves(const CMVWindow& w, Site cut = -1);

/// U = (A + i)(A - i)^{-1}. Eigenvalues map by E -> (E + i)/(E - i); +1 is
/// never in the spectrum of the result.
DenseOperator cayley(const DenseOperator& a);

inline constexpr double kDefaultCayleyExclusionTol = 1e-8;

/// A = i (U - I)^{-1} (U + I), the inverse of `cayley`.
/// Throws UnboundedPreimageError if U has an eigenvalue within `tol` of +1.
DenseOperator inverse_cayley(const DenseOperator& u, double tol = kDefaultCayleyExclusionTol);

/// W = V (I + (lambda - 1) phi phi^*), so W phi = lambda V phi and W - V is
/// rank one. ||phi|| = 1, |lambda| = 1, lambda != 1.
DenseOperator unitary_rank_one(const DenseOperator& v, const Vector& phi, Complex lambda);

}  // namespace rankone
