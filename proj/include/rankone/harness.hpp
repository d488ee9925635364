#pragma once

#include "rankone/operators.hpp"
#include "rankone/report.hpp"

namespace rankone {

/// Thresholds used by the verifications. Gap thresholds are relative to the
/// spectral scale of the spectra being compared; the rest are absolute.
struct Tolerances {
  double gap = 1e-8;              // disjointness, simplicity and matching
  double identity = 1e-10;        // Schur identity, Eq. weights, singular-vector alignment
  double rank_one = 1e-12;        // second singular value, relative to the operator norm
  double resolvent_rank = 1e-10;  // second singular value of the resolvent difference
  double secular = 1e-8;          // |F(E) + 1/lambda|
  double krylov = 1e-10;          // Arnoldi breakdown cutoff
  double orthogonality = 1e-10;   // cyclic subspaces of phi and psi
  double cayley_exclusion = 1e-8; // distance of an eigenvalue to +1
  double reconstruction = 0x1.0p-50;  // relative to ||J||
};

struct GridSpec {
  double radius = 0.9;
  int count = 128;
};

/// B = A + lambda <phi, .> phi; phi cyclic for A (else inconclusive).
/// Checks sigma(A) and sigma(B) disjoint, the secular equation
/// F_A(E) = -1/lambda at every eigenvalue of B, and B simple.
VerificationReport verify_theorem1(const DenseOperator& a, const Vector& phi, double lambda,
                                   const Tolerances& tol = {});

/// C = A1 (+) A2 + lambda (phi, .) phi with phi = (phi1, phi2); C simple.
VerificationReport verify_theorem2(const DenseOperator& a1, const DenseOperator& a2, const Vector& phi1,
                                   const Vector& phi2, double lambda, const Tolerances& tol = {});

/// sigma(B) and sigma(C) meet exactly in the common-atom set X of mu1, mu2.
VerificationReport verify_corollary21(const DenseOperator& a1, const DenseOperator& a2, const Vector& phi1,
                                      const Vector& phi2, double lambda, const Tolerances& tol = {});

/// Structure of the orthogonal complement L2 of the cyclic subspace L1 of phi.
///
/// psi is assembled per common atom x from the unit spectral components
/// u1 = E1({x}) phi1 / sqrt(w1) and u2 = E2({x}) phi2 / sqrt(w2) as
/// sqrt(w2) u1 - sqrt(w1) u2. Its spectral measure under B is
/// chi_X (mu1 + mu2), and it is orthogonal to L1; with w1 = w2 it reduces to
/// (chi_X, -chi_X) in the two spectral representations.
VerificationReport verify_overlap_structure(const DenseOperator& a1, const DenseOperator& a2, const Vector& phi1,
                                            const Vector& phi2, const Tolerances& tol = {});

/// W = V (I + (lambda - 1) phi phi^*); checks g = lambda^{-1} f on a circle
/// grid, sigma(W) and sigma(V) disjoint, W simple.
VerificationReport verify_unitary_ad(const DenseOperator& v, const Vector& phi, Complex lambda,
                                     const GridSpec& grid = {}, const Tolerances& tol = {});

/// Cayley pipeline: U = cayley(A1) (+) cayley(A2), W a unitary rank-one
/// perturbation along phi^ = (phi1, phi2)/||.||, C = inverse_cayley(W).
/// Checks that D = (A1 (+) A2 - i)^{-1} - (C - i)^{-1} is rank one with
/// phi^ spanning (ker D)^perp, and that C is simple. Skipped when W has an
/// eigenvalue at +1.
VerificationReport verify_theorem42(const DenseOperator& a1, const DenseOperator& a2, const Vector& phi1,
                                    const Vector& phi2, Complex lambda_phase, const Tolerances& tol = {});

/// Jacobi window decoupled at the cut between sites -1 and 0.
VerificationReport verify_jacobi_simplicity(const JacobiWindow& w, const Tolerances& tol = {});

/// CMV window decoupled at alpha_{-1}.
VerificationReport verify_cmv_simplicity(const CMVWindow& w, const Tolerances& tol = {});

}  // namespace rankone
