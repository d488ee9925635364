#include "rankone/harness.hpp"

#include "rankone/decoupling.hpp"
#include "rankone/errors.hpp"
#include "rankone/linalg.hpp"
#include "rankone/spectral.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace rankone {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr Complex kI{0.0, 1.0};

using C = Comparison;

double min_distance(const Vector& a, const Vector& b) {
  double best = kInf;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = 0; j < b.size(); ++j) best = std::min(best, std::abs(a(i) - b(j)));
  }
  return best;
}

void add_note(VerificationReport& r, const std::string& text) {
  if (!r.note.empty()) r.note += "; ";
  r.note += text;
}

// Cyclicity precondition; a failure makes the report inconclusive.
bool require_cyclic(VerificationReport& r, const DenseOperator& m, const Vector& phi, const std::string& what,
                    const Tolerances& tol) {
  const int dim = krylov_dimension(m, phi, tol.krylov);
  r.checks.push_back(make_check("krylov dimension of " + what, dim, C::equals, static_cast<double>(m.dimension())));
  if (dim == m.dimension()) return true;
  r.status = Status::inconclusive_precondition;
  add_note(r, what + " is not cyclic");
  return false;
}

void require_selfadjoint(const DenseOperator& a, const char* who) {
  if (a.kind() != OperatorKind::selfadjoint) throw DomainError(std::string(who) + " needs selfadjoint operators");
}

void require_dimension(const DenseOperator& a, const Vector& phi, const char* who) {
  if (phi.size() != a.dimension()) throw DomainError(std::string(who) + ": vector dimension mismatch");
}

Vector stack(const Vector& a, const Vector& b) { return concat(a, b); }

std::vector<Complex> locations(const SupportPartition& p) {
  std::vector<Complex> out;
  for (const CommonAtom& x : p.common) out.push_back(x.location);
  return out;
}

std::vector<Complex> all_locations(const SupportPartition& p) {
  std::vector<Complex> out = locations(p);
  for (const Atom& a : p.first_only) out.push_back(a.location);
  for (const Atom& a : p.second_only) out.push_back(a.location);
  return out;
}

// sigma(base) and sigma(perturbed) against the common-atom set X.
struct Intersection {
  int shared = 0;          // eigenvalue clusters of base that are also in sigma(perturbed)
  int shared_outside = 0;  // ... of which not within tol of X
  int missing = 0;         // points of X with no shared cluster
  int outside_charged = 0; // shared outside X but carrying weight above the floor in mu1 or mu2
};

Intersection intersect(const EigenDecomposition& base, const EigenDecomposition& perturbed,
                       const std::vector<Complex>& x, double tol, const std::vector<Complex>& charged = {}) {
  const MultiplicityProfile profile = multiplicity_profile(base, tol);
  std::vector<char> covered(x.size(), 0);
  Intersection out;
  for (const EigenCluster& cluster : profile.clusters) {
    double to_perturbed = kInf;
    for (Eigen::Index k : cluster.members) {
      for (Eigen::Index j = 0; j < perturbed.size(); ++j) {
        to_perturbed = std::min(to_perturbed, std::abs(base.values(k) - perturbed.values(j)));
      }
    }
    if (to_perturbed > tol) continue;
    ++out.shared;
    bool in_x = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (Eigen::Index k : cluster.members) {
        if (std::abs(base.values(k) - x[i]) <= tol) {
          in_x = true;
          covered[i] = 1;
        }
      }
    }
    if (in_x) continue;
    ++out.shared_outside;
    for (const Complex& c : charged) {
      if (std::abs(cluster.location - c) <= tol) {
        ++out.outside_charged;
        break;
      }
    }
  }
  for (char c : covered) out.missing += c ? 0 : 1;
  return out;
}

void intersection_checks(VerificationReport& r, const Intersection& in, std::size_t x_count, const char* base,
                         const char* perturbed) {
  const std::string pair = std::string("sigma(") + base + ") and sigma(" + perturbed + ")";
  r.checks.push_back(make_check("points shared by " + pair + " outside X", in.shared_outside, C::equals, 0.0));
  r.checks.push_back(make_check("points of X not shared by " + pair, in.missing, C::equals, 0.0));
  r.observations.push_back({"|X|", static_cast<double>(x_count)});
  r.observations.push_back({"shared eigenvalue clusters", static_cast<double>(in.shared)});
}

void simplicity_checks(VerificationReport& r, const EigenDecomposition& d, double gap, const char* name) {
  const MultiplicityProfile p = multiplicity_profile(d, gap);
  r.checks.push_back(make_check(std::string("max eigenvalue multiplicity of ") + name, p.max_multiplicity(), C::at_most, 1.0));
  r.checks.push_back(make_check(std::string("min eigenvalue gap of ") + name, p.min_gap, C::greater_than, gap));
}

Matrix resolvent_at_i(const Matrix& m) {
  const Eigen::Index n = m.rows();
  return Eigen::PartialPivLU<Matrix>(m - kI * Matrix::Identity(n, n)).inverse();
}

}  // namespace

VerificationReport verify_theorem1(const DenseOperator& a, const Vector& phi, double lambda, const Tolerances& tol) {
  require_selfadjoint(a, "verify_theorem1");
  require_dimension(a, phi, "verify_theorem1");
  if (!(lambda != 0.0) || !std::isfinite(lambda)) throw DomainError("verify_theorem1 needs a finite nonzero lambda");

  VerificationReport r;
  r.theorem_id = "thm1";
  r.inputs_digest["dimension"] = a.dimension();
  r.inputs_digest["lambda"] = lambda;
  if (!require_cyclic(r, a, phi, "phi under A", tol)) return r;

  const DenseOperator b = apply_rank_one(a, {phi, lambda});
  const EigenDecomposition ea = eigendecompose(a);
  const EigenDecomposition eb = eigendecompose(b);
  const double gap = tol.gap * tolerance_scale(concat(ea.values, eb.values), SupportKind::real_line);

  r.checks.push_back(make_check("distance between sigma(A) and sigma(B)", min_distance(ea.values, eb.values),
                                C::greater_than, gap));

  const AtomicSpectralMeasure mu = spectral_measure(ea, phi, {gap, 0.0});
  double secular = 0.0;
  try {
    for (Eigen::Index k = 0; k < eb.size(); ++k) {
      secular = std::max(secular, std::abs(borel_transform(mu, eb.values(k)) + 1.0 / lambda));
    }
  } catch (const PoleError&) {
    secular = kInf;
    add_note(r, "an eigenvalue of B sits on an atom of mu");
  }
  r.checks.push_back(make_check("max |F(E) + 1/lambda| over sigma(B)", secular, C::at_most, tol.secular));
  double min_weight = kInf;
  for (const Atom& atom : mu.atoms) min_weight = std::min(min_weight, atom.weight);
  r.observations.push_back({"min atom weight of mu", min_weight});

  const MultiplicityProfile pb = multiplicity_profile(eb, gap);
  r.checks.push_back(make_check("max eigenvalue multiplicity of B", pb.max_multiplicity(), C::at_most, 1.0));
  r.observations.push_back({"min eigenvalue gap of B", pb.min_gap});
  r.finalize();
  return r;
}

VerificationReport verify_theorem2(const DenseOperator& a1, const DenseOperator& a2, const Vector& phi1,
                                   const Vector& phi2, double lambda, const Tolerances& tol) {
  require_selfadjoint(a1, "verify_theorem2");
  require_selfadjoint(a2, "verify_theorem2");
  require_dimension(a1, phi1, "verify_theorem2");
  require_dimension(a2, phi2, "verify_theorem2");
  if (!(lambda != 0.0) || !std::isfinite(lambda)) throw DomainError("verify_theorem2 needs a finite nonzero lambda");

  VerificationReport r;
  r.theorem_id = "thm2";
  r.inputs_digest["dimension1"] = a1.dimension();
  r.inputs_digest["dimension2"] = a2.dimension();
  r.inputs_digest["lambda"] = lambda;
  const bool cyclic1 = require_cyclic(r, a1, phi1, "phi1 under A1", tol);
  const bool cyclic2 = require_cyclic(r, a2, phi2, "phi2 under A2", tol);
  if (!cyclic1 || !cyclic2) return r;

  const DenseOperator b = direct_sum(a1, a2);
  const DenseOperator c = apply_rank_one(b, {stack(phi1, phi2), lambda});
  const EigenDecomposition eb = direct_sum(eigendecompose(a1), eigendecompose(a2));
  const EigenDecomposition ec = eigendecompose(c);
  const double gap = tol.gap * tolerance_scale(concat(eb.values, ec.values), SupportKind::real_line);

  simplicity_checks(r, ec, gap, "C");
  const MultiplicityProfile pb = multiplicity_profile(eb, gap);
  int degenerate = 0;
  for (const EigenCluster& cl : pb.clusters) degenerate += cl.multiplicity() > 1 ? 1 : 0;
  r.observations.push_back({"max eigenvalue multiplicity of B", static_cast<double>(pb.max_multiplicity())});
  r.observations.push_back({"degenerate eigenvalue clusters of B", static_cast<double>(degenerate)});
  r.finalize();
  return r;
}

VerificationReport verify_corollary21(const DenseOperator& a1, const DenseOperator& a2, const Vector& phi1,
                                      const Vector& phi2, double lambda, const Tolerances& tol) {
  require_selfadjoint(a1, "verify_corollary21");
  require_selfadjoint(a2, "verify_corollary21");
  require_dimension(a1, phi1, "verify_corollary21");
  require_dimension(a2, phi2, "verify_corollary21");
  if (!(lambda != 0.0) || !std::isfinite(lambda)) throw DomainError("verify_corollary21 needs a finite nonzero lambda");

  VerificationReport r;
  r.theorem_id = "cor21";
  r.inputs_digest["dimension1"] = a1.dimension();
  r.inputs_digest["dimension2"] = a2.dimension();
  r.inputs_digest["lambda"] = lambda;
  const bool cyclic1 = require_cyclic(r, a1, phi1, "phi1 under A1", tol);
  const bool cyclic2 = require_cyclic(r, a2, phi2, "phi2 under A2", tol);
  if (!cyclic1 || !cyclic2) return r;

  const EigenDecomposition e1 = eigendecompose(a1);
  const EigenDecomposition e2 = eigendecompose(a2);
  const EigenDecomposition eb = direct_sum(e1, e2);
  const DenseOperator c = apply_rank_one(direct_sum(a1, a2), {stack(phi1, phi2), lambda});
  const EigenDecomposition ec = eigendecompose(c);
  const double gap = tol.gap * tolerance_scale(concat(eb.values, ec.values), SupportKind::real_line);

  const SupportPartition part =
      support_partition(spectral_measure(e1, phi1, {gap, std::nullopt}), spectral_measure(e2, phi2, {gap, std::nullopt}), gap);
  const std::vector<Complex> x = locations(part);
  intersection_checks(r, intersect(eb, ec, x, gap), x.size(), "B", "C");

  // X against sigma(A1) and sigma(A2) directly.
  int common = 0;
  for (const EigenCluster& cl : multiplicity_profile(e1, gap).clusters) {
    double d = kInf;
    for (Eigen::Index k : cl.members) d = std::min(d, min_distance(e1.values.segment(k, 1), e2.values));
    common += d <= gap ? 1 : 0;
  }
  r.checks.push_back(make_check("common eigenvalues of A1 and A2 minus |X|", common - static_cast<double>(x.size()),
                                C::equals, 0.0));
  r.finalize();
  return r;
}

VerificationReport verify_overlap_structure(const DenseOperator& a1, const DenseOperator& a2, const Vector& phi1,
                                            const Vector& phi2, const Tolerances& tol) {
  require_selfadjoint(a1, "verify_overlap_structure");
  require_selfadjoint(a2, "verify_overlap_structure");
  require_dimension(a1, phi1, "verify_overlap_structure");
  require_dimension(a2, phi2, "verify_overlap_structure");

  VerificationReport r;
  r.theorem_id = "eq21";
  const Eigen::Index n1 = a1.dimension();
  const Eigen::Index n2 = a2.dimension();
  r.inputs_digest["dimension1"] = n1;
  r.inputs_digest["dimension2"] = n2;
  const bool cyclic1 = require_cyclic(r, a1, phi1, "phi1 under A1", tol);
  const bool cyclic2 = require_cyclic(r, a2, phi2, "phi2 under A2", tol);
  if (!cyclic1 || !cyclic2) return r;

  const EigenDecomposition e1 = eigendecompose(a1);
  const EigenDecomposition e2 = eigendecompose(a2);
  const double gap = tol.gap * tolerance_scale(concat(e1.values, e2.values), SupportKind::real_line);
  const SupportPartition part =
      support_partition(spectral_measure(e1, phi1, {gap, std::nullopt}), spectral_measure(e2, phi2, {gap, std::nullopt}), gap);

  Vector psi = Vector::Zero(n1 + n2);
  for (const CommonAtom& x : part.common) {
    const double w1 = x.weight1;
    const double w2 = x.weight2;
    psi.head(n1) += std::sqrt(w2 / w1) * spectral_projection(e1, phi1, x.location, gap);
    psi.tail(n2) -= std::sqrt(w1 / w2) * spectral_projection(e2, phi2, x.location, gap);
  }

  const EigenDecomposition eb = direct_sum(e1, e2);
  // B has repeated eigenvalues on X, where Arnoldi over-counts; use the
  // spectral form of the cyclic subspaces.
  const Matrix l1 = cyclic_subspace(eb, stack(phi1, phi2), gap, tol.krylov);
  const auto dim_l1 = static_cast<double>(l1.cols());

  if (part.common.empty()) {
    r.checks.push_back(make_check("||psi||", psi.norm(), C::equals, 0.0));
    r.checks.push_back(make_check("dim L1", dim_l1, C::equals, static_cast<double>(n1 + n2)));
  } else {
    const AtomicSpectralMeasure mu_psi = spectral_measure(eb, psi, {gap, std::nullopt});
    int off_x = 0;
    double weight_error = 0.0;
    std::vector<char> hit(part.common.size(), 0);
    for (const Atom& atom : mu_psi.atoms) {
      bool found = false;
      for (std::size_t i = 0; i < part.common.size(); ++i) {
        if (std::abs(atom.location - part.common[i].location) > gap) continue;
        found = true;
        hit[i] = 1;
        weight_error =
            std::max(weight_error, std::abs(atom.weight - (part.common[i].weight1 + part.common[i].weight2)));
      }
      off_x += found ? 0 : 1;
    }
    int unhit = 0;
    for (std::size_t i = 0; i < hit.size(); ++i) {
      if (!hit[i]) {
        ++unhit;
        weight_error = std::max(weight_error, part.common[i].weight1 + part.common[i].weight2);
      }
    }
    r.checks.push_back(make_check("atoms of mu_psi outside X", off_x, C::equals, 0.0));
    r.checks.push_back(make_check("points of X without a mu_psi atom", unhit, C::equals, 0.0));
    r.checks.push_back(make_check("max |mu_psi({x}) - mu1({x}) - mu2({x})|", weight_error, C::at_most, tol.identity));

    const Matrix l_psi = cyclic_subspace(eb, psi, gap, tol.krylov);
    r.checks.push_back(make_check("max |<L1, L(psi)>| over orthonormal bases", max_abs(l1.adjoint() * l_psi),
                                  C::at_most, tol.orthogonality));
    r.checks.push_back(make_check("dim L1 + dim L(psi)", dim_l1 + static_cast<double>(l_psi.cols()), C::equals,
                                  static_cast<double>(n1 + n2)));
  }
  r.checks.push_back(make_check("dim L2 - |X|", static_cast<double>(n1 + n2) - dim_l1 - static_cast<double>(part.common.size()),
                                C::equals, 0.0));
  r.observations.push_back({"|X|", static_cast<double>(part.common.size())});
  r.observations.push_back({"dim L1", dim_l1});
  r.finalize();
  return r;
}

VerificationReport verify_unitary_ad(const DenseOperator& v, const Vector& phi, Complex lambda, const GridSpec& grid,
                                     const Tolerances& tol) {
  if (v.kind() != OperatorKind::unitary) throw DomainError("verify_unitary_ad needs a unitary operator");
  require_dimension(v, phi, "verify_unitary_ad");
  if (!(grid.radius > 0.0 && grid.radius < 1.0)) throw DomainError("grid radius must lie in (0, 1)");
  if (grid.count < 1) throw DomainError("grid needs at least one point");
  const DenseOperator w = unitary_rank_one(v, phi, lambda);

  VerificationReport r;
  r.theorem_id = "eq43";
  r.inputs_digest["dimension"] = v.dimension();
  r.inputs_digest["lambda"] = {lambda.real(), lambda.imag()};
  r.inputs_digest["grid_radius"] = grid.radius;
  r.inputs_digest["grid_count"] = grid.count;
  if (!require_cyclic(r, v, phi, "phi under V", tol)) return r;

  const EigenDecomposition ev = eigendecompose(v);
  const EigenDecomposition ew = eigendecompose(w);
  const double gap = tol.gap * tolerance_scale(concat(ev.values, ew.values), SupportKind::unit_circle);
  const AtomicSpectralMeasure mu_v = spectral_measure(ev, phi, {gap, 0.0});
  const AtomicSpectralMeasure mu_w = spectral_measure(ew, phi, {gap, 0.0});

  double worst = 0.0;
  double max_schur = 0.0;
  for (int k = 0; k < grid.count; ++k) {
    const Complex z = std::polar(grid.radius, 2.0 * std::numbers::pi * k / grid.count);
    const Complex f = schur_function(mu_v, z);
    const Complex g = schur_function(mu_w, z);
    worst = std::max(worst, std::abs(g - f / lambda));
    max_schur = std::max({max_schur, std::abs(f), std::abs(g)});
  }
  r.checks.push_back(make_check("max |g(z) - f(z)/lambda| on the grid", worst, C::at_most, tol.identity));
  r.checks.push_back(make_check("distance between sigma(V) and sigma(W)", min_distance(ev.values, ew.values),
                                C::greater_than, gap));
  const MultiplicityProfile pw = multiplicity_profile(ew, gap);
  r.checks.push_back(make_check("max eigenvalue multiplicity of W", pw.max_multiplicity(), C::at_most, 1.0));
  r.observations.push_back({"max |Schur function| on the grid", max_schur});
  r.observations.push_back({"min eigenvalue gap of W", pw.min_gap});
  r.finalize();
  return r;
}

VerificationReport verify_theorem42(const DenseOperator& a1, const DenseOperator& a2, const Vector& phi1,
                                    const Vector& phi2, Complex lambda_phase, const Tolerances& tol) {
  require_selfadjoint(a1, "verify_theorem42");
  require_selfadjoint(a2, "verify_theorem42");
  require_dimension(a1, phi1, "verify_theorem42");
  require_dimension(a2, phi2, "verify_theorem42");
  const Vector joined = stack(phi1, phi2);
  if (!(joined.norm() > 0.0)) throw DomainError("verify_theorem42 needs a nonzero vector");
  const Vector phi_hat = joined / joined.norm();

  const Eigen::Index n1 = a1.dimension();
  const Eigen::Index n2 = a2.dimension();
  const DenseOperator u1 = cayley(a1);
  const DenseOperator u2 = cayley(a2);
  const DenseOperator w = unitary_rank_one(direct_sum(u1, u2), phi_hat, lambda_phase);

  VerificationReport r;
  r.theorem_id = "thm42";
  r.inputs_digest["dimension1"] = n1;
  r.inputs_digest["dimension2"] = n2;
  r.inputs_digest["lambda"] = {lambda_phase.real(), lambda_phase.imag()};
  const bool cyclic1 = require_cyclic(r, u1, phi_hat.head(n1), "phi1 under cayley(A1)", tol);
  const bool cyclic2 = require_cyclic(r, u2, phi_hat.tail(n2), "phi2 under cayley(A2)", tol);
  if (!cyclic1 || !cyclic2) return r;

  std::optional<DenseOperator> c;
  try {
    c = inverse_cayley(w, tol.cayley_exclusion);
  } catch (const UnboundedPreimageError& e) {
    r.status = Status::skipped;
    r.observations.push_back({"distance of sigma(W) to +1", e.distance()});
    add_note(r, "W has an eigenvalue at +1; the perturbed selfadjoint operator is unbounded");
    return r;
  }

  const Matrix d = resolvent_at_i(direct_sum(a1, a2).entries()) - resolvent_at_i(c->entries());
  const Eigen::VectorXd s = singular_values(d);
  const double sigma2 = s.size() < 2 ? 0.0 : s(1);
  r.checks.push_back(make_check("second singular value of the resolvent difference", sigma2, C::at_most,
                                tol.resolvent_rank));
  r.checks.push_back(make_check("largest singular value of the resolvent difference", s.size() ? s(0) : 0.0,
                                C::greater_than, tol.resolvent_rank));
  const double alignment = std::abs(top_right_singular_vector(d).dot(phi_hat));
  r.checks.push_back(make_check("1 - |<top right singular vector, phi^>|", 1.0 - alignment, C::at_most, tol.identity));

  const EigenDecomposition ec = eigendecompose(*c);
  const double gap = tol.gap * tolerance_scale(ec.values, SupportKind::real_line);
  const MultiplicityProfile pc = multiplicity_profile(ec, gap);
  r.checks.push_back(make_check("max eigenvalue multiplicity of C", pc.max_multiplicity(), C::at_most, 1.0));
  r.observations.push_back({"min eigenvalue gap of C", pc.min_gap});
  r.finalize();
  return r;
}

VerificationReport verify_jacobi_simplicity(const JacobiWindow& w, const Tolerances& tol) {
  validate(w);
  VerificationReport r;
  r.theorem_id = "thm31";
  r.inputs_digest["n_min"] = w.n_min;
  r.inputs_digest["n_max"] = w.n_max;
  const JacobiDecoupling dec = decouple_jacobi(w);
  const DenseOperator j = materialize_jacobi(w);
  const Eigen::Index n1 = dec.a1.dimension();
  const Eigen::Index n2 = dec.a2.dimension();

  r.checks.push_back(make_check("max |J - (A1 (+) A2 + a_{-1} phi phi^*)|", max_abs(j.entries() - dec.reconstruct().entries()),
                                C::at_most, tol.reconstruction * infinity_norm(j.entries())));
  const Vector phi1 = dec.phi.head(n1);
  const Vector phi2 = dec.phi.tail(n2);
  const bool cyclic1 = require_cyclic(r, dec.a1, phi1, "delta_{-1} under A1", tol);
  const bool cyclic2 = require_cyclic(r, dec.a2, phi2, "delta_0 under A2", tol);
  if (!cyclic1 || !cyclic2) return r;

  const EigenDecomposition ej = eigendecompose(j);
  const EigenDecomposition e1 = eigendecompose(dec.a1);
  const EigenDecomposition e2 = eigendecompose(dec.a2);
  const EigenDecomposition eb = direct_sum(e1, e2);
  const double gap = tol.gap * tolerance_scale(concat(eb.values, ej.values), SupportKind::real_line);
  simplicity_checks(r, ej, gap, "J");

  const SupportPartition part =
      support_partition(spectral_measure(e1, phi1, {gap, std::nullopt}), spectral_measure(e2, phi2, {gap, std::nullopt}), gap);
  const std::vector<Complex> x = locations(part);
  const Intersection in = intersect(eb, ej, x, gap, all_locations(part));
  intersection_checks(r, in, x.size(), "A1 (+) A2", "J");
  r.observations.push_back({"shared points outside X charged by mu1 or mu2", static_cast<double>(in.outside_charged)});
  r.finalize();
  return r;
}

VerificationReport verify_cmv_simplicity(const CMVWindow& w, const Tolerances& tol) {
  VerificationReport r;
  r.theorem_id = "thm51";
  r.inputs_digest["j_min"] = w.j_min;
  r.inputs_digest["j_max"] = w.j_max;
  const CMVDecoupling dec = decouple_cmv(w);

  r.checks.push_back(make_check("second singular value of E - E~", second_singular_value(dec.difference.entries()),
                                C::at_most, tol.rank_one * operator_norm(dec.e)));
  r.checks.push_back(make_check("max |E~^* E~ - I|", unitarity_residual(dec.e_tilde.entries()), C::at_most, tol.rank_one));

  const Eigen::Index n1 = dec.cut + 1 - w.j_min;
  const Eigen::Index n2 = w.dimension() - n1;
  const Matrix& et = dec.e_tilde.entries();
  const double coupling = std::max(max_abs(et.bottomLeftCorner(n2, n1)), max_abs(et.topRightCorner(n1, n2)));
  r.checks.push_back(make_check("max |E~ entry| across the cut", coupling, C::at_most, tol.rank_one));

  const DenseOperator left = principal_block(dec.e_tilde, 0, n1);
  const DenseOperator right = principal_block(dec.e_tilde, n1, n2);
  const Vector phi = top_right_singular_vector(dec.difference.entries());
  const Vector phi1 = phi.head(n1);
  const Vector phi2 = phi.tail(n2);
  const bool cyclic1 = require_cyclic(r, left, phi1, "P phi under the left block of E~", tol);
  const bool cyclic2 = require_cyclic(r, right, phi2, "(1 - P) phi under the right block of E~", tol);
  if (!cyclic1 || !cyclic2) return r;

  const EigenDecomposition ee = eigendecompose(dec.e);
  const EigenDecomposition e1 = eigendecompose(left);
  const EigenDecomposition e2 = eigendecompose(right);
  const EigenDecomposition et_d = direct_sum(e1, e2);
  const double gap = tol.gap * tolerance_scale(concat(et_d.values, ee.values), SupportKind::unit_circle);
  simplicity_checks(r, ee, gap, "E");

  const SupportPartition part =
      support_partition(spectral_measure(e1, phi1, {gap, std::nullopt}), spectral_measure(e2, phi2, {gap, std::nullopt}), gap);
  const std::vector<Complex> x = locations(part);
  const Intersection in = intersect(et_d, ee, x, gap, all_locations(part));
  intersection_checks(r, in, x.size(), "E~", "E");
  r.observations.push_back({"shared points outside X charged by mu1 or mu2", static_cast<double>(in.outside_charged)});
  r.finalize();
  return r;
}

}  // namespace rankone
