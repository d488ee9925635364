#include "rankone/ensembles.hpp"

#include "rankone/errors.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

namespace rankone {

DenseOperator random_selfadjoint(Rng& rng, Eigen::Index n) {
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  }
  Matrix a = (g + g.adjoint()) / (2.0 * std::sqrt(static_cast<double>(n)));
  return DenseOperator::trusted(std::move(a), OperatorKind::selfadjoint);
}

Matrix haar_unitary(Rng& rng, Eigen::Index n) {
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double m = std::abs(r(k, k));
    if (m > 0.0) q.col(k) *= r(k, k) / m;
  }
  return q;
}

DenseOperator random_unitary(Rng& rng, Eigen::Index n) {
  return DenseOperator::trusted(haar_unitary(rng, n), OperatorKind::unitary);
}

Vector random_unit_vector(Rng& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = rng.complex_normal();
  return v / v.norm();
}

DenseOperator conjugate(const DenseOperator& a, const Matrix& q) {
  Matrix m = q * a.entries() * q.adjoint();
  if (a.kind() == OperatorKind::selfadjoint) m = 0.5 * (m + m.adjoint()).eval();
  return DenseOperator::trusted(std::move(m), a.kind());
}

DenseOperator with_spectrum(Rng& rng, const std::vector<double>& eigenvalues) {
  const auto n = static_cast<Eigen::Index>(eigenvalues.size());
  Eigen::VectorXd d(n);
  for (Eigen::Index k = 0; k < n; ++k) d(k) = eigenvalues[static_cast<std::size_t>(k)];
  const Matrix diag = d.cast<Complex>().asDiagonal();
  return conjugate(DenseOperator::trusted(diag, OperatorKind::selfadjoint), haar_unitary(rng, n));
}

SiteRange centered_sites(long size) {
  if (size < 2) throw DomainError("jacobi windows need size >= 2");
  const Site first = -size / 2;
  return {first, first + size - 1};
}

SiteRange centered_cmv_range(long size) {
  if (size < 4 || size % 2 != 0) throw DomainError("cmv windows need an even size >= 4");
  const Site first = -2 * (size / 4);
  return {first, first + size};
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids{"thm1", "thm2", "cor21", "eq21", "eq43", "thm42", "thm31", "thm51"};
  return ids;
}

namespace {

constexpr std::array<double, 4> kLambdaCycle{1.0, -1.0, 0.5, -0.5};

std::string resolved_model(const EnsembleConfig& c) {
  if (!c.model.empty()) return c.model;
  if (c.theorem == "thm31") return "anderson";
  if (c.theorem == "thm51") return "cmv-random";
  return "gue";
}

double real_coupling(const EnsembleConfig& c, int trial) {
  return c.lambda ? *c.lambda : kLambdaCycle[static_cast<std::size_t>(trial) % kLambdaCycle.size()];
}

Complex unimodular_coupling(const EnsembleConfig& c, Rng& rng) {
  if (c.phase) return std::polar(1.0, *c.phase);
  Complex lambda = rng.on_circle();
  while (std::abs(lambda - 1.0) <= 1e-12) lambda = rng.on_circle();
  return lambda;
}

// Two spectra sharing k points, all drawn uniformly from [-2, 2].
std::pair<std::vector<double>, std::vector<double>> overlapping_spectra(Rng& rng, long n1, long n2, long k) {
  std::vector<double> s1;
  std::vector<double> s2;
  for (long i = 0; i < k; ++i) {
    const double x = rng.uniform(-2.0, 2.0);
    s1.push_back(x);
    s2.push_back(x);
  }
  for (long i = k; i < n1; ++i) s1.push_back(rng.uniform(-2.0, 2.0));
  for (long i = k; i < n2; ++i) s2.push_back(rng.uniform(-2.0, 2.0));
  return {std::move(s1), std::move(s2)};
}

VerificationReport trial_report(const EnsembleConfig& c, int trial, nlohmann::ordered_json& digest) {
  const std::string& id = c.theorem;
  Rng rng(c.seed, static_cast<std::uint64_t>(trial));

  if (id == "thm1") {
    const long n = c.non_cyclic_demo ? c.size : rng.uniform_int(2, c.size);
    const DenseOperator a = random_selfadjoint(rng, n);
    Vector phi = random_unit_vector(rng, n);
    if (c.non_cyclic_demo) {
      phi = Eigen::SelfAdjointEigenSolver<Matrix>(a.entries()).eigenvectors().col(0);
      digest["non_cyclic_demo"] = true;
    }
    return verify_theorem1(a, phi, real_coupling(c, trial), c.tol);
  }
  if (id == "thm2") {
    const DenseOperator a1 = random_selfadjoint(rng, c.size);
    const DenseOperator a2 = conjugate(a1, haar_unitary(rng, c.size));
    const Vector phi1 = random_unit_vector(rng, c.size);
    const Vector phi2 = random_unit_vector(rng, c.size);
    return verify_theorem2(a1, a2, phi1, phi2, real_coupling(c, trial), c.tol);
  }
  if (id == "cor21" || id == "eq21") {
    const long n1 = rng.uniform_int(2, c.size);
    const long n2 = rng.uniform_int(2, c.size);
    const long k = rng.uniform_int(0, std::min(n1, n2));
    const auto [s1, s2] = overlapping_spectra(rng, n1, n2, k);
    const DenseOperator a1 = with_spectrum(rng, s1);
    const DenseOperator a2 = with_spectrum(rng, s2);
    const Vector phi1 = random_unit_vector(rng, n1);
    const Vector phi2 = random_unit_vector(rng, n2);
    digest["shared_eigenvalues"] = k;
    if (id == "eq21") return verify_overlap_structure(a1, a2, phi1, phi2, c.tol);
    return verify_corollary21(a1, a2, phi1, phi2, real_coupling(c, trial), c.tol);
  }
  if (id == "eq43") {
    const long n = rng.uniform_int(1, c.size);
    const DenseOperator v = random_unitary(rng, n);
    const Vector phi = random_unit_vector(rng, n);
    return verify_unitary_ad(v, phi, unimodular_coupling(c, rng), c.grid, c.tol);
  }
  if (id == "thm42") {
    const DenseOperator a1 = random_selfadjoint(rng, c.size);
    const DenseOperator a2 = conjugate(a1, haar_unitary(rng, c.size));
    const Vector phi1 = random_unit_vector(rng, c.size);
    const Vector phi2 = random_unit_vector(rng, c.size);
    return verify_theorem42(a1, a2, phi1, phi2, unimodular_coupling(c, rng), c.tol);
  }
  const std::string model = resolved_model(c);
  const std::uint64_t window_seed = c.seed + static_cast<std::uint64_t>(trial);
  if (id == "thm31") {
    if (model == "custom-file") return verify_jacobi_simplicity(std::get<JacobiWindow>(*c.window), c.tol);
    const SiteRange s = centered_sites(c.size);
    if (model == "free") return verify_jacobi_simplicity(free_jacobi(s.first, s.last), c.tol);
    digest["window_seed"] = window_seed;
    return verify_jacobi_simplicity(anderson_jacobi(window_seed, s.first, s.last, c.coupling), c.tol);
  }
  if (model == "cmv-file") return verify_cmv_simplicity(std::get<CMVWindow>(*c.window), c.tol);
  const SiteRange s = centered_cmv_range(c.size);
  digest["window_seed"] = window_seed;
  return verify_cmv_simplicity(random_verblunsky(window_seed, s.first, s.last, c.radius), c.tol);
}

}  // namespace

void validate(const EnsembleConfig& c) {
  const auto& ids = theorem_ids();
  if (std::find(ids.begin(), ids.end(), c.theorem) == ids.end()) {
    throw DomainError("unknown theorem id '" + c.theorem + "'");
  }
  if (c.trials < 1) throw DomainError("trials must be at least 1");
  if (c.size < 2) throw DomainError("size must be at least 2");
  if (c.jobs < 1) throw DomainError("jobs must be at least 1");
  if (c.lambda && (!(*c.lambda != 0.0) || !std::isfinite(*c.lambda))) throw DomainError("lambda must be finite and nonzero");
  if (c.phase && std::abs(std::polar(1.0, *c.phase) - 1.0) <= 1e-14) {
    throw DomainError("the unimodular coupling must differ from 1");
  }
  const Tolerances& t = c.tol;
  for (double v : {t.gap, t.identity, t.rank_one, t.resolvent_rank, t.secular, t.krylov, t.orthogonality,
                   t.cayley_exclusion, t.reconstruction}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("tolerances must be positive");
  }
  if (c.non_cyclic_demo && c.theorem != "thm1") throw DomainError("--non-cyclic-demo applies to thm1 only");

  const std::string model = resolved_model(c);
  if (c.theorem == "thm31") {
    if (model != "free" && model != "anderson" && model != "custom-file") {
      throw DomainError("thm31 takes the models free, anderson or custom-file");
    }
    if (model == "custom-file" && !(c.window && std::holds_alternative<JacobiWindow>(*c.window))) {
      throw DomainError("custom-file needs a jacobi window file");
    }
    if (model != "custom-file") centered_sites(c.size);
  } else if (c.theorem == "thm51") {
    if (model != "cmv-random" && model != "cmv-file") throw DomainError("thm51 takes the models cmv-random or cmv-file");
    if (model == "cmv-file" && !(c.window && std::holds_alternative<CMVWindow>(*c.window))) {
      throw DomainError("cmv-file needs a cmv window file");
    }
    if (model == "cmv-random") {
      centered_cmv_range(c.size);
      if (!(c.radius >= 0.0 && c.radius < 1.0)) throw DomainError("radius must lie in [0, 1)");
    }
  } else if (model != "gue") {
    throw DomainError(c.theorem + " draws its own random operators; --model does not apply");
  }
  if (!(c.grid.radius > 0.0 && c.grid.radius < 1.0)) throw DomainError("grid radius must lie in (0, 1)");
  if (c.grid.count < 1) throw DomainError("grid count must be at least 1");
}

VerificationReport run_trial(const EnsembleConfig& c, int trial) {
  nlohmann::ordered_json digest;
  digest["theorem"] = c.theorem;
  digest["model"] = resolved_model(c);
  digest["seed"] = c.seed;
  digest["trial"] = trial;
  digest["size"] = c.size;
  VerificationReport r = trial_report(c, trial, digest);
  // Ensemble identity first, then what the verification recorded.
  for (const auto& item : r.inputs_digest.items()) digest[item.key()] = item.value();
  r.inputs_digest = std::move(digest);
  return r;
}

std::vector<VerificationReport> run_ensemble(const EnsembleConfig& c) {
  validate(c);
  std::vector<VerificationReport> reports(static_cast<std::size_t>(c.trials));
  const int jobs = std::min(c.jobs, c.trials);
  if (jobs == 1) {
    for (int t = 0; t < c.trials; ++t) reports[static_cast<std::size_t>(t)] = run_trial(c, t);
    return reports;
  }

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(c.trials));
  std::vector<std::thread> workers;
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (int t = w; t < c.trials; t += jobs) {
        try {
          reports[static_cast<std::size_t>(t)] = run_trial(c, t);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return reports;
}

}  // namespace rankone
