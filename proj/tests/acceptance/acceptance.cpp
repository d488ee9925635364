// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "rankone/decoupling.hpp"
#include "rankone/ensembles.hpp"
#include "rankone/harness.hpp"
#include "rankone/linalg.hpp"
#include "rankone/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

using namespace rankone;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool pass = o.pass;
  if (budget_seconds > 0 && seconds > budget_seconds) {
    pass = false;
    o.detail += "; over the " + std::to_string(static_cast<int>(budget_seconds)) + " s budget";
  }
  if (!pass) ++failures;
  std::printf("criterion %2d: %s  %-32s %7.2f s  %s\n", id, pass ? "PASS" : "FAIL", title, seconds, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

struct Tally {
  int passed = 0, failed = 0, inconclusive = 0, skipped = 0;
  std::map<std::string, double> worst;  // largest measured value per at_most check
  std::vector<int> failed_trials;

  explicit Tally(const std::vector<VerificationReport>& reports) {
    for (std::size_t t = 0; t < reports.size(); ++t) {
      const VerificationReport& r = reports[t];
      switch (r.status) {
        case Status::passed: ++passed; break;
        case Status::failed: ++failed; failed_trials.push_back(static_cast<int>(t)); break;
        case Status::inconclusive_precondition: ++inconclusive; break;
        case Status::skipped: ++skipped; break;
      }
      for (const Check& c : r.checks) {
        if (c.comparison != Comparison::at_most) continue;
        double& w = worst.try_emplace(c.name, 0.0).first->second;
        w = std::max(w, c.measured);
      }
    }
  }
  int total() const { return passed + failed + inconclusive + skipped; }
  std::string summary() const {
    std::string s = std::to_string(passed) + "/" + std::to_string(total() - skipped) + " passed";
    if (inconclusive) s += ", " + std::to_string(inconclusive) + " inconclusive";
    if (skipped) s += ", " + std::to_string(skipped) + " skipped";
    if (!failed_trials.empty()) {
      s += ", failed trials";
      for (std::size_t k = 0; k < std::min<std::size_t>(failed_trials.size(), 5); ++k) {
        s += " " + std::to_string(failed_trials[k]);
      }
      if (failed_trials.size() > 5) s += " ...";
    }
    return s;
  }
  double worst_of(const std::string& prefix) const {
    double w = 0;
    for (const auto& [name, v] : worst) {
      if (name.rfind(prefix, 0) == 0) w = std::max(w, v);
    }
    return w;
  }
};

std::string serialize(const std::vector<VerificationReport>& reports) {
  std::string s;
  for (const auto& r : reports) s += to_json(r).dump() + "\n";
  return s;
}

EnsembleConfig config(const std::string& theorem, int trials, long size, std::uint64_t seed) {
  EnsembleConfig c;
  c.theorem = theorem;
  c.trials = trials;
  c.size = size;
  c.seed = seed;
  return c;
}

// Every ensemble run is recorded so criterion 10 can repeat it.
std::vector<std::pair<EnsembleConfig, std::string>> recorded;

std::vector<VerificationReport> run_recorded(const EnsembleConfig& c) {
  auto reports = run_ensemble(c);
  recorded.emplace_back(c, serialize(reports));
  return reports;
}

DenseOperator diag(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double x : values) v(k++) = x;
  return DenseOperator(v.asDiagonal().toDenseMatrix(), OperatorKind::selfadjoint);
}

Vector flat2() { return Vector::Constant(2, 1.0 / std::sqrt(2.0)); }

}  // namespace

int main() {
  std::printf("%s\n", kFiniteInterpretation);

  criterion(1, "jacobi decoupling exactness", 10, [] {
    Rng rng(1);
    double worst = 0;
    int bad = 0;
    for (int t = 0; t < 500; ++t) {
      const long n = rng.uniform_int(2, 200);
      const Site first = -rng.uniform_int(1, n - 1);
      JacobiWindow w = free_jacobi(first, first + n - 1);
      for (double& b : w.b) b = rng.uniform(-3.0, 3.0);
      for (double& a : w.a) a = rng.uniform(0.05, 3.0);
      const DenseOperator j = materialize_jacobi(w);
      const double rel = max_abs(j.entries() - decouple_jacobi(w).reconstruct().entries()) / infinity_norm(j.entries());
      worst = std::max(worst, rel);
      bad += rel <= 0x1.0p-50 ? 0 : 1;
    }
    return Outcome{bad == 0, "500 windows, worst |J - recon| / ||J|| = " + fmt(worst)};
  });

  criterion(2, "cmv rank-one decoupling", 60, [] {
    Rng rng(2);
    double worst_sigma = 0, worst_unit = 0;
    int bad = 0;
    for (int t = 0; t < 500; ++t) {
      const long dim = 2 * rng.uniform_int(2, 100);
      const Site first = -2 * rng.uniform_int(1, dim / 2 - 1);
      const CMVWindow w = random_verblunsky(rng.uniform_int(0, 1L << 40), first, first + dim, 0.9);
      const CMVDecoupling d = decouple_cmv(w);
      const double sigma = second_singular_value(d.difference.entries()) / operator_norm(d.e);
      const double unit = unitarity_residual(d.e_tilde.entries());
      worst_sigma = std::max(worst_sigma, sigma);
      worst_unit = std::max(worst_unit, unit);
      bad += sigma <= 1e-12 && unit <= 1e-12 ? 0 : 1;
    }
    return Outcome{bad == 0, "500 windows, worst sigma2/||E|| = " + fmt(worst_sigma) +
                                 ", worst unitarity = " + fmt(worst_unit)};
  });

  criterion(3, "theorem 1 finite analog", 60, [] {
    const Tally t(run_recorded(config("thm1", 1000, 50, 0)));
    return Outcome{t.passed == 1000, t.summary() + "; worst secular " + fmt(t.worst_of("max |F(E)"))};
  });

  criterion(4, "theorem 2 finite analog", 60, [] {
    EnsembleConfig c = config("thm2", 1000, 20, 42);
    c.lambda = 1.0;
    const Tally t(run_recorded(c));

    const Vector phi = flat2();
    const EigenDecomposition d = eigendecompose(apply_rank_one(direct_sum(diag({0, 1}), diag({0, 1})),
                                                               {concat(phi, phi), 1.0}));
    const double want[] = {0.0, (3 - std::sqrt(5.0)) / 2, 1.0, (3 + std::sqrt(5.0)) / 2};
    double err = 0;
    for (int k = 0; k < 4; ++k) err = std::max(err, std::abs(d.values(k) - want[k]));
    const bool hand = err <= 1e-12 && verify_theorem2(diag({0, 1}), diag({0, 1}), phi, phi, 1.0).passed();
    return Outcome{t.passed == 1000 && hand, t.summary() + "; handcrafted spectrum error " + fmt(err)};
  });

  criterion(5, "corollary 2.1", 0, [] {
    const Vector phi = flat2();
    int hand = 0;
    hand += verify_corollary21(diag({0, 1}), diag({0, 1}), phi, phi, 1.0).passed();
    hand += verify_corollary21(diag({0, 2}), diag({1, 3}), phi, phi, 1.0).passed();
    hand += verify_corollary21(diag({0, 1}), diag({100, 101}), phi, phi, 1.0).passed();
    const Tally t(run_recorded(config("cor21", 200, 20, 5)));
    return Outcome{hand == 3 && t.passed == 200, std::to_string(hand) + "/3 handcrafted, " + t.summary()};
  });

  criterion(6, "overlap structure", 0, [] {
    const Tally t(run_recorded(config("eq21", 200, 20, 6)));
    return Outcome{t.passed == 200, t.summary() + "; worst orthogonality " + fmt(t.worst_of("max |<L1")) +
                                        ", worst weight error " + fmt(t.worst_of("max |mu_psi"))};
  });

  criterion(7, "unitary schur identity", 0, [] {
    EnsembleConfig c = config("eq43", 200, 32, 7);
    c.grid = {0.9, 128};
    const Tally t(run_recorded(c));

    const DenseOperator v(Matrix::Identity(1, 1), OperatorKind::unitary);
    const DenseOperator w = unitary_rank_one(v, Vector::Ones(1), Complex{0, 1});
    const AtomicSpectralMeasure mu = spectral_measure(eigendecompose(w), Vector::Ones(1));
    double scalar = 0;
    for (int k = 0; k < 128; ++k) {
      const Complex z = std::polar(0.9, 2 * std::numbers::pi * k / 128);
      scalar = std::max(scalar, std::abs(schur_function(mu, z) - Complex{0, -1}));
    }
    return Outcome{t.passed == 200 && scalar <= 4 * 0x1.0p-52,
                   t.summary() + "; worst grid residual " + fmt(t.worst_of("max |g(z)")) + ", scalar |g + i| " +
                       fmt(scalar)};
  });

  criterion(8, "cayley pipeline", 0, [] {
    const Tally t(run_recorded(config("thm42", 100, 10, 8)));
    const double skip_rate = double(t.skipped) / t.total();
    return Outcome{t.failed == 0 && t.inconclusive == 0 && skip_rate < 0.05,
                   t.summary() + "; skip rate (eigenvalue at +1) " + fmt(skip_rate) + ", worst sigma2(D) " +
                       fmt(t.worst_of("second singular value"))};
  });

  criterion(9, "jacobi and cmv end to end", 300, [] {
    EnsembleConfig j = config("thm31", 20, 500, 1);
    j.model = "anderson";
    j.coupling = 1.0;
    EnsembleConfig c = config("thm51", 20, 128, 1);
    c.radius = 0.9;
    const auto jr = run_recorded(j);
    const auto cr = run_recorded(c);
    const Tally tj(jr), tc(cr);

    // failing checks by name across both runs
    std::map<std::string, int> failing;
    for (const auto* reports : {&jr, &cr}) {
      for (const auto& r : *reports) {
        for (const Check& ch : r.checks) failing[ch.name] += ch.pass ? 0 : 1;
      }
    }
    std::string which;
    for (const auto& [name, count] : failing) {
      if (count) which += "; '" + name + "' failed " + std::to_string(count) + "x";
    }
    return Outcome{tj.passed == 20 && tc.passed == 20, "anderson n=500 " + tj.summary() + ", cmv dim 128 " +
                                                           tc.summary() + which};
  });

  criterion(10, "determinism", 0, [] {
    int same = 0;
    for (auto [c, first] : recorded) {
      same += serialize(run_ensemble(c)) == first;
      if (c.theorem == "thm1") {
        c.jobs = 2;
        same += serialize(run_ensemble(c)) == first ? 0 : -1000;
      }
    }
    return Outcome{same == static_cast<int>(recorded.size()),
                   std::to_string(same) + "/" + std::to_string(recorded.size()) +
                       " ensembles byte-identical on rerun (thm1 also with 2 jobs)"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
