#include "cli.hpp"

#include "rankone/decoupling.hpp"
#include "rankone/ensembles.hpp"
#include "rankone/errors.hpp"
#include "rankone/io.hpp"
#include "rankone/linalg.hpp"
#include "rankone/spectral.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <variant>

namespace rankone::cli {
namespace {

using json = nlohmann::ordered_json;

// Writes to `path` when given, else to the fallback stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw FormatError("cannot write " + path);
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

// ---------------------------------------------------------------------------
// construct

struct ConstructOptions {
  std::string model;
  long size = 20;
  std::uint64_t seed = 0;
  double coupling = 1.0;
  double radius = 0.9;
  std::string out;
};

int cmd_construct(const ConstructOptions& o, std::ostream& out, std::ostream& err) {
  Window w;
  json summary;
  summary["schema"] = kReportSchema;
  summary["model"] = o.model;
  if (o.model == "cmv-random") {
    const SiteRange r = centered_cmv_range(o.size);
    w = random_verblunsky(o.seed, r.first, r.last, o.radius);
    summary["seed"] = o.seed;
    summary["radius"] = o.radius;
    summary["dimension"] = o.size;
    summary["norm_estimate"] = 1.0;
  } else {
    const SiteRange r = centered_sites(o.size);
    const JacobiWindow j = o.model == "free" ? free_jacobi(r.first, r.last)
                                              : anderson_jacobi(o.seed, r.first, r.last, o.coupling);
    if (o.model == "anderson") {
      summary["seed"] = o.seed;
      summary["coupling"] = o.coupling;
    }
    summary["dimension"] = j.dimension();
    summary["norm_estimate"] = j.norm_estimate();
    w = j;
  }
  if (o.out.empty()) {
    write_window(out, w);
    err << summary.dump() << '\n';
  } else {
    write_window_file(o.out, w);
    summary["file"] = o.out;
    out << summary.dump() << '\n';
  }
  return kAllPassed;
}

// ---------------------------------------------------------------------------
// decouple

struct DecoupleOptions {
  std::string in;
  Site cut = -1;
  std::string out_prefix;
  std::string format = "json";
  Tolerances tol;
};

json decouple_report(const JacobiWindow& w, const DecoupleOptions& o) {
  const JacobiDecoupling dec = decouple_jacobi(w, o.cut);
  const DenseOperator j = materialize_jacobi(w);
  const double residual = max_abs(j.entries() - dec.reconstruct().entries());
  const double residual_threshold = o.tol.reconstruction * infinity_norm(j.entries());
  const double sigma2 = second_singular_value(j.entries() - direct_sum(dec.a1, dec.a2).entries());
  const double sigma2_threshold = o.tol.rank_one * operator_norm(j);
  json r;
  r["schema"] = kReportSchema;
  r["kind"] = "jacobi";
  r["cut"] = dec.cut;
  r["dimension"] = j.dimension();
  r["lambda"] = dec.lambda;
  r["reconstruction_residual"] = residual;
  r["reconstruction_threshold"] = residual_threshold;
  r["second_singular_value"] = sigma2;
  r["rank_one_threshold"] = sigma2_threshold;
  r["passed"] = residual <= residual_threshold && sigma2 <= sigma2_threshold;
  r["left_sites"] = {w.n_min, dec.cut};
  r["right_sites"] = {dec.cut + 1, w.n_max};
  return r;
}

json decouple_report(const CMVWindow& w, const DecoupleOptions& o) {
  const CMVDecoupling dec = decouple_cmv(w, o.cut);
  const double sigma2 = second_singular_value(dec.difference.entries());
  const double sigma2_threshold = o.tol.rank_one * operator_norm(dec.e);
  const double unitarity = unitarity_residual(dec.e_tilde.entries());
  json r;
  r["schema"] = kReportSchema;
  r["kind"] = "cmv";
  r["cut"] = dec.cut;
  r["dimension"] = dec.e.dimension();
  r["x"] = {dec.x.real(), dec.x.imag()};
  r["second_singular_value"] = sigma2;
  r["rank_one_threshold"] = sigma2_threshold;
  r["unitarity_residual"] = unitarity;
  r["unitarity_threshold"] = o.tol.rank_one;
  r["passed"] = sigma2 <= sigma2_threshold && unitarity <= o.tol.rank_one;
  r["left_sites"] = {w.j_min, dec.cut};
  r["right_sites"] = {dec.cut + 1, w.j_max - 1};
  return r;
}

int cmd_decouple(const DecoupleOptions& o, std::ostream& out) {
  const Window w = read_window_file(o.in);
  json r = std::visit([&o](const auto& window) { return decouple_report(window, o); }, w);
  if (!o.out_prefix.empty()) {
    const auto [left, right] = std::visit(
        [&o](const auto& window) {
          auto halves = decoupled_halves(window, o.cut);
          return std::pair<Window, Window>{std::move(halves.first), std::move(halves.second)};
        },
        w);
    write_window_file(o.out_prefix + ".left.txt", left);
    write_window_file(o.out_prefix + ".right.txt", right);
    r["left_file"] = o.out_prefix + ".left.txt";
    r["right_file"] = o.out_prefix + ".right.txt";
  }
  if (o.format == "table") {
    for (const auto& item : r.items()) out << item.key() << '\t' << item.value().dump() << '\n';
  } else {
    out << r.dump() << '\n';
  }
  return r["passed"].get<bool>() ? kAllPassed : kVerificationFailed;
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumOptions {
  std::string in;
  std::string vector;
  std::string out;
  std::string measure_out;
  double gap = kDefaultRelativeMergeTol;
  double merge = kDefaultRelativeMergeTol;
  double weight_floor = kDefaultRelativeWeightFloor;
  std::optional<double> eigen_tol;
};

DenseOperator materialize(const Window& w) {
  return std::visit(
      [](const auto& window) {
        if constexpr (std::is_same_v<std::decay_t<decltype(window)>, JacobiWindow>) {
          return materialize_jacobi(window);
        } else {
          return materialize_cmv(window);
        }
      },
      w);
}

Vector named_vector(const DenseOperator& op, const std::string& spec) {
  const Eigen::Index n = op.dimension();
  if (spec == "uniform") return Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  if (spec.rfind("delta:", 0) == 0) {
    const std::string site_text = spec.substr(6);
    Site site = 0;
    const auto [ptr, ec] = std::from_chars(site_text.data(), site_text.data() + site_text.size(), site);
    if (ec != std::errc{} || ptr != site_text.data() + site_text.size()) {
      throw DomainError("--vector delta:<site> needs an integer site, got '" + site_text + "'");
    }
    const auto index = op.index_of(site);
    if (!index) throw DomainError("site " + site_text + " is outside the window");
    Vector v = Vector::Zero(n);
    v(*index) = 1.0;
    return v;
  }
  throw DomainError("--vector takes delta:<site> or uniform");
}

int cmd_spectrum(const SpectrumOptions& o, std::ostream& out) {
  const DenseOperator op = materialize(read_window_file(o.in));
  const EigenDecomposition d = eigendecompose(op, o.eigen_tol);
  const double scale = tolerance_scale(d.values, d.support);
  const MultiplicityProfile profile = multiplicity_profile(d, o.gap * scale);

  Sink sink(o.out, out);
  std::ostream& s = sink.get();
  s << "# kind: " << to_string(d.support) << '\n';
  s << "# dimension: " << d.size() << '\n';
  s << "# min_gap: " << format_double(profile.min_gap) << '\n';
  s << "# max_multiplicity: " << profile.max_multiplicity() << '\n';
  s << "# eigen_residual: " << format_double(d.residual) << '\n';
  s << "index,value_re,value_im,cluster,multiplicity\n";
  std::vector<std::pair<int, int>> cluster_of(static_cast<std::size_t>(d.size()));
  for (std::size_t c = 0; c < profile.clusters.size(); ++c) {
    for (Eigen::Index k : profile.clusters[c].members) {
      cluster_of[static_cast<std::size_t>(k)] = {static_cast<int>(c), profile.clusters[c].multiplicity()};
    }
  }
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    const auto [cluster, multiplicity] = cluster_of[static_cast<std::size_t>(k)];
    s << k << ',' << format_double(d.values(k).real()) << ',' << format_double(d.values(k).imag()) << ','
      << cluster << ',' << multiplicity << '\n';
  }

  if (!o.vector.empty()) {
    const Vector phi = named_vector(op, o.vector);
    const AtomicSpectralMeasure mu =
        spectral_measure(d, phi, {o.merge * scale, o.weight_floor * phi.squaredNorm()});
    if (o.measure_out.empty()) {
      s << '\n';
      write_measure_csv(s, mu);
    } else {
      Sink m(o.measure_out, out);
      write_measure_csv(m.get(), mu);
    }
  }
  return kAllPassed;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  EnsembleConfig config;
  std::string in;
  std::string out;
  std::string format = "json";
  bool no_timestamp = false;
};

// Least favourable measured value per check name, in order of appearance.
json worst_checks(const std::vector<VerificationReport>& reports) {
  std::vector<std::string> order;
  std::map<std::string, double> worst;
  for (const VerificationReport& r : reports) {
    for (const Check& c : r.checks) {
      const bool larger_is_worse = c.comparison == Comparison::at_most;
      const bool smaller_is_worse = c.comparison == Comparison::greater_than || c.comparison == Comparison::at_least;
      auto it = worst.find(c.name);
      if (it == worst.end()) {
        order.push_back(c.name);
        worst[c.name] = c.measured;
      } else if ((larger_is_worse && c.measured > it->second) || (smaller_is_worse && c.measured < it->second)) {
        it->second = c.measured;
      } else if (c.comparison == Comparison::equals && c.measured != c.threshold) {
        it->second = c.measured;
      }
    }
  }
  json j = json::object();
  for (const std::string& name : order) j[name] = number(worst[name]);
  return j;
}

int cmd_verify(VerifyOptions o, std::ostream& out) {
  EnsembleConfig& c = o.config;
  if (!o.in.empty()) {
    c.window = read_window_file(o.in);
    if (c.model.empty()) c.model = std::holds_alternative<JacobiWindow>(*c.window) ? "custom-file" : "cmv-file";
  }
  const std::vector<VerificationReport> reports = run_ensemble(c);
  const std::optional<std::string> timestamp = o.no_timestamp ? std::nullopt : std::optional(utc_timestamp());

  int passed = 0;
  int failed = 0;
  int inconclusive = 0;
  int skipped = 0;
  for (const VerificationReport& r : reports) {
    switch (r.status) {
      case Status::passed: ++passed; break;
      case Status::failed: ++failed; break;
      case Status::inconclusive_precondition: ++inconclusive; break;
      case Status::skipped: ++skipped; break;
    }
  }

  Sink sink(o.out, out);
  std::ostream& s = sink.get();
  const double skip_rate = static_cast<double>(skipped) / static_cast<double>(reports.size());
  if (o.format == "table") {
    for (const VerificationReport& r : reports) write_table(s, r);
    s << c.theorem << ": " << passed << '/' << reports.size() - static_cast<std::size_t>(skipped)
      << " non-skipped trials passed (" << failed << " failed, " << inconclusive << " inconclusive, " << skipped
      << " skipped)\n";
  } else {
    for (const VerificationReport& r : reports) s << to_json(r, timestamp).dump() << '\n';
    json summary;
    summary["theorem_id"] = c.theorem;
    summary["trials"] = reports.size();
    summary["passed"] = passed;
    summary["failed"] = failed;
    summary["inconclusive_precondition"] = inconclusive;
    summary["skipped"] = skipped;
    summary["skip_rate"] = skip_rate;
    summary["worst_checks"] = worst_checks(reports);
    if (timestamp) summary["timestamp"] = *timestamp;
    s << json{{"summary", summary}}.dump() << '\n';
  }
  return failed + inconclusive == 0 ? kAllPassed : kVerificationFailed;
}

void add_tolerance_flags(CLI::App* cmd, Tolerances& t) {
  const auto positive = CLI::PositiveNumber;
  cmd->add_option("--tol-gap", t.gap, "relative gap / matching threshold")->check(positive)->capture_default_str();
  cmd->add_option("--tol-identity", t.identity, "identity residual threshold")->check(positive)->capture_default_str();
  cmd->add_option("--tol-rank-one", t.rank_one, "relative second singular value threshold")
      ->check(positive)
      ->capture_default_str();
  cmd->add_option("--tol-resolvent-rank", t.resolvent_rank, "resolvent difference rank threshold")
      ->check(positive)
      ->capture_default_str();
  cmd->add_option("--tol-secular", t.secular, "secular equation residual")->check(positive)->capture_default_str();
  cmd->add_option("--tol-krylov", t.krylov, "Arnoldi breakdown cutoff")->check(positive)->capture_default_str();
  cmd->add_option("--tol-orthogonality", t.orthogonality, "cyclic subspace orthogonality")
      ->check(positive)
      ->capture_default_str();
  cmd->add_option("--tol-cayley-exclusion", t.cayley_exclusion, "distance of an eigenvalue to +1")
      ->check(positive)
      ->capture_default_str();
  cmd->add_option("--tol-reconstruction", t.reconstruction, "relative Jacobi reconstruction residual")
      ->check(positive)
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank-one perturbations, decouplings and spectral simplicity checks on finite windows"};
  app.name(args.empty() ? "rankone" : args.front());
  app.require_subcommand(1);

  ConstructOptions construct;
  auto* c = app.add_subcommand("construct", "write an operator window file");
  c->add_option("--model", construct.model, "free | anderson | cmv-random")
      ->required()
      ->check(CLI::IsMember({"free", "anderson", "cmv-random"}));
  c->add_option("--size", construct.size, "number of sites")->check(CLI::Range(2L, 1L << 20))->capture_default_str();
  c->add_option("--seed", construct.seed)->capture_default_str();
  c->add_option("--coupling", construct.coupling, "Anderson disorder strength")->capture_default_str();
  c->add_option("--radius", construct.radius, "Verblunsky disc radius")->capture_default_str();
  c->add_option("--out", construct.out, "window file (default: stdout)");

  DecoupleOptions decouple;
  auto* d = app.add_subcommand("decouple", "split a window into a rank-one coupled direct sum");
  d->add_option("--in", decouple.in, "window file")->required();
  d->add_option("--cut", decouple.cut, "Jacobi bond or odd CMV index")->capture_default_str();
  d->add_option("--out-prefix", decouple.out_prefix, "write <prefix>.left.txt and <prefix>.right.txt");
  d->add_option("--format", decouple.format)->check(CLI::IsMember({"json", "table"}))->capture_default_str();
  add_tolerance_flags(d, decouple.tol);

  SpectrumOptions spectrum;
  auto* s = app.add_subcommand("spectrum", "eigenvalues, multiplicities and spectral measures of a window");
  s->add_option("--in", spectrum.in, "window file")->required();
  s->add_option("--vector", spectrum.vector, "delta:<site> | uniform");
  s->add_option("--out", spectrum.out, "eigenvalue CSV (default: stdout)");
  s->add_option("--measure-out", spectrum.measure_out, "measure CSV (default: appended to the eigenvalue CSV)");
  s->add_option("--tol-gap", spectrum.gap, "relative multiplicity gap")->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--tol-merge", spectrum.merge, "relative atom merge tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s->add_option("--tol-weight-floor", spectrum.weight_floor, "relative atom weight floor")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  s->add_option("--tol-eigen", spectrum.eigen_tol, "absolute eigen-residual bound")->check(CLI::PositiveNumber);

  VerifyOptions verify;
  EnsembleConfig& e = verify.config;
  auto* v = app.add_subcommand("verify", "run a seeded verification ensemble");
  v->add_option("--theorem", e.theorem, "thm1 | thm2 | cor21 | eq21 | eq43 | thm42 | thm31 | thm51")->required();
  v->add_option("--trials", e.trials)->check(CLI::PositiveNumber)->capture_default_str();
  v->add_option("--size", e.size, "dimension bound (random ensembles) or window size")
      ->check(CLI::Range(2L, 1L << 20))
      ->capture_default_str();
  v->add_option("--seed", e.seed)->capture_default_str();
  v->add_option("--lambda", e.lambda, "real coupling (default cycles 1, -1, 0.5, -0.5)");
  v->add_option("--phase", e.phase, "argument of the unimodular coupling (default random)");
  v->add_option("--model", e.model, "thm31: free | anderson | custom-file; thm51: cmv-random | cmv-file");
  v->add_option("--in", verify.in, "window file for custom-file / cmv-file");
  v->add_option("--coupling", e.coupling, "Anderson disorder strength")->capture_default_str();
  v->add_option("--radius", e.radius, "Verblunsky disc radius")->capture_default_str();
  v->add_option("--grid-radius", e.grid.radius)->capture_default_str();
  v->add_option("--grid-count", e.grid.count)->capture_default_str();
  v->add_option("--jobs", e.jobs, "worker threads; output order is by trial")->check(CLI::PositiveNumber)->capture_default_str();
  v->add_flag("--non-cyclic-demo", e.non_cyclic_demo, "thm1 with phi an eigenvector of A");
  v->add_flag("--no-timestamp", verify.no_timestamp);
  v->add_option("--format", verify.format)->check(CLI::IsMember({"json", "table"}))->capture_default_str();
  v->add_option("--out", verify.out, "report stream (default: stdout)");
  add_tolerance_flags(v, e.tol);

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kAllPassed : kUsageError;
  }

  try {
    if (*c) return cmd_construct(construct, out, err);
    if (*d) return cmd_decouple(decouple, out);
    if (*s) return cmd_spectrum(spectrum, out);
    return cmd_verify(verify, out);
  } catch (const DomainError& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsageError;
  } catch (const NumericalError& ex) {
    err << "numerical error: " << ex.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace rankone::cli
