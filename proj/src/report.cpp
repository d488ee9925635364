#include "rankone/report.hpp"

#include "rankone/io.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace rankone {

const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::at_most:
      return "<=";
    case Comparison::greater_than:
      return ">";
    case Comparison::equals:
      return "==";
    case Comparison::at_least:
      return ">=";
  }
  return "?";
}

Check make_check(std::string name, double measured, Comparison comparison, double threshold) {
  bool pass = false;
  switch (comparison) {
    case Comparison::at_most:
      pass = measured <= threshold;
      break;
    case Comparison::greater_than:
      pass = measured > threshold;
      break;
    case Comparison::equals:
      pass = measured == threshold;
      break;
    case Comparison::at_least:
      pass = measured >= threshold;
      break;
  }
  return Check{std::move(name), measured, threshold, comparison, pass};
}

const char* to_string(Status s) {
  switch (s) {
    case Status::passed:
      return "passed";
    case Status::failed:
      return "failed";
    case Status::inconclusive_precondition:
      return "inconclusive-precondition";
    case Status::skipped:
      return "skipped";
  }
  return "failed";
}

void VerificationReport::finalize() {
  if (status == Status::inconclusive_precondition || status == Status::skipped) return;
  bool all = !checks.empty();
  for (const Check& c : checks) all = all && c.pass;
  status = all ? Status::passed : Status::failed;
}

namespace {

// Infinite gaps (fewer than two clusters) serialize as null.
nlohmann::ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

nlohmann::ordered_json to_json(const VerificationReport& r, const std::optional<std::string>& timestamp) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["theorem_id"] = r.theorem_id;
  j["interpretation"] = kFiniteInterpretation;
  j["status"] = to_string(r.status);
  j["passed"] = r.passed();
  auto checks = nlohmann::ordered_json::array();
  for (const Check& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"measured", number(c.measured)},
                      {"comparison", to_string(c.comparison)},
                      {"threshold", number(c.threshold)},
                      {"pass", c.pass}});
  }
  j["checks"] = std::move(checks);
  auto observations = nlohmann::ordered_json::object();
  for (const Observation& o : r.observations) observations[o.name] = number(o.value);
  j["observations"] = std::move(observations);
  if (!r.note.empty()) j["note"] = r.note;
  j["inputs_digest"] = r.inputs_digest;
  if (timestamp) j["timestamp"] = *timestamp;
  return j;
}

void write_table(std::ostream& out, const VerificationReport& r) {
  out << r.theorem_id << "  " << to_string(r.status) << "  " << r.inputs_digest.dump() << '\n';
  if (!r.note.empty()) out << "  note: " << r.note << '\n';
  for (const Check& c : r.checks) {
    out << "  " << (c.pass ? "ok  " : "FAIL") << "  " << std::left << std::setw(52) << c.name << ' '
        << std::setw(24) << format_double(c.measured) << ' ' << std::setw(2) << to_string(c.comparison) << ' '
        << format_double(c.threshold) << '\n';
  }
  for (const Observation& o : r.observations) {
    out << "  info  " << std::left << std::setw(52) << o.name << ' ' << format_double(o.value) << '\n';
  }
}

}  // namespace rankone
