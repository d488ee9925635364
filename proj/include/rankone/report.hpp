#pragma once

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rankone {

enum class Comparison { at_most, greater_than, equals, at_least };

const char* to_string(Comparison c);

struct Check {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  Comparison comparison = Comparison::at_most;
  bool pass = false;
};

/// Evaluates `measured <cmp> threshold`. NaN never passes.
Check make_check(std::string name, double measured, Comparison comparison, double threshold);

enum class Status { passed, failed, inconclusive_precondition, skipped };

const char* to_string(Status s);

struct Observation {
  std::string name;
  double value = 0.0;
};

struct VerificationReport {
  std::string theorem_id;
  Status status = Status::failed;
  std::vector<Check> checks;
  std::vector<Observation> observations;
  nlohmann::ordered_json inputs_digest = nlohmann::ordered_json::object();
  std::string note;

  bool passed() const { return status == Status::passed; }

  /// passed iff every check passes; keeps inconclusive/skipped untouched.
  void finalize();
};

/// Stated at the head of every serialized report.
inline constexpr const char* kFiniteInterpretation =
    "finite carrier: every spectral measure is pure point, so 'simple singular spectrum' is tested as "
    "'all eigenvalues simple' and 'disjoint singular measures' as 'no common eigenvalues'";

inline constexpr int kReportSchema = 1;

/// One JSON object per report. `timestamp` is included only when given.
nlohmann::ordered_json to_json(const VerificationReport& r, const std::optional<std::string>& timestamp = std::nullopt);

/// Human-readable table, one row per check.
void write_table(std::ostream& out, const VerificationReport& r);

}  // namespace rankone
