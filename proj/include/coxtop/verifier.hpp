#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace coxtop {

constexpr const char* kReportSchema = "coxtop-report/1";
constexpr const char* kToolVersion = "0.1.0";

const std::vector<std::string>& suite_names();

struct RunConfig {
  std::string system = "A2";  // preset name or matrix file path
  std::vector<std::string> suites;  // empty means every suite
  std::optional<int> max_length;    // braid length; default depends on the system
  int max_letters = 5;              // truncation letters
  int truncation_length = 4;        // l(r(w)) bound of the truncations
  double time_budget = 0;           // seconds per suite, 0 for none
  std::uint64_t seed = 0;
  bool timing = false;              // wall-clock fields make reports nondeterministic

  int effective_max_length() const;
  std::vector<std::string> effective_suites() const;
};

// key = value lines, `#` comments. Keys: system, suites, max_length, max_letters,
// truncation_length, time_budget, seed, timing. Throws ConfigError.
RunConfig parse_config(const std::string& text);
// Throws ConfigError on unknown suites or nonpositive budgets.
void validate_config(const RunConfig& cfg);

enum class Verdict { Pass, Fail, Unknown };
const char* verdict_name(Verdict v);

struct CertificateRecord {
  std::string name;  // fn, f, fr, fr_fn, ...
  std::string level;
  std::string witness_kind;
  long witness = 0;
  std::string detail;
};

struct CheckRecord {
  std::string name;
  long instances = 0, failures = 0;
  std::string first_failure;
};

struct InstanceResult {
  std::string id;  // <suite>:<subject>
  Verdict verdict = Verdict::Pass;
  std::string subject;  // braid literal, window, ...
  std::string word;
  std::vector<std::string> patterns;
  std::vector<CertificateRecord> certificates;
  std::vector<CheckRecord> checks;
  std::string detail;
  std::optional<double> seconds;
};

struct Summary {
  long pass = 0, fail = 0, unknown = 0;
};

struct SuiteResult {
  std::string name;
  std::vector<InstanceResult> instances;
  Summary summary;
  std::optional<double> seconds;
};

struct Report {
  std::string schema = kReportSchema;
  std::string version = kToolVersion;
  RunConfig config;
  std::string system_label;
  std::vector<SuiteResult> suites;
  Summary summary;
  std::vector<std::string> notes;

  int exit_code() const { return summary.fail == 0 ? 0 : 1; }
  const InstanceResult* find(const std::string& id) const;
};

// Throws ConfigError; per-instance budget overruns are recorded as unknown.
Report run(const RunConfig& cfg);

std::string report_to_json(const Report& r);
// Throws MalformedInput.
Report report_from_json(const std::string& text);
// Throws UnknownInstance.
std::string explain(const Report& r, const std::string& id);

}  // namespace coxtop
