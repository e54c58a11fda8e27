#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oneid/instance.hpp"
#include "oneid/confidence.hpp"

namespace oneid {

enum class Algorithm { Pseeb, UniformLil };

const char* to_string(Algorithm algorithm);
// "pseeb" or "uniform-lil"; throws std::invalid_argument otherwise.
Algorithm parse_algorithm(const std::string& name);

struct ExperimentConfig {
  BanditInstance instance{{1.0, 0.0}, 0.5};
  // Where the instance was loaded from; empty when given inline.
  std::string instance_path;
  Algorithm algorithm = Algorithm::Pseeb;
  std::vector<double> deltas{0.1};
  double c = kDefaultC;
  std::uint64_t trials = 100;
  std::uint64_t base_seed = 1;
  std::uint64_t safety_cap = 100'000'000;
  // Summary CSV path; empty means no file is written by the CLI.
  std::string output;
  bool emit_traces = false;
  // Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
  bool check_invariants = false;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Throws std::invalid_argument describing the first problem found.
void validate(const ExperimentConfig& config);

enum class TrialStatus { Terminated, CapExceeded, Failed };
const char* to_string(TrialStatus status);

struct TrialRecord {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  double delta = 0.0;
  Algorithm algorithm = Algorithm::Pseeb;
  TrialStatus status = TrialStatus::Terminated;
  std::optional<std::size_t> answer;  // nullopt = None
  bool correct = false;
  std::uint64_t tau = 0;
  // Fresh draws per bracket copy (PSEEB) or per arm (baseline).
  std::vector<std::uint64_t> draws;
  std::size_t winning_bracket = 0;
  std::uint64_t invariant_violations = 0;
  double wall_time = 0.0;  // seconds
};

// Correct answers: an arm with mean >= mu0 on a positive instance, None on a
// negative one.
bool is_correct(const BanditInstance& instance, const std::optional<std::size_t>& answer);

struct SummaryRow {
  double delta = 0.0;
  Algorithm algorithm = Algorithm::Pseeb;
  std::uint64_t trials = 0;
  // Anomalous trials (cap exceeded, schedule overflow) count as errors.
  std::uint64_t errors = 0;
  double error_rate = 0.0;
  double error_lo = 0.0;  // 95% Wilson interval
  double error_hi = 0.0;
  double mean_tau = 0.0;
  double tau_se = 0.0;
  double median_tau = 0.0;
  double max_tau = 0.0;
  std::uint64_t anomalies = 0;
  std::uint64_t invariant_violations = 0;
};

struct ExperimentResult {
  std::vector<SummaryRow> rows;          // one per delta, config order
  std::vector<TrialRecord> records;      // delta-major, then trial index
  std::string traces;                    // concatenated per-step traces if requested
};

// Trial i (for every delta) uses seed derive_seed(base_seed, i); results do
// not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Runs a single trial; exposed for tests and benchmarks.
TrialRecord run_trial(const ExperimentConfig& config, double delta, std::uint64_t index,
                      std::ostream* trace = nullptr);

SummaryRow summarize_trials(double delta, Algorithm algorithm,
                            const std::vector<TrialRecord>& records);

// Column order:
// algorithm,delta,trials,errors,error_rate,error_lo,error_hi,mean_tau,tau_se,
// median_tau,max_tau,anomalies,invariant_violations
extern const char* const kSummaryCsvHeader;
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

// One JSON object per line. Wall time is left out unless asked for, so
// repeated runs stay byte-identical.
void write_trial_ndjson(std::ostream& out, const std::vector<TrialRecord>& records,
                        bool include_wall_time = false);

void write_summary_json(std::ostream& out, const ExperimentConfig& config,
                        const std::vector<SummaryRow>& rows);

}  // namespace oneid
