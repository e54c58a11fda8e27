#include "oneid/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "format.hpp"
#include "oneid/baseline.hpp"
#include "oneid/pseeb.hpp"
#include "oneid/rng.hpp"
#include "oneid/statistics.hpp"

namespace oneid {

using detail::format_double;
using detail::json_double;

const char* const kSummaryCsvHeader =
    "algorithm,delta,trials,errors,error_rate,error_lo,error_hi,mean_tau,tau_se,"
    "median_tau,max_tau,anomalies,invariant_violations";

const char* to_string(Algorithm algorithm) {
  return algorithm == Algorithm::Pseeb ? "pseeb" : "uniform-lil";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "pseeb") return Algorithm::Pseeb;
  if (name == "uniform-lil") return Algorithm::UniformLil;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

const char* to_string(TrialStatus status) {
  switch (status) {
    case TrialStatus::Terminated: return "terminated";
    case TrialStatus::CapExceeded: return "cap_exceeded";
    case TrialStatus::Failed: return "failed";
  }
  return "?";
}

void validate(const ExperimentConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (config.deltas.empty()) throw std::invalid_argument("at least one delta is required");
  for (double d : config.deltas) {
    if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("every delta must lie in (0, 1)");
  }
  if (!(config.c > 1.0) || !std::isfinite(config.c)) {
    throw std::invalid_argument("C must be a finite value greater than 1");
  }
  if (config.safety_cap < 1) throw std::invalid_argument("safety cap must be positive");
  require_simulatable(config.instance);
}

bool is_correct(const BanditInstance& instance, const std::optional<std::size_t>& answer) {
  const InstanceClass cls = classify(instance);
  if (cls.kind == InstanceKind::Positive) {
    return answer.has_value() && instance.mean(*answer) >= instance.mu0();
  }
  if (cls.kind == InstanceKind::Negative) return !answer.has_value();
  return false;
}

TrialRecord run_trial(const ExperimentConfig& config, double delta, std::uint64_t index,
                      std::ostream* trace) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = derive_seed(config.base_seed, index);
  rec.delta = delta;
  rec.algorithm = config.algorithm;
  const auto start = std::chrono::steady_clock::now();
  RngStream rng(rec.seed);

  if (config.algorithm == Algorithm::Pseeb) {
    PseebOptions opt;
    opt.delta = delta;
    opt.c = config.c;
    opt.safety_cap = config.safety_cap;
    opt.check_invariants = config.check_invariants;
    opt.trace = trace;
    const PseebOutcome out = pseeb_run(config.instance, opt, rng);
    rec.status = out.status == PseebOutcome::Status::Terminated    ? TrialStatus::Terminated
                 : out.status == PseebOutcome::Status::CapExceeded ? TrialStatus::CapExceeded
                                                                   : TrialStatus::Failed;
    rec.answer = out.answer;
    rec.tau = out.tau;
    rec.draws = out.copy_draws;
    rec.winning_bracket = out.winning_bracket;
    rec.invariant_violations = out.invariants.violations();
  } else {
    BaselineOptions opt;
    opt.delta = delta;
    opt.safety_cap = config.safety_cap;
    const BaselineOutcome out = uniform_lil_baseline(config.instance, opt, rng);
    rec.status = out.terminated ? TrialStatus::Terminated : TrialStatus::CapExceeded;
    rec.answer = out.answer;
    rec.tau = out.tau;
    rec.draws = out.arm_draws;
  }
  rec.correct = rec.status == TrialStatus::Terminated && is_correct(config.instance, rec.answer);
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

SummaryRow summarize_trials(double delta, Algorithm algorithm,
                            const std::vector<TrialRecord>& records) {
  SummaryRow row;
  row.delta = delta;
  row.algorithm = algorithm;
  row.trials = records.size();
  std::vector<double> taus;
  taus.reserve(records.size());
  for (const auto& r : records) {
    if (!r.correct) ++row.errors;
    if (r.status != TrialStatus::Terminated) ++row.anomalies;
    row.invariant_violations += r.invariant_violations;
    taus.push_back(static_cast<double>(r.tau));
  }
  row.error_rate = row.trials ? static_cast<double>(row.errors) / static_cast<double>(row.trials)
                              : 0.0;
  const Interval ci = wilson_interval(row.errors, row.trials);
  row.error_lo = ci.lo;
  row.error_hi = ci.hi;
  const SampleSummary s = summarize(taus);
  row.mean_tau = s.mean;
  row.tau_se = s.std_error;
  row.median_tau = s.median;
  row.max_tau = s.max;
  return row;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const std::size_t n_delta = config.deltas.size();
  const std::uint64_t trials = config.trials;
  const std::uint64_t total = n_delta * trials;

  std::vector<TrialRecord> records(total);
  std::vector<std::string> traces(config.emit_traces ? total : 0);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};

  auto worker = [&]() {
    for (;;) {
      const std::uint64_t slot = next.fetch_add(1);
      if (slot >= total || failed.load()) return;
      const double delta = config.deltas[slot / trials];
      const std::uint64_t index = slot % trials;
      try {
        if (config.emit_traces) {
          std::ostringstream trace;
          records[slot] = run_trial(config, delta, index, &trace);
          traces[slot] = trace.str();
        } else {
          records[slot] = run_trial(config, delta, index);
        }
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };

  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, total));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  ExperimentResult result;
  for (std::size_t d = 0; d < n_delta; ++d) {
    const auto first = records.begin() + static_cast<std::ptrdiff_t>(d * trials);
    std::vector<TrialRecord> slice(first, first + static_cast<std::ptrdiff_t>(trials));
    result.rows.push_back(summarize_trials(config.deltas[d], config.algorithm, slice));
  }
  for (const auto& t : traces) result.traces += t;
  result.records = std::move(records);
  return result;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryCsvHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.algorithm) << ',' << format_double(r.delta) << ',' << r.trials << ','
        << r.errors << ',' << format_double(r.error_rate) << ',' << format_double(r.error_lo)
        << ',' << format_double(r.error_hi) << ',' << format_double(r.mean_tau) << ','
        << format_double(r.tau_se) << ',' << format_double(r.median_tau) << ','
        << format_double(r.max_tau) << ',' << r.anomalies << ',' << r.invariant_violations
        << '\n';
  }
}

void write_trial_ndjson(std::ostream& out, const std::vector<TrialRecord>& records,
                        bool include_wall_time) {
  for (const auto& r : records) {
    out << "{\"trial\":" << r.index << ",\"seed\":" << r.seed
        << ",\"delta\":" << json_double(r.delta) << ",\"algorithm\":\"" << to_string(r.algorithm)
        << "\",\"status\":\"" << to_string(r.status) << "\",\"answer\":";
    if (r.answer) {
      out << *r.answer;
    } else {
      out << "null";
    }
    out << ",\"correct\":" << (r.correct ? "true" : "false") << ",\"tau\":" << r.tau
        << ",\"draws\":[";
    for (std::size_t i = 0; i < r.draws.size(); ++i) out << (i ? "," : "") << r.draws[i];
    out << "],\"winning_bracket\":" << r.winning_bracket
        << ",\"invariant_violations\":" << r.invariant_violations;
    if (include_wall_time) out << ",\"wall_time\":" << json_double(r.wall_time);
    out << "}\n";
  }
}

void write_summary_json(std::ostream& out, const ExperimentConfig& config,
                        const std::vector<SummaryRow>& rows) {
  out << "{\"algorithm\":\"" << to_string(config.algorithm) << "\",\"seed\":" << config.base_seed
      << ",\"trials\":" << config.trials << ",\"c\":" << json_double(config.c) << ",\"rows\":[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << (i ? "," : "") << "{\"delta\":" << json_double(r.delta) << ",\"errors\":" << r.errors
        << ",\"error_rate\":" << json_double(r.error_rate)
        << ",\"error_lo\":" << json_double(r.error_lo) << ",\"error_hi\":" << json_double(r.error_hi)
        << ",\"mean_tau\":" << json_double(r.mean_tau) << ",\"tau_se\":" << json_double(r.tau_se)
        << ",\"median_tau\":" << json_double(r.median_tau)
        << ",\"max_tau\":" << json_double(r.max_tau) << ",\"anomalies\":" << r.anomalies
        << ",\"invariant_violations\":" << r.invariant_violations << "}";
  }
  out << "]}\n";
}

}  // namespace oneid
