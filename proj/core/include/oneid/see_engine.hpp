#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oneid/confidence.hpp"
#include "oneid/instance.hpp"
#include "oneid/rng.hpp"

namespace oneid {

// Per-arm draw log with stack discipline. The mean is always the prefix sum
// of the logged draws divided by their count, so pushing and popping the
// same draw restores the previous mean bit for bit.
class ArmHistory {
 public:
  void push(double x) {
    draws_.push_back(x);
    prefix_.push_back(prefix_.back() + x);
  }
  // Removes and returns the most recent draw. Throws std::logic_error if empty.
  double pop();

  std::size_t count() const noexcept { return draws_.size(); }
  bool empty() const noexcept { return draws_.empty(); }
  // 0 for an empty history.
  double mean() const noexcept {
    return draws_.empty() ? 0.0 : prefix_.back() / static_cast<double>(draws_.size());
  }
  double last() const { return draws_.back(); }
  std::span<const double> draws() const noexcept { return draws_; }

 private:
  std::vector<double> draws_;
  std::vector<double> prefix_{0.0};
};

enum class Period { Exploration, Exploitation };
enum class SeeMode { Exploring, Exploiting, Done };

const char* to_string(Period period);
const char* to_string(SeeMode mode);

struct StepOutcome {
  enum class Kind { Pulled, Terminated, Failed };

  Kind kind = Kind::Pulled;
  // Arm of the fresh draw made in this step, if any. A Terminated outcome with
  // an arm answer always carries the confirming exploitation draw.
  std::optional<std::size_t> drawn_arm;
  Period period = Period::Exploration;
  // For Terminated: the qualified arm, or nullopt for the None answer.
  std::optional<std::size_t> answer;
  std::string reason;

  bool pulled() const noexcept { return kind == Kind::Pulled; }
  bool terminated() const noexcept { return kind == Kind::Terminated; }
  bool failed() const noexcept { return kind == Kind::Failed; }
};

// Violation counters for the runtime checks enabled by
// SeeConfig::check_invariants.
struct InvariantReport {
  std::uint64_t checks = 0;
  std::uint64_t accounting = 0;       // t_ee = |H_ee| + |Q|, t_et = |H_et|
  std::uint64_t q_size = 0;           // |Q| <= |B|
  std::uint64_t phase_start_lcb = 0;  // every exploration LCB < mu0 when a phase starts
  std::uint64_t exploration_cap = 0;  // N_ee <= (C+1)^2 beta_k ln(4K/delta_k) at phase end
  std::uint64_t exploitation_cap = 0; // per-phase exploitation increment under its budget
  std::uint64_t prefix_mean = 0;      // histories are prefixes of the fresh-draw sequences
  std::uint64_t loop_progress = 0;    // free iterations bounded by Q consumptions and phases
  std::uint64_t none_answer = 0;      // None only from the full bracket with delta_k <= delta/3
  std::string first_violation;

  std::uint64_t violations() const noexcept {
    return accounting + q_size + phase_start_lcb + exploration_cap + exploitation_cap +
           prefix_mean + loop_progress + none_answer;
  }
  void merge(const InvariantReport& other);
};

struct SeeConfig {
  double mu0 = 0.0;
  // Tolerance for this copy, already split across brackets by the caller.
  double delta = 0.05;
  double c = kDefaultC;
  // Global arm count; confidence bounds use delta / num_arms even for small brackets.
  std::size_t num_arms = 0;
  bool check_invariants = false;
};

// One copy of the phased exploration-exploitation oracle restricted to a
// bracket of arms. Each call to step() runs the control flow until exactly
// one fresh sample is drawn or the copy stops; Q transfers and phase
// advances inside a step are free.
//
// Within a phase the loop checks, in order:
//   1. the most recently appended exploration arm has LCB_ee >= mu0: park its
//      latest exploration draw in Q and confirm it by exploitation;
//   2. every UCB_ee <= mu0: answer None (full bracket, delta_k <= delta/3) or
//      move to the next phase;
//   3. every arm is over the exploration budget: next phase;
//   4. otherwise pull the UCB_ee argmax among arms under budget, reusing a
//      parked draw when one exists.
// Exploitation samples the candidate until LCB_et(delta / alpha_k) > mu0
// (stop with the candidate) or its budget runs out (next phase).
class SeeEngine {
 public:
  using RewardFn = std::function<double(std::size_t arm)>;

  // Throws std::invalid_argument for an empty bracket, repeated arms, arms
  // outside [0, num_arms), C <= 1 or delta outside (0, 1).
  SeeEngine(std::vector<std::size_t> bracket, const SeeConfig& config);

  StepOutcome step(const RewardFn& draw);
  StepOutcome step(const BanditInstance& instance, RngStream& rng);

  std::span<const std::size_t> bracket() const noexcept { return bracket_; }
  const SeeConfig& config() const noexcept { return config_; }
  int phase() const noexcept { return phase_; }
  SeeMode mode() const noexcept { return mode_; }
  std::uint64_t t_ee() const noexcept { return t_ee_; }
  std::uint64_t t_et() const noexcept { return t_et_; }
  std::uint64_t draws() const noexcept { return t_ee_ + t_et_; }
  std::uint64_t steps() const noexcept { return steps_; }

  // Per-arm accessors take global arm indices.
  const ArmHistory& exploration_history(std::size_t arm) const;
  const ArmHistory& exploitation_history(std::size_t arm) const;
  std::optional<double> parked(std::size_t arm) const;
  std::size_t q_size() const noexcept { return q_count_; }
  std::optional<std::size_t> last_exploration_arm() const;
  std::optional<std::size_t> candidate() const;

  // Bounds at the current phase.
  double exploration_ucb(std::size_t arm) const;
  double exploration_lcb(std::size_t arm) const;
  double exploitation_lcb(std::size_t arm) const;
  double exploration_cap() const noexcept { return explore_cap_; }
  double exploitation_cap() const noexcept { return exploit_cap_; }

  // UCB_ee argmax among arms with N_ee <= budget - 1, ties to bracket order.
  // Throws std::logic_error when every arm is over budget.
  std::size_t select_exploration_arm() const;

  // Park the arm's most recent exploration draw in Q / return it to H_ee.
  // Neither changes t_ee. Throw std::logic_error on violated preconditions.
  void q_transfer_out(std::size_t arm);
  void q_transfer_in(std::size_t arm);

  const InvariantReport& invariants() const noexcept { return report_; }

  // Full replay of the prefix-mean property against the fresh-draw logs.
  // Requires check_invariants; returns the number of mismatching arms.
  std::size_t verify_prefix_means() const;

  // Newline-delimited JSON, one record per step. `tag` is written into each
  // record (e.g. the bracket index).
  void set_trace(std::ostream* out, int tag = 0) {
    trace_ = out;
    trace_tag_ = tag;
  }

 private:
  std::size_t slot_of(std::size_t arm) const;
  using EnvelopeTable = std::array<double, 65>;
  static double cached_radius(EnvelopeTable& table, std::uint64_t n, double log_inv);
  double ucb_slot(std::size_t s) const;
  double lcb_slot(std::size_t s) const;
  double exploit_lcb_slot(std::size_t s) const;
  std::optional<std::size_t> select_slot() const;
  void set_phase(int k);
  bool advance_phase();
  void park_slot(std::size_t s);
  void unpark_slot(std::size_t s);
  void record(std::uint64_t& counter, const std::string& what);
  void check_step_boundary();
  void check_prefix(std::size_t s);
  void trace_step(const StepOutcome& out, double reward);

  std::vector<std::size_t> bracket_;
  std::vector<int> slot_;  // global arm -> slot, -1 outside the bracket
  SeeConfig config_;

  int phase_ = 1;
  SeeMode mode_ = SeeMode::Exploring;
  double delta_k_ = 0.0;
  double explore_log_ = 0.0;  // ln(K / delta_k)
  double exploit_log_ = 0.0;  // ln(alpha_k K / delta)
  double explore_cap_ = 0.0;
  double exploit_cap_ = 0.0;

  std::vector<ArmHistory> ee_;
  std::vector<ArmHistory> et_;
  std::vector<std::optional<double>> q_;
  std::size_t q_count_ = 0;
  std::uint64_t t_ee_ = 0;
  std::uint64_t t_et_ = 0;
  std::uint64_t phase_start_t_et_ = 0;
  std::uint64_t steps_ = 0;
  std::optional<std::size_t> last_ee_slot_;
  std::optional<std::size_t> candidate_slot_;
  // Exploration radius per slot at the current phase, keyed by the count it
  // was computed for (SIZE_MAX = stale).
  // Radius numerators per dyadic exponent for the current phase.
  mutable EnvelopeTable ee_env_{};
  mutable EnvelopeTable et_env_{};

  // Fresh-draw logs and long-double prefix sums, kept only when checking.
  std::vector<std::vector<double>> fresh_ee_;
  std::vector<std::vector<double>> fresh_et_;
  std::vector<std::vector<long double>> fresh_ee_prefix_;
  std::vector<std::vector<long double>> fresh_et_prefix_;
  std::vector<std::size_t> touched_;

  InvariantReport report_;
  std::ostream* trace_ = nullptr;
  int trace_tag_ = 0;
};

}  // namespace oneid
