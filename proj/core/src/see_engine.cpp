#include "oneid/see_engine.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "format.hpp"

namespace oneid {

namespace {

constexpr double kUnset = -1.0;

// Relative tolerance for comparing a history mean against the long-double
// replay of the same draws.
constexpr double kPrefixTolerance = 1e-9;

}  // namespace

double ArmHistory::pop() {
  if (draws_.empty()) throw std::logic_error("pop from an empty arm history");
  const double x = draws_.back();
  draws_.pop_back();
  prefix_.pop_back();
  return x;
}

const char* to_string(Period period) {
  return period == Period::Exploration ? "exploration" : "exploitation";
}

const char* to_string(SeeMode mode) {
  switch (mode) {
    case SeeMode::Exploring: return "exploring";
    case SeeMode::Exploiting: return "exploiting";
    case SeeMode::Done: return "done";
  }
  return "?";
}

void InvariantReport::merge(const InvariantReport& other) {
  checks += other.checks;
  accounting += other.accounting;
  q_size += other.q_size;
  phase_start_lcb += other.phase_start_lcb;
  exploration_cap += other.exploration_cap;
  exploitation_cap += other.exploitation_cap;
  prefix_mean += other.prefix_mean;
  loop_progress += other.loop_progress;
  none_answer += other.none_answer;
  if (first_violation.empty()) first_violation = other.first_violation;
}

SeeEngine::SeeEngine(std::vector<std::size_t> bracket, const SeeConfig& config)
    : bracket_(std::move(bracket)), config_(config) {
  if (bracket_.empty()) throw std::invalid_argument("bracket must not be empty");
  if (!(config_.c > 1.0)) throw std::invalid_argument("C must be greater than 1");
  if (!(config_.delta > 0.0 && config_.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!std::isfinite(config_.mu0)) throw std::invalid_argument("threshold must be finite");
  if (config_.num_arms < bracket_.size()) {
    throw std::invalid_argument("global arm count smaller than the bracket");
  }
  slot_.assign(config_.num_arms, -1);
  for (std::size_t s = 0; s < bracket_.size(); ++s) {
    const std::size_t arm = bracket_[s];
    if (arm >= config_.num_arms) throw std::invalid_argument("bracket arm out of range");
    if (slot_[arm] != -1) throw std::invalid_argument("bracket contains a repeated arm");
    slot_[arm] = static_cast<int>(s);
  }
  const std::size_t n = bracket_.size();
  ee_.resize(n);
  et_.resize(n);
  q_.resize(n);
  if (config_.check_invariants) {
    fresh_ee_.resize(n);
    fresh_et_.resize(n);
    fresh_ee_prefix_.assign(n, std::vector<long double>{0.0L});
    fresh_et_prefix_.assign(n, std::vector<long double>{0.0L});
  }
  set_phase(1);
}

std::size_t SeeEngine::slot_of(std::size_t arm) const {
  if (arm >= slot_.size() || slot_[arm] < 0) {
    throw std::out_of_range("arm " + std::to_string(arm) + " is not in this bracket");
  }
  return static_cast<std::size_t>(slot_[arm]);
}

void SeeEngine::set_phase(int k) {
  const PhaseParams p = phase_params(k);
  const double kd = static_cast<double>(config_.num_arms);
  phase_ = k;
  delta_k_ = p.delta_k;
  explore_log_ = p.log_inv_delta_k + std::log(kd);
  exploit_log_ = std::log(kd / config_.delta) + p.log_alpha_k;
  explore_cap_ = exploration_budget(k, config_.num_arms, config_.c);
  exploit_cap_ = exploitation_budget(k, config_.num_arms, config_.delta, config_.c);
  ee_env_.fill(kUnset);
  et_env_.fill(kUnset);
}

double SeeEngine::cached_radius(EnvelopeTable& table, std::uint64_t n, double log_inv) {
  const int e = dyadic_exponent(n);
  double& env = table[static_cast<std::size_t>(e)];
  if (env == kUnset) env = envelope_log(e, log_inv);
  return env / static_cast<double>(n);
}

double SeeEngine::ucb_slot(std::size_t s) const {
  const std::size_t n = ee_[s].count();
  if (n == 0) return std::numeric_limits<double>::infinity();
  return ee_[s].mean() + cached_radius(ee_env_, n, explore_log_);
}

double SeeEngine::lcb_slot(std::size_t s) const {
  const std::size_t n = ee_[s].count();
  if (n == 0) return -std::numeric_limits<double>::infinity();
  return ee_[s].mean() - config_.c * cached_radius(ee_env_, n, explore_log_);
}

double SeeEngine::exploit_lcb_slot(std::size_t s) const {
  const std::size_t n = et_[s].count();
  if (n == 0) return -std::numeric_limits<double>::infinity();
  return et_[s].mean() - cached_radius(et_env_, n, exploit_log_);
}

const ArmHistory& SeeEngine::exploration_history(std::size_t arm) const {
  return ee_[slot_of(arm)];
}

const ArmHistory& SeeEngine::exploitation_history(std::size_t arm) const {
  return et_[slot_of(arm)];
}

std::optional<double> SeeEngine::parked(std::size_t arm) const { return q_[slot_of(arm)]; }

std::optional<std::size_t> SeeEngine::last_exploration_arm() const {
  if (!last_ee_slot_) return std::nullopt;
  return bracket_[*last_ee_slot_];
}

std::optional<std::size_t> SeeEngine::candidate() const {
  if (!candidate_slot_) return std::nullopt;
  return bracket_[*candidate_slot_];
}

double SeeEngine::exploration_ucb(std::size_t arm) const { return ucb_slot(slot_of(arm)); }
double SeeEngine::exploration_lcb(std::size_t arm) const { return lcb_slot(slot_of(arm)); }
double SeeEngine::exploitation_lcb(std::size_t arm) const {
  return exploit_lcb_slot(slot_of(arm));
}

std::optional<std::size_t> SeeEngine::select_slot() const {
  // Budget comparisons stay real-valued: eligible iff N <= cap - 1.
  const double limit = explore_cap_ - 1.0;
  std::optional<std::size_t> best;
  double best_ucb = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < bracket_.size(); ++s) {
    if (static_cast<double>(ee_[s].count()) > limit) continue;
    const double u = ucb_slot(s);
    if (!best || u > best_ucb) {
      best = s;
      best_ucb = u;
    }
  }
  return best;
}

std::size_t SeeEngine::select_exploration_arm() const {
  const auto s = select_slot();
  if (!s) throw std::logic_error("every arm in the bracket is over the exploration budget");
  return bracket_[*s];
}

void SeeEngine::park_slot(std::size_t s) {
  if (ee_[s].empty()) throw std::logic_error("cannot park: arm has no exploration draws");
  if (q_[s]) throw std::logic_error("cannot park: arm already has a parked draw");
  q_[s] = ee_[s].pop();
  ++q_count_;
  touched_.push_back(s);
}

void SeeEngine::unpark_slot(std::size_t s) {
  if (!q_[s]) throw std::logic_error("cannot unpark: arm has no parked draw");
  ee_[s].push(*q_[s]);
  q_[s].reset();
  --q_count_;
  touched_.push_back(s);
}

void SeeEngine::q_transfer_out(std::size_t arm) { park_slot(slot_of(arm)); }
void SeeEngine::q_transfer_in(std::size_t arm) { unpark_slot(slot_of(arm)); }

void SeeEngine::record(std::uint64_t& counter, const std::string& what) {
  ++counter;
  if (report_.first_violation.empty()) {
    report_.first_violation = what + " (phase " + std::to_string(phase_) + ", step " +
                              std::to_string(steps_) + ")";
  }
}

bool SeeEngine::advance_phase() {
  if (config_.check_invariants) {
    ++report_.checks;
    for (std::size_t s = 0; s < bracket_.size(); ++s) {
      if (static_cast<double>(ee_[s].count()) > explore_cap_) {
        record(report_.exploration_cap, "exploration count above phase cap");
      }
    }
    if (static_cast<double>(t_et_ - phase_start_t_et_) > exploit_cap_) {
      record(report_.exploitation_cap, "exploitation increment above phase cap");
    }
  }
  if (phase_ >= kMaxPhase) {
    mode_ = SeeMode::Done;
    return false;
  }
  set_phase(phase_ + 1);
  phase_start_t_et_ = t_et_;
  if (config_.check_invariants) {
    for (std::size_t s = 0; s < bracket_.size(); ++s) {
      if (!(lcb_slot(s) < config_.mu0)) {
        record(report_.phase_start_lcb, "exploration LCB >= mu0 at phase start");
      }
      check_prefix(s);
    }
  }
  return true;
}

void SeeEngine::check_prefix(std::size_t s) {
  auto check = [&](const ArmHistory& h, const std::vector<double>& log,
                   const std::vector<long double>& prefix) {
    const std::size_t n = h.count();
    if (n > log.size()) return false;
    if (n == 0) return true;
    if (h.last() != log[n - 1]) return false;
    const double replay = static_cast<double>(prefix[n] / static_cast<long double>(n));
    return std::abs(h.mean() - replay) <= kPrefixTolerance * std::max(1.0, std::abs(replay));
  };
  ++report_.checks;
  if (!check(ee_[s], fresh_ee_[s], fresh_ee_prefix_[s])) {
    record(report_.prefix_mean, "exploration history is not a prefix of the fresh draws");
  }
  if (!check(et_[s], fresh_et_[s], fresh_et_prefix_[s])) {
    record(report_.prefix_mean, "exploitation history is not a prefix of the fresh draws");
  }
}

void SeeEngine::check_step_boundary() {
  ++report_.checks;
  std::uint64_t hee = 0;
  std::uint64_t het = 0;
  for (std::size_t s = 0; s < bracket_.size(); ++s) {
    hee += ee_[s].count();
    het += et_[s].count();
  }
  if (t_ee_ != hee + q_count_ || t_et_ != het) {
    record(report_.accounting, "sample accounting mismatch");
  }
  if (q_count_ > bracket_.size()) record(report_.q_size, "|Q| exceeds |B|");
  for (std::size_t s : touched_) check_prefix(s);
}

std::size_t SeeEngine::verify_prefix_means() const {
  if (!config_.check_invariants) {
    throw std::logic_error("prefix replay requires check_invariants");
  }
  std::size_t bad = 0;
  auto replay_ok = [](const ArmHistory& h, const std::vector<double>& log) {
    if (h.count() > log.size()) return false;
    long double sum = 0.0L;
    for (std::size_t i = 0; i < h.count(); ++i) {
      if (h.draws()[i] != log[i]) return false;
      sum += log[i];
    }
    if (h.count() == 0) return true;
    const double replay = static_cast<double>(sum / static_cast<long double>(h.count()));
    return std::abs(h.mean() - replay) <= kPrefixTolerance * std::max(1.0, std::abs(replay));
  };
  for (std::size_t s = 0; s < bracket_.size(); ++s) {
    if (!replay_ok(ee_[s], fresh_ee_[s]) || !replay_ok(et_[s], fresh_et_[s])) ++bad;
  }
  return bad;
}

void SeeEngine::trace_step(const StepOutcome& out, double reward) {
  std::ostream& os = *trace_;
  os << "{\"copy\":" << trace_tag_ << ",\"step\":" << steps_ << ",\"phase\":" << phase_
     << ",\"mode\":\"" << to_string(mode_) << '"';
  if (out.drawn_arm) {
    os << ",\"period\":\"" << to_string(out.period) << "\",\"arm\":" << *out.drawn_arm
       << ",\"reward\":" << detail::json_double(reward);
  }
  os << ",\"t_ee\":" << t_ee_ << ",\"t_et\":" << t_et_ << ",\"q\":" << q_count_;
  if (out.terminated()) {
    os << ",\"answer\":";
    if (out.answer) {
      os << *out.answer;
    } else {
      os << "null";
    }
  }
  if (out.failed()) os << ",\"failure\":\"" << out.reason << '"';
  os << "}\n";
}

StepOutcome SeeEngine::step(const BanditInstance& instance, RngStream& rng) {
  return step([&](std::size_t arm) { return sample(instance, arm, rng); });
}

StepOutcome SeeEngine::step(const RewardFn& draw) {
  if (mode_ == SeeMode::Done) throw std::logic_error("step() on a finished copy");
  ++steps_;
  touched_.clear();

  const std::size_t q_at_start = q_count_;
  std::uint64_t parks = 0;
  std::uint64_t unparks = 0;

  StepOutcome out;
  double reward = 0.0;

  auto fresh = [&](std::size_t s, Period period) {
    reward = draw(bracket_[s]);
    if (period == Period::Exploration) {
      ee_[s].push(reward);
      ++t_ee_;
      last_ee_slot_ = s;
      if (config_.check_invariants) {
        fresh_ee_[s].push_back(reward);
        fresh_ee_prefix_[s].push_back(fresh_ee_prefix_[s].back() + reward);
      }
    } else {
      et_[s].push(reward);
      ++t_et_;
      if (config_.check_invariants) {
        fresh_et_[s].push_back(reward);
        fresh_et_prefix_[s].push_back(fresh_et_prefix_[s].back() + reward);
      }
    }
    touched_.push_back(s);
    out.drawn_arm = bracket_[s];
    out.period = period;
  };

  auto finish = [&]() {
    if (config_.check_invariants) {
      if (unparks > q_at_start + parks) {
        record(report_.loop_progress, "more Q consumptions than parked draws");
      }
      check_step_boundary();
      if (out.terminated() && !out.answer &&
          !(bracket_.size() == config_.num_arms && delta_k_ <= config_.delta / 3.0)) {
        record(report_.none_answer, "None answer outside the full bracket");
      }
    }
    if (trace_) trace_step(out, reward);
    return out;
  };

  auto overflow = [&]() {
    out.kind = StepOutcome::Kind::Failed;
    out.reason = "schedule-overflow";
    return finish();
  };

  // Every free iteration parks, unparks or advances a phase. Phase advances
  // are bounded by kMaxPhase; parks and unparks alternate per arm, so the
  // remaining iterations stay below this cap in a correct run.
  const std::uint64_t iteration_cap = 4 * (static_cast<std::uint64_t>(bracket_.size()) + 2);
  const int phase_at_start = phase_;
  for (std::uint64_t iter = 0;; ++iter) {
    if (iter - static_cast<std::uint64_t>(phase_ - phase_at_start) > iteration_cap) {
      record(report_.loop_progress, "internal loop did not make progress");
      throw std::logic_error("SEE step exceeded its internal iteration cap");
    }

    if (mode_ == SeeMode::Exploiting) {
      const std::size_t s = *candidate_slot_;
      if (static_cast<double>(et_[s].count()) <= exploit_cap_ - 1.0) {
        fresh(s, Period::Exploitation);
        if (exploit_lcb_slot(s) > config_.mu0) {
          mode_ = SeeMode::Done;
          out.kind = StepOutcome::Kind::Terminated;
          out.answer = bracket_[s];
        }
        return finish();
      }
      mode_ = SeeMode::Exploring;
      if (!advance_phase()) return overflow();
      continue;
    }

    // Exploitation entry: the arm that received the latest exploration sample.
    if (t_ee_ >= 1 && last_ee_slot_ && lcb_slot(*last_ee_slot_) >= config_.mu0) {
      const std::size_t s = *last_ee_slot_;
      park_slot(s);
      ++parks;
      candidate_slot_ = s;
      mode_ = SeeMode::Exploiting;
      continue;
    }

    bool all_below = true;
    for (std::size_t s = 0; s < bracket_.size() && all_below; ++s) {
      if (ucb_slot(s) > config_.mu0) all_below = false;
    }
    if (all_below) {
      if (delta_k_ <= config_.delta / 3.0 && bracket_.size() == config_.num_arms) {
        mode_ = SeeMode::Done;
        out.kind = StepOutcome::Kind::Terminated;
        out.answer.reset();
        return finish();
      }
      if (!advance_phase()) return overflow();
      continue;
    }

    const auto chosen = select_slot();
    if (!chosen) {
      if (!advance_phase()) return overflow();
      continue;
    }

    const std::size_t s = *chosen;
    if (q_[s]) {
      unpark_slot(s);
      ++unparks;
      last_ee_slot_ = s;
      continue;
    }
    fresh(s, Period::Exploration);
    return finish();
  }
}

}  // namespace oneid
