// oneid: experiments, bound tables and property checks for threshold
// 1-identification.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oneid/bounds.hpp"
#include "oneid/complexity.hpp"
#include "oneid/diagnostics.hpp"
#include "oneid/experiment.hpp"
#include "oneid/io.hpp"

namespace {

constexpr int kViolation = 2;

struct InstanceArgs {
  std::string path;
  std::vector<double> means;
  std::optional<double> mu0;
  std::string noise = "gaussian";

  void attach(CLI::App* cmd) {
    cmd->add_option("-i,--instance", path, "Instance file (JSON)");
    cmd->add_option("--means", means, "Arm means, comma separated")->delimiter(',');
    cmd->add_option("--mu0", mu0, "Threshold");
    cmd->add_option("--noise", noise, "gaussian | bounded:<half-width>");
  }

  bool given() const { return !path.empty() || !means.empty(); }

  oneid::BanditInstance load() const {
    if (!path.empty()) return oneid::load_instance(path);
    if (means.empty() || !mu0) throw CLI::ValidationError("instance", "give --instance or --means with --mu0");
    return oneid::BanditInstance(means, *mu0, oneid::NoiseModel::parse(noise));
  }
};

void warn_unit_interval(const oneid::BanditInstance& inst) {
  if (!inst.within_unit_interval()) {
    std::cerr << "warning: means or threshold outside [0, 1]; several analytical "
                 "guarantees assume gaps below 1\n";
  }
}

std::string num(double x, int prec = 6) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, x);
  return buf;
}

void write_to(const std::string& path, const std::string& what,
              const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) return;
  if (path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + what + " to '" + path + "'");
  fn(out);
}

// ---- run ----

struct RunArgs {
  std::string config_path;
  InstanceArgs instance;
  std::string algorithm;
  std::vector<double> deltas;
  std::optional<double> c;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> safety_cap;
  std::optional<unsigned> threads;
  std::string output;
  std::string records;
  std::string traces;
  std::string summary_json;
  std::string save_config;
  bool check_invariants = false;
  bool wall_time = false;
};

int run_command(const RunArgs& a) {
  oneid::ExperimentConfig cfg;
  if (!a.config_path.empty()) cfg = oneid::load_config(a.config_path);
  if (a.instance.given()) {
    cfg.instance = a.instance.load();
    cfg.instance_path = a.instance.path.empty() ? "" : std::filesystem::absolute(a.instance.path).string();
  } else if (a.config_path.empty()) {
    throw CLI::ValidationError("run", "give --config or an instance");
  }
  if (!a.algorithm.empty()) cfg.algorithm = oneid::parse_algorithm(a.algorithm);
  if (!a.deltas.empty()) cfg.deltas = a.deltas;
  if (a.c) cfg.c = *a.c;
  if (a.trials) cfg.trials = *a.trials;
  if (a.seed) cfg.base_seed = *a.seed;
  if (a.safety_cap) cfg.safety_cap = *a.safety_cap;
  if (a.threads) cfg.threads = *a.threads;
  if (!a.output.empty()) cfg.output = a.output;
  if (!a.traces.empty()) cfg.emit_traces = true;
  if (a.check_invariants) cfg.check_invariants = true;
  oneid::validate(cfg);
  warn_unit_interval(cfg.instance);
  if (!a.save_config.empty()) oneid::save_config(a.save_config, cfg);

  const oneid::ExperimentResult res = oneid::run_experiment(cfg);

  if (cfg.output.empty()) {
    oneid::write_summary_csv(std::cout, res.rows);
  } else {
    write_to(cfg.output, "summary CSV",
             [&](std::ostream& o) { oneid::write_summary_csv(o, res.rows); });
  }
  write_to(a.records, "trial records",
           [&](std::ostream& o) { oneid::write_trial_ndjson(o, res.records, a.wall_time); });
  write_to(a.traces, "traces", [&](std::ostream& o) { o << res.traces; });
  write_to(a.summary_json, "summary JSON",
           [&](std::ostream& o) { oneid::write_summary_json(o, cfg, res.rows); });
  return 0;
}

// ---- bounds ----

struct BoundsArgs {
  InstanceArgs instance;
  double delta = 0.01;
  std::string json;
  bool scaled = false;
  std::uint64_t seed = 0x5eed;
};

std::string bounds_json(const oneid::BanditInstance& inst, double delta,
                        const std::optional<oneid::LowerBoundReport>& lb,
                        const oneid::UpperBoundReport& ub, const oneid::ComplexityProfile& prof,
                        bool scaled) {
  auto jnum = [](double x) {
    if (!std::isfinite(x)) return std::string("null");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  };
  std::string s = "{\"delta\":" + jnum(delta) + ",\"class\":\"" +
                  oneid::to_string(oneid::classify(inst).kind) + "\",\"m\":" +
                  std::to_string(prof.m) + ",\"complexity\":{\"h1_neg\":" + jnum(prof.h1_neg) +
                  ",\"h1_low\":" + jnum(prof.h1_low) + ",\"h\":" + jnum(prof.h) +
                  ",\"h1\":" + jnum(prof.h1) + ",\"h0\":" + jnum(prof.h0) +
                  ",\"h_u\":" + jnum(prof.h_u) + ",\"h_of_j\":[";
  for (std::size_t j = 0; j < prof.h_of_j.size(); ++j) s += (j ? "," : "") + jnum(prof.h_of_j[j]);
  s += "]}";
  if (lb) {
    s += ",\"lower\":{\"closed_form\":" + jnum(lb->closed_form) +
         ",\"program_value\":" + jnum(scaled ? lb->scaled_program_value() : lb->program_value) +
         ",\"scaled\":" + (scaled ? "true" : "false") + ",\"dual_value\":" + jnum(lb->dual_value) +
         ",\"lagrangian_value\":" + jnum(lb->lagrangian_value) +
         ",\"converged\":" + (lb->converged ? "true" : "false") +
         ",\"delta_in_theory_regime\":" + (lb->delta_in_theory_regime ? "true" : "false") +
         ",\"argmin\":[";
    for (std::size_t j = 0; j < lb->argmin.size(); ++j) s += (j ? "," : "") + jnum(lb->argmin[j]);
    s += "],\"per_j\":[";
    for (std::size_t j = 0; j < lb->per_j_terms.size(); ++j) {
      s += std::string(j ? "," : "") + "[" + jnum(lb->per_j_terms[j].first) + "," +
           jnum(lb->per_j_terms[j].second) + "]";
    }
    s += "]}";
  }
  s += ",\"upper\":{\"constants_omitted\":true,\"negative\":" + jnum(ub.negative) +
       ",\"positive\":" + jnum(ub.positive) + ",\"positive_terms\":[";
  for (std::size_t j = 0; j < ub.positive_terms.size(); ++j) {
    s += (j ? "," : "") + jnum(ub.positive_terms[j]);
  }
  s += "]}}\n";
  return s;
}

int bounds_command(const BoundsArgs& a) {
  const oneid::BanditInstance inst = a.instance.load();
  warn_unit_interval(inst);
  const oneid::InstanceClass cls = oneid::classify(inst);
  const oneid::ComplexityProfile prof = oneid::complexity_terms(inst);
  const oneid::UpperBoundReport ub = oneid::upper_bound_formula(inst, a.delta);
  std::optional<oneid::LowerBoundReport> lb;
  if (cls.kind == oneid::InstanceKind::Positive) {
    oneid::SolverOptions opt;
    opt.seed = a.seed;
    lb = oneid::solve_lb_program(inst, a.delta, opt);
  }

  std::printf("instance: K=%zu  class=%s  m=%zu  delta=%s\n", inst.num_arms(),
              oneid::to_string(cls.kind), cls.m, num(a.delta).c_str());
  std::printf("complexity: H1neg=%s  H1low=%s  H=%s  H1=%s  H0=%s  Hu=%s\n",
              num(prof.h1_neg).c_str(), num(prof.h1_low).c_str(), num(prof.h).c_str(),
              num(prof.h1).c_str(), num(prof.h0).c_str(), num(prof.h_u).c_str());
  if (lb) {
    std::printf("\nlower bound (constants omitted)%s\n",
                lb->delta_in_theory_regime ? "" : "  [delta outside the asymptotic regime]");
    std::printf("  %-22s %14s\n", "closed form", num(lb->closed_form).c_str());
    std::printf("  %-22s %14s%s\n", a.scaled ? "program value x1/3200" : "program value",
                num(a.scaled ? lb->scaled_program_value() : lb->program_value).c_str(),
                lb->converged ? "" : "  [restarts disagree]");
    std::printf("  %-22s %14s\n", "dual point value", num(lb->dual_value).c_str());
    std::printf("  %-22s %14s\n", "dual point Lagrangian", num(lb->lagrangian_value).c_str());
  }
  std::printf("\nupper bound (constants omitted)\n");
  std::printf("  %-22s %14s\n", "negative branch", num(ub.negative).c_str());
  if (cls.kind == oneid::InstanceKind::Positive) {
    std::printf("  %-22s %14s\n", "positive branch", num(ub.positive).c_str());
    std::printf("\n  %4s %12s %14s %14s %14s %10s\n", "rank", "H(j)", "conf term", "H(j) term",
                "upper term", "p*");
    for (std::size_t j = 0; j < cls.m; ++j) {
      std::printf("  %4zu %12s %14s %14s %14s %10s\n", j + 1, num(prof.h_of_j[j]).c_str(),
                  num(lb->per_j_terms[j].first).c_str(), num(lb->per_j_terms[j].second).c_str(),
                  num(ub.positive_terms[j]).c_str(), num(lb->argmin[j], 4).c_str());
    }
  }
  write_to(a.json, "bounds JSON",
           [&](std::ostream& o) { o << bounds_json(inst, a.delta, lb, ub, prof, a.scaled); });
  return 0;
}

// ---- bracket-stats ----

struct BracketArgs {
  std::size_t arms = 8;
  std::vector<std::size_t> ranks;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 1;
};

int bracket_command(const BracketArgs& a) {
  std::vector<std::size_t> ranks = a.ranks;
  if (ranks.empty()) {
    for (std::size_t j = 1; j <= a.arms; ++j) ranks.push_back(j);
  }
  bool ok = true;
  std::printf("%4s %4s %12s %10s %12s %12s  %s\n", "j", "b", "empirical", "se", "exact", "bound",
              "status");
  for (std::size_t j : ranks) {
    const auto rows = oneid::bracket_stats(a.arms, j, a.samples, oneid::RngStream(a.seed, j));
    for (const auto& r : rows) {
      const bool mc_ok = r.empirical <= r.bound + 3.0 * r.std_error;
      const bool exact_ok = !r.exact || *r.exact <= r.bound;
      ok = ok && mc_ok && exact_ok;
      std::printf("%4zu %4zu %12.6f %10.6f %12s %12.6f  %s\n", j, r.b, r.empirical, r.std_error,
                  r.exact ? num(*r.exact).c_str() : "-", r.bound,
                  mc_ok && exact_ok ? "ok" : "VIOLATION");
    }
  }
  return ok ? 0 : kViolation;
}

// ---- check-concentration / check-lemmas ----

struct ConcentrationArgs {
  std::vector<double> deltas{0.05, 0.2};
  std::uint64_t streams = 2000;
  std::uint64_t horizon = 4096;
  std::uint64_t seed = 1;
};

bool print_concentration(const ConcentrationArgs& a) {
  bool ok = true;
  std::printf("%8s %8s %8s %10s %10s %10s  %s\n", "delta", "streams", "horizon", "fraction",
              "bound", "se", "status");
  for (std::size_t i = 0; i < a.deltas.size(); ++i) {
    const auto r = oneid::concentration_check(a.deltas[i], a.streams, a.horizon,
                                              oneid::RngStream(a.seed, i));
    ok = ok && r.passed;
    std::printf("%8s %8llu %8llu %10.5f %10.5f %10.5f  %s\n", num(r.delta).c_str(),
                static_cast<unsigned long long>(r.streams),
                static_cast<unsigned long long>(r.horizon), r.fraction, r.bound, r.std_error,
                r.passed ? "ok" : "VIOLATION");
  }
  return ok;
}

struct LemmaArgs {
  std::uint64_t tuples = 10'000;
  std::uint64_t paths = 2000;
  std::uint64_t seed = 1;
  ConcentrationArgs concentration;
};

int lemmas_command(const LemmaArgs& a) {
  bool ok = true;
  std::printf("sample-size threshold implication\n");
  const auto t = oneid::lil_threshold_check(a.tuples, oneid::RngStream(a.seed, 1));
  std::printf("  tuples=%llu failures=%llu  %s\n", static_cast<unsigned long long>(t.tuples),
              static_cast<unsigned long long>(t.failures), t.failures ? "VIOLATION" : "ok");
  if (t.failures) std::printf("  first failure: %s\n", t.first_failure.c_str());
  ok = ok && t.failures == 0;

  std::printf("\nmaximal inequality\n");
  std::printf("  %6s %6s %8s %10s %10s %10s  %s\n", "n", "scale", "z", "frequency", "bound", "se",
              "status");
  for (const auto& c : oneid::maximal_inequality_check(a.paths, oneid::RngStream(a.seed, 2))) {
    ok = ok && c.passed;
    std::printf("  %6llu %6s %8s %10.5f %10.5f %10.5f  %s\n",
                static_cast<unsigned long long>(c.n), num(c.scale).c_str(), num(c.z, 4).c_str(),
                c.frequency, c.bound, c.std_error, c.passed ? "ok" : "VIOLATION");
  }

  std::printf("\nanytime concentration\n");
  ok = print_concentration(a.concentration) && ok;
  return ok ? 0 : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oneid: threshold 1-identification experiments and bounds"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Monte Carlo experiment; prints the summary CSV");
  run_cmd->add_option("-c,--config", run.config_path, "Experiment config (JSON)");
  run.instance.attach(run_cmd);
  run_cmd->add_option("-a,--algorithm", run.algorithm,
                      "pseeb | uniform-lil (the baseline uses delta' = 6 delta / pi^2 so its "
                      "error guarantee is honest)");
  run_cmd->add_option("-d,--delta", run.deltas, "Confidence levels, comma separated")->delimiter(',');
  run_cmd->add_option("--C", run.c, "Exploration LCB multiplier (> 1, default 1.01)");
  run_cmd->add_option("-n,--trials", run.trials, "Trials per delta");
  run_cmd->add_option("-s,--seed", run.seed, "Base seed");
  run_cmd->add_option("--safety-cap", run.safety_cap, "Draw cap per trial");
  run_cmd->add_option("-j,--threads", run.threads, "Worker threads (0 = all cores)");
  run_cmd->add_option("-o,--output", run.output, "Summary CSV path (default stdout)");
  run_cmd->add_option("--records", run.records, "Per-trial NDJSON path ('-' for stdout)");
  run_cmd->add_option("--traces", run.traces, "Per-step NDJSON trace path");
  run_cmd->add_option("--summary-json", run.summary_json, "Summary JSON path");
  run_cmd->add_option("--save-config", run.save_config, "Write the effective config here");
  run_cmd->add_flag("--check-invariants", run.check_invariants, "Assert engine invariants");
  run_cmd->add_flag("--wall-time", run.wall_time, "Include wall time in trial records");

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Complexity terms and bound formulas");
  bounds.instance.attach(bounds_cmd);
  bounds_cmd->add_option("-d,--delta", bounds.delta, "Confidence level")
      ->check(CLI::Range(0.0, 1.0));
  bounds_cmd->add_option("--json", bounds.json, "Also write JSON here ('-' for stdout)");
  bounds_cmd->add_flag("--scaled", bounds.scaled, "Apply the 1/3200 program factor");
  bounds_cmd->add_option("-s,--seed", bounds.seed, "Solver seed");

  BracketArgs bracket;
  auto* bracket_cmd = app.add_subcommand("bracket-stats", "Tail of the first qualified bracket");
  bracket_cmd->add_option("-K,--arms", bracket.arms, "Number of arms")->check(CLI::Range(2, 1 << 20));
  bracket_cmd->add_option("-j,--rank", bracket.ranks, "Ranks j (default: all)")->delimiter(',');
  bracket_cmd->add_option("--samples", bracket.samples, "Monte Carlo permutations");
  bracket_cmd->add_option("-s,--seed", bracket.seed, "Seed");

  ConcentrationArgs conc;
  auto* conc_cmd = app.add_subcommand("check-concentration", "Anytime envelope coverage");
  conc_cmd->add_option("-d,--delta", conc.deltas, "Confidence levels")->delimiter(',');
  conc_cmd->add_option("--streams", conc.streams, "Gaussian paths");
  conc_cmd->add_option("--horizon", conc.horizon, "Path length")->check(CLI::Range(2, 1 << 30));
  conc_cmd->add_option("-s,--seed", conc.seed, "Seed");

  LemmaArgs lemmas;
  auto* lemma_cmd = app.add_subcommand("check-lemmas", "Technical inequality suite");
  lemma_cmd->add_option("--tuples", lemmas.tuples, "Random tuples for the threshold implication");
  lemma_cmd->add_option("--paths", lemmas.paths, "Paths per maximal-inequality cell");
  lemma_cmd->add_option("--streams", lemmas.concentration.streams, "Concentration paths");
  lemma_cmd->add_option("--horizon", lemmas.concentration.horizon, "Concentration path length");
  lemma_cmd->add_option("-s,--seed", lemmas.seed, "Seed");

  CLI11_PARSE(app, argc, argv);
  lemmas.concentration.seed = lemmas.seed;

  try {
    if (*run_cmd) return run_command(run);
    if (*bounds_cmd) return bounds_command(bounds);
    if (*bracket_cmd) return bracket_command(bracket);
    if (*conc_cmd) return print_concentration(conc) ? 0 : kViolation;
    if (*lemma_cmd) return lemmas_command(lemmas);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
