#pragma once

#include <stdexcept>
#include <string>

#include "oneid/experiment.hpp"
#include "oneid/instance.hpp"

namespace oneid {

// Malformed file, missing key, wrong type or non-finite number.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Instance files are JSON objects:
//   {"means": [0.9, 0.5], "mu0": 0.7, "noise": "gaussian"}
// `noise` is optional ("gaussian" or "bounded:<half-width>").
BanditInstance parse_instance(const std::string& text);
BanditInstance load_instance(const std::string& path);
std::string instance_to_json(const BanditInstance& instance);
void save_instance(const std::string& path, const BanditInstance& instance);

// Experiment config files are JSON objects with keys
//   instance (inline object or path string, relative to the config file),
//   algorithm, deltas, c, trials, seed, safety_cap, output, emit_traces,
//   threads, check_invariants.
// Only `instance` is required.
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = "");
ExperimentConfig load_config(const std::string& path);
// Inline instance unless `instance_path` is set.
std::string config_to_json(const ExperimentConfig& config);
void save_config(const std::string& path, const ExperimentConfig& config);

}  // namespace oneid
