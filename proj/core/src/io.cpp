#include "oneid/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace oneid {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
  if (!out) throw FormatError("write failed for '" + path + "'");
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

double finite_number(const json& j, const char* key) {
  if (!j.is_number()) throw FormatError(std::string("'") + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw FormatError(std::string("'") + key + "' must be finite");
  return v;
}

std::uint64_t count(const json& j, const char* key) {
  if (!j.is_number_unsigned()) {
    throw FormatError(std::string("'") + key + "' must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

BanditInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("instance must be a JSON object");
  if (!j.contains("means") || !j.at("means").is_array()) {
    throw FormatError("instance needs a 'means' array");
  }
  if (!j.contains("mu0")) throw FormatError("instance needs 'mu0'");
  std::vector<double> means;
  for (const auto& m : j.at("means")) means.push_back(finite_number(m, "means"));
  const double mu0 = finite_number(j.at("mu0"), "mu0");
  NoiseModel noise;
  if (j.contains("noise")) {
    if (!j.at("noise").is_string()) throw FormatError("'noise' must be a string");
    try {
      noise = NoiseModel::parse(j.at("noise").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }
  try {
    return BanditInstance(std::move(means), mu0, noise);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

json instance_json(const BanditInstance& instance) {
  json j;
  j["means"] = std::vector<double>(instance.means().begin(), instance.means().end());
  j["mu0"] = instance.mu0();
  j["noise"] = instance.noise().to_string();
  return j;
}

}  // namespace

BanditInstance parse_instance(const std::string& text) {
  return instance_from_json(parse_json(text));
}

BanditInstance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

std::string instance_to_json(const BanditInstance& instance) {
  return instance_json(instance).dump(2) + "\n";
}

void save_instance(const std::string& path, const BanditInstance& instance) {
  write_file(path, instance_to_json(instance));
}

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
  const json j = parse_json(text);
  if (!j.is_object()) throw FormatError("config must be a JSON object");
  static const char* const known[] = {"instance", "algorithm", "deltas",      "c",
                                      "trials",   "seed",      "safety_cap",  "output",
                                      "emit_traces", "threads", "check_invariants"};
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return key == k; }) == std::end(known)) {
      throw FormatError("unknown config key '" + key + "'");
    }
  }
  if (!j.contains("instance")) throw FormatError("config needs an 'instance'");

  ExperimentConfig cfg;
  const json& inst = j.at("instance");
  if (inst.is_string()) {
    fs::path p = inst.get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
    cfg.instance_path = fs::absolute(p).lexically_normal().string();
    cfg.instance = load_instance(cfg.instance_path);
  } else {
    cfg.instance = instance_from_json(inst);
  }
  if (j.contains("algorithm")) {
    if (!j.at("algorithm").is_string()) throw FormatError("'algorithm' must be a string");
    try {
      cfg.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }
  if (j.contains("deltas")) {
    const json& d = j.at("deltas");
    cfg.deltas.clear();
    if (d.is_array()) {
      for (const auto& x : d) cfg.deltas.push_back(finite_number(x, "deltas"));
    } else {
      cfg.deltas.push_back(finite_number(d, "deltas"));
    }
  }
  if (j.contains("c")) cfg.c = finite_number(j.at("c"), "c");
  if (j.contains("trials")) cfg.trials = count(j.at("trials"), "trials");
  if (j.contains("seed")) cfg.base_seed = count(j.at("seed"), "seed");
  if (j.contains("safety_cap")) cfg.safety_cap = count(j.at("safety_cap"), "safety_cap");
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw FormatError("'output' must be a string");
    cfg.output = j.at("output").get<std::string>();
  }
  if (j.contains("emit_traces")) {
    if (!j.at("emit_traces").is_boolean()) throw FormatError("'emit_traces' must be a boolean");
    cfg.emit_traces = j.at("emit_traces").get<bool>();
  }
  if (j.contains("threads")) cfg.threads = static_cast<unsigned>(count(j.at("threads"), "threads"));
  if (j.contains("check_invariants")) {
    if (!j.at("check_invariants").is_boolean()) {
      throw FormatError("'check_invariants' must be a boolean");
    }
    cfg.check_invariants = j.at("check_invariants").get<bool>();
  }
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  return parse_config(read_file(path), fs::path(path).parent_path().string());
}

std::string config_to_json(const ExperimentConfig& config) {
  json j;
  if (config.instance_path.empty()) {
    j["instance"] = instance_json(config.instance);
  } else {
    j["instance"] = config.instance_path;
  }
  j["algorithm"] = to_string(config.algorithm);
  j["deltas"] = config.deltas;
  j["c"] = config.c;
  j["trials"] = config.trials;
  j["seed"] = config.base_seed;
  j["safety_cap"] = config.safety_cap;
  j["output"] = config.output;
  j["emit_traces"] = config.emit_traces;
  j["threads"] = config.threads;
  j["check_invariants"] = config.check_invariants;
  return j.dump(2) + "\n";
}

void save_config(const std::string& path, const ExperimentConfig& config) {
  write_file(path, config_to_json(config));
}

}  // namespace oneid
