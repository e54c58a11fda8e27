#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oneid/rng.hpp"

namespace oneid {

// Reward noise around the arm mean.
struct NoiseModel {
  enum class Kind { Gaussian, Bounded };

  Kind kind = Kind::Gaussian;
  // Bounded noise is uniform on [mean - half_width, mean + half_width]; a
  // half width in (0, 1] keeps it 1-sub-Gaussian.
  double half_width = 0.0;

  static NoiseModel gaussian() { return {}; }
  static NoiseModel bounded(double half_width);

  std::string to_string() const;
  // Accepts "gaussian" or "bounded:<half-width>".
  static NoiseModel parse(const std::string& text);

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

// Ground truth of a 1-identification problem. Arms are addressed by their
// 0-based position in `means`; the threshold is separate.
class BanditInstance {
 public:
  // Throws std::invalid_argument when fewer than two arms are given or any
  // value is non-finite.
  BanditInstance(std::vector<double> means, double mu0,
                 NoiseModel noise = NoiseModel::gaussian());

  std::size_t num_arms() const noexcept { return means_.size(); }
  std::span<const double> means() const noexcept { return means_; }
  double mean(std::size_t arm) const;
  double mu0() const noexcept { return mu0_; }
  const NoiseModel& noise() const noexcept { return noise_; }

  // Extended indexing: 0 is the threshold, 1..K are the arms.
  double extended_value(std::size_t index) const;

  // Several analytical results assume means and threshold in [0, 1].
  bool within_unit_interval() const noexcept;

  // Arm indices sorted by descending mean, ties kept in input order.
  std::vector<std::size_t> arms_by_mean() const;

  BanditInstance permuted(std::span<const std::size_t> order) const;

  friend bool operator==(const BanditInstance&, const BanditInstance&) = default;

 private:
  std::vector<double> means_;
  double mu0_;
  NoiseModel noise_;
};

enum class InstanceKind { Positive, Negative, Boundary };

struct InstanceClass {
  InstanceKind kind;
  // Number of arms strictly above the threshold. Zero unless Positive.
  std::size_t m = 0;

  friend bool operator==(const InstanceClass&, const InstanceClass&) = default;
};

InstanceClass classify(const BanditInstance& instance);

const char* to_string(InstanceKind kind);

// |value(i) - value(j)| on extended indices (0 = threshold).
// Throws std::out_of_range for indices above K.
double gap(const BanditInstance& instance, std::size_t i, std::size_t j);

// One reward from `arm`. Gaussian noise has unit variance.
double sample(const BanditInstance& instance, std::size_t arm, RngStream& rng);

// Throws std::invalid_argument for Boundary instances; every simulation entry
// point calls this.
void require_simulatable(const BanditInstance& instance);

}  // namespace oneid
