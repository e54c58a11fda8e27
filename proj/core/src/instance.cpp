#include "oneid/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oneid {

NoiseModel NoiseModel::bounded(double half_width) {
  if (!std::isfinite(half_width) || half_width <= 0.0 || half_width > 1.0) {
    throw std::invalid_argument("bounded noise half width must lie in (0, 1]");
  }
  return {Kind::Bounded, half_width};
}

std::string NoiseModel::to_string() const {
  if (kind == Kind::Gaussian) return "gaussian";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), half_width);
  (void)ec;
  return "bounded:" + std::string(buf, end);
}

NoiseModel NoiseModel::parse(const std::string& text) {
  if (text == "gaussian") return gaussian();
  const std::string prefix = "bounded:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    double w = 0.0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), w);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) {
      throw std::invalid_argument("malformed noise half width: " + rest);
    }
    return bounded(w);
  }
  throw std::invalid_argument("unknown noise model: " + text);
}

BanditInstance::BanditInstance(std::vector<double> means, double mu0, NoiseModel noise)
    : means_(std::move(means)), mu0_(mu0), noise_(noise) {
  if (means_.size() < 2) {
    throw std::invalid_argument("an instance needs at least two arms");
  }
  if (!std::isfinite(mu0_)) {
    throw std::invalid_argument("threshold must be finite");
  }
  for (double m : means_) {
    if (!std::isfinite(m)) throw std::invalid_argument("arm means must be finite");
  }
  if (noise_.kind == NoiseModel::Kind::Bounded) noise_ = NoiseModel::bounded(noise_.half_width);
}

double BanditInstance::mean(std::size_t arm) const {
  if (arm >= means_.size()) throw std::out_of_range("arm index out of range");
  return means_[arm];
}

double BanditInstance::extended_value(std::size_t index) const {
  if (index == 0) return mu0_;
  if (index > means_.size()) throw std::out_of_range("extended index out of range");
  return means_[index - 1];
}

bool BanditInstance::within_unit_interval() const noexcept {
  auto in = [](double x) { return x >= 0.0 && x <= 1.0; };
  return in(mu0_) && std::all_of(means_.begin(), means_.end(), in);
}

std::vector<std::size_t> BanditInstance::arms_by_mean() const {
  std::vector<std::size_t> order(means_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return means_[a] > means_[b]; });
  return order;
}

BanditInstance BanditInstance::permuted(std::span<const std::size_t> order) const {
  if (order.size() != means_.size()) {
    throw std::invalid_argument("permutation size does not match arm count");
  }
  std::vector<double> out(means_.size());
  std::vector<bool> seen(means_.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= means_.size() || seen[order[i]]) {
      throw std::invalid_argument("not a permutation");
    }
    seen[order[i]] = true;
    out[i] = means_[order[i]];
  }
  return BanditInstance(std::move(out), mu0_, noise_);
}

InstanceClass classify(const BanditInstance& instance) {
  const auto means = instance.means();
  const double best = *std::max_element(means.begin(), means.end());
  if (best < instance.mu0()) return {InstanceKind::Negative, 0};
  if (best == instance.mu0()) return {InstanceKind::Boundary, 0};
  const auto m = static_cast<std::size_t>(std::count_if(
      means.begin(), means.end(), [&](double x) { return x > instance.mu0(); }));
  return {InstanceKind::Positive, m};
}

const char* to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::Positive: return "positive";
    case InstanceKind::Negative: return "negative";
    case InstanceKind::Boundary: return "boundary";
  }
  return "?";
}

double gap(const BanditInstance& instance, std::size_t i, std::size_t j) {
  return std::abs(instance.extended_value(i) - instance.extended_value(j));
}

double sample(const BanditInstance& instance, std::size_t arm, RngStream& rng) {
  const double mu = instance.mean(arm);
  const NoiseModel& noise = instance.noise();
  if (noise.kind == NoiseModel::Kind::Gaussian) return mu + rng.next_gaussian();
  return mu + noise.half_width * (2.0 * rng.next_uniform() - 1.0);
}

void require_simulatable(const BanditInstance& instance) {
  if (classify(instance).kind == InstanceKind::Boundary) {
    throw std::invalid_argument(
        "boundary instance (best arm mean equals the threshold) cannot be simulated");
  }
}

}  // namespace oneid
