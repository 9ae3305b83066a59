#include "abbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "abbm/errors.hpp"
#include "abbm/particles.hpp"

namespace abbm {

OffspringLaw OffspringLaw::from_probabilities(const std::map<int, double>& probabilities) {
  if (probabilities.empty()) throw ParameterError("offspring law has no mass");
  for (const auto& [k, p] : probabilities) {
    if (k == 0)
      throw ParameterError(
          "offspring law assigns p_0: the model requires L >= 1 (no death without offspring)");
    if (k < 0) throw ParameterError(fmt::format("offspring count k={} is negative", k));
    if (!(p >= 0.0) || !std::isfinite(p))
      throw ParameterError(fmt::format("p_{} = {} is not a probability", k, p));
  }
  OffspringLaw law;
  law.p_.assign(static_cast<std::size_t>(probabilities.rbegin()->first), 0.0);
  for (const auto& [k, p] : probabilities) law.p_[static_cast<std::size_t>(k - 1)] = p;
  while (!law.p_.empty() && law.p_.back() == 0.0) law.p_.pop_back();

  double total = 0.0;
  for (double p : law.p_) total += p;
  if (std::abs(total - 1.0) > 1e-12)
    throw ParameterError(fmt::format("offspring probabilities sum to {:.17g}, not 1", total));

  for (std::size_t i = 0; i < law.p_.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    law.mean_ += k * law.p_[i];
    law.second_moment_ += k * k * law.p_[i];
  }
  if (!(law.mean_ > 1.0))
    throw ParameterError(
        fmt::format("offspring mean m = {:.17g} must exceed 1 (supercritical branching)", law.mean_));
  law.build_alias_table();
  return law;
}

OffspringLaw OffspringLaw::dyadic() { return from_probabilities({{2, 1.0}}); }

double OffspringLaw::probability(int k) const {
  if (k < 1 || k > max_offspring()) return 0.0;
  return p_[static_cast<std::size_t>(k - 1)];
}

double OffspringLaw::generating_function(double s) const noexcept {
  // Horner on sum_k p_k s^k = s * sum_k p_k s^(k-1).
  double acc = 0.0;
  for (auto it = p_.rbegin(); it != p_.rend(); ++it) acc = acc * s + *it;
  return acc * s;
}

void OffspringLaw::build_alias_table() {
  const std::size_t n = p_.size();
  alias_threshold_.assign(n, 1.0);
  alias_index_.resize(n);
  std::iota(alias_index_.begin(), alias_index_.end(), 0);
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = p_[i] * static_cast<double>(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) (scaled[i] < 1.0 ? small : large).push_back(i);
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    alias_threshold_[s] = scaled[s];
    alias_index_[s] = static_cast<int>(l);
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (std::size_t i : small) alias_threshold_[i] = 1.0;
  for (std::size_t i : large) alias_threshold_[i] = 1.0;
}

int OffspringLaw::sample(RandomStream& rng) const {
  const std::size_t n = p_.size();
  if (n == 1) return 1;
  const double u = rng.uniform() * static_cast<double>(n);
  const auto column = std::min(static_cast<std::size_t>(u), n - 1);
  const double frac = u - static_cast<double>(column);
  const std::size_t pick = frac < alias_threshold_[column]
                               ? column
                               : static_cast<std::size_t>(alias_index_[column]);
  return static_cast<int>(pick) + 1;
}

double lambda_star(double beta, const OffspringLaw& law) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw ParameterError(fmt::format("branching rate beta = {} must be positive", beta));
  return std::sqrt(2.0 * beta * (law.mean() - 1.0));
}

double pgf(const OffspringLaw& law, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError(fmt::format("pgf argument s = {} outside [0,1]", s));
  return law.generating_function(s);
}

std::string to_string(Frame frame) {
  switch (frame) {
    case Frame::DriftedAbsorbedAtZero: return "drifted";
    case Frame::StandardWithMovingBarrier: return "standard";
    case Frame::NoBarrier: return "none";
  }
  return "?";
}

Frame frame_from_string(const std::string& name) {
  if (name == "drifted") return Frame::DriftedAbsorbedAtZero;
  if (name == "standard") return Frame::StandardWithMovingBarrier;
  if (name == "none") return Frame::NoBarrier;
  throw ConfigError(fmt::format("unknown frame '{}' (expected drifted, standard or none)", name));
}

ModelParams ModelParams::make(double beta, double rho, double x0, Frame frame, OffspringLaw law) {
  if (!std::isfinite(rho)) throw ParameterError("rho must be finite");
  if (!std::isfinite(x0)) throw ParameterError("x0 must be finite");
  if (frame != Frame::NoBarrier && !(x0 > 0.0))
    throw ParameterError(fmt::format("start position x0 = {} must be > 0 above the barrier", x0));
  ModelParams params;
  params.lambda_star = abbm::lambda_star(beta, law);
  params.beta = beta;
  params.rho = rho;
  params.x0 = x0;
  params.frame = frame;
  params.law = std::move(law);
  return params;
}

ModelParams ModelParams::single_particle(double rho, double x0, Frame frame) {
  if (frame != Frame::NoBarrier && !(x0 > 0.0))
    throw ParameterError(fmt::format("start position x0 = {} must be > 0 above the barrier", x0));
  ModelParams params;
  params.beta = 0.0;
  params.rho = rho;
  params.x0 = x0;
  params.frame = frame;
  params.lambda_star = 0.0;
  return params;
}

double centering(double t, double lambda, double centering_drift) {
  if (!(t > 0.0)) throw DomainError(fmt::format("centering needs t > 0, got {}", t));
  if (!(lambda > 0.0)) throw StateError("centering needs a positive speed lambda*");
  return (lambda - centering_drift) * t - 1.5 / lambda * std::log(t);
}

double centering(double t, const ModelParams& params) {
  return centering(t, params.lambda_star, params.centering_drift());
}

TestFunction::TestFunction(std::string name, std::vector<double> breakpoints,
                           std::vector<double> values)
    : name_(std::move(name)), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.empty() || breakpoints_.size() != values_.size())
    throw ParameterError("test function needs matching, non-empty breakpoints and values");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] > breakpoints_[i - 1]))
      throw ParameterError("test function breakpoints must be strictly increasing");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("test function values must be >= 0");
  if (values_.front() != 0.0)
    throw ParameterError("test function must vanish at its left support edge");
  sup_ = *std::max_element(values_.begin(), values_.end());
}

TestFunction TestFunction::smoothed_step(double a, double delta, double height) {
  if (!(delta > 0.0)) throw ParameterError("ramp width must be positive");
  return TestFunction("step", {a - delta, a}, {0.0, height});
}

TestFunction TestFunction::tent(double center, double half_width, double height) {
  if (!(half_width > 0.0)) throw ParameterError("tent half-width must be positive");
  return TestFunction("tent", {center - half_width, center, center + half_width},
                      {0.0, height, 0.0});
}

TestFunction TestFunction::constant_half_line(double a, double level, double delta) {
  if (!(delta > 0.0)) throw ParameterError("ramp width must be positive");
  return TestFunction("half", {a - delta, a}, {0.0, level});
}

TestFunction TestFunction::zero() { return TestFunction("zero", {0.0}, {0.0}); }

double TestFunction::operator()(double x) const noexcept {
  if (x <= breakpoints_.front()) return 0.0;
  if (x >= breakpoints_.back()) return values_.back();
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto hi = static_cast<std::size_t>(it - breakpoints_.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - breakpoints_[lo]) / (breakpoints_[hi] - breakpoints_[lo]);
  return values_[lo] + w * (values_[hi] - values_[lo]);
}

std::vector<TestFunction> canonical_test_functions(double delta) {
  return {canonical_test_function("step", delta), canonical_test_function("tent", delta),
          canonical_test_function("half", delta)};
}

TestFunction canonical_test_function(const std::string& name, double delta) {
  if (name == "step") return TestFunction::smoothed_step(0.0, delta, 1.0);
  if (name == "tent") return TestFunction::tent(0.0, 1.0, 1.0);
  if (name == "half") return TestFunction::constant_half_line(-1.0, 0.3, delta);
  if (name == "zero") return TestFunction::zero();
  throw ConfigError(fmt::format("unknown test function '{}' (expected step, tent, half or zero)", name));
}

std::string to_string(BarrierMode mode) { return mode == BarrierMode::Kill ? "kill" : "tag"; }

BarrierMode barrier_mode_from_string(const std::string& name) {
  if (name == "kill") return BarrierMode::Kill;
  if (name == "tag") return BarrierMode::Tag;
  throw ConfigError(fmt::format("unknown barrier mode '{}' (expected kill or tag)", name));
}

PopulationSnapshot frame_shift(const PopulationSnapshot& snapshot, double t,
                               ShiftDirection direction) {
  const Frame target = direction == ShiftDirection::StandardToDrifted
                           ? Frame::DriftedAbsorbedAtZero
                           : Frame::StandardWithMovingBarrier;
  if (snapshot.shifted_from && snapshot.shifted_from->frame == target &&
      snapshot.shifted_from->time == t)
    return *snapshot.shifted_from;

  PopulationSnapshot out = snapshot;
  const double sign = direction == ShiftDirection::StandardToDrifted ? -1.0 : 1.0;
  for (Particle& p : out.particles) {
    p.position += sign * snapshot.rho * t;
    p.birth_position += sign * snapshot.rho * p.birth_time;
  }
  if (snapshot.frame != Frame::NoBarrier) out.frame = target;
  auto origin = std::make_shared<PopulationSnapshot>(snapshot);
  origin->shifted_from.reset();
  out.shifted_from = std::move(origin);
  return out;
}

}  // namespace abbm
