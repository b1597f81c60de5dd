#include "gist/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace gist {

namespace {

Vector draw_momentum(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector rho(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < rho.size(); ++i) rho[i] = normal(rng);
  return rho;
}

std::int64_t refinement_for(int k) {
  if (k < 0 || k > 40) throw std::out_of_range("step-reduction exponent out of range");
  return std::int64_t{1} << k;
}

void check_position(const TargetModel& model, const Vector& theta) {
  if (static_cast<std::size_t>(theta.size()) != model.dim()) {
    throw std::invalid_argument("sampler: position dimension does not match model");
  }
}

}  // namespace

void AdaptiveConfig::validate() const {
  if (!(h > 0.0)) throw std::invalid_argument("adaptive config: h must be positive");
  if (max_doublings < 0 || max_doublings > 30) {
    throw std::invalid_argument("adaptive config: M must be in [0, 30]");
  }
  if (!(a_min > 0.0 && a_min < 1.0)) throw std::invalid_argument("adaptive config: a_min must be in (0, 1)");
  if (k_cap < 1 || k_cap > 30) throw std::invalid_argument("adaptive config: k_cap must be in [1, 30]");
}

void ChainSettings::validate() const {
  if (mode == SamplerMode::Adaptive) {
    adaptive().validate();
    return;
  }
  if (!(h > 0.0)) throw std::invalid_argument("chain settings: h must be positive");
  if (refinement < 1) throw std::invalid_argument("chain settings: R must be >= 1");
  if (max_doublings < 0 || max_doublings > 30) {
    throw std::invalid_argument("chain settings: M must be in [0, 30]");
  }
}

StepReduction step_reduction(const TargetModel& model, const PhasePoint& z,
                             const DirectionString& directions, double h, double a_min, int k_cap) {
  if (k_cap < 1) throw std::invalid_argument("step_reduction: k_cap must be >= 1");
  for (int k = 1; k <= k_cap; ++k) {
    const auto orbit = orbit_selection(model, z, directions, h, refinement_for(k));
    if (std::exp(-orbit.dh_gap) >= a_min) return {k, false};
  }
  return {k_cap, true};
}

double window_pmf(int k, int k_tilde) {
  return (k >= k_tilde - 1 && k <= k_tilde + 1) ? 1.0 / 3.0 : 0.0;
}

TransitionRecord nuts_transition(const TargetModel& model, const Vector& theta, double h,
                                 std::int64_t refinement, int max_doublings, Rng& rng) {
  check_position(model, theta);
  if (max_doublings < 0) throw std::invalid_argument("nuts: M must be non-negative");
  const PhasePoint z(theta, draw_momentum(model.dim(), rng));
  const auto directions = DirectionString::random(static_cast<std::size_t>(max_doublings), rng);
  const auto orbit = orbit_selection(model, z, directions, h, refinement);
  auto selected = index_selection(model, z, orbit.a, orbit.b, h, refinement, rng);

  TransitionRecord record;
  record.next_position = std::move(selected.endpoint.position);
  record.orbit_len = orbit.size();
  record.dh_gap = orbit.dh_gap;
  return record;
}

Vector nuts_step(const TargetModel& model, const Vector& theta, double h, std::int64_t refinement,
                 int max_doublings, Rng& rng) {
  return nuts_transition(model, theta, h, refinement, max_doublings, rng).next_position;
}

AdaptiveTrace adapt_nuts_trace(const TargetModel& model, const Vector& theta,
                               const AdaptiveConfig& cfg, Rng& rng) {
  cfg.validate();
  check_position(model, theta);

  AdaptiveTrace trace;
  trace.start = PhasePoint(theta, draw_momentum(model.dim(), rng));
  trace.directions = DirectionString::random(static_cast<std::size_t>(cfg.max_doublings), rng);

  const auto forward = step_reduction(model, trace.start, trace.directions, cfg.h, cfg.a_min, cfg.k_cap);
  trace.k_tilde = forward.k;
  std::uniform_int_distribution<int> offset(-1, 1);
  trace.k = forward.k + offset(rng);

  const auto refinement = refinement_for(trace.k);
  trace.orbit = orbit_selection(model, trace.start, trace.directions, cfg.h, refinement);
  auto selected = index_selection(model, trace.start, trace.orbit.a, trace.orbit.b, cfg.h, refinement, rng);
  trace.index = selected.index;
  trace.proposal = std::move(selected.endpoint);
  trace.directions_star = b_star(trace.index, trace.orbit.a, trace.orbit.b, trace.directions);

  const auto backward =
      step_reduction(model, trace.proposal, trace.directions_star, cfg.h, cfg.a_min, cfg.k_cap);
  trace.k_tilde_star = backward.k;
  trace.capped = forward.capped || backward.capped;

  // Uniform window: the ratio p_k(k | k~*) / p_k(k | k~) is either 0 or 1.
  const double ratio = window_pmf(trace.k, trace.k_tilde_star) / window_pmf(trace.k, trace.k_tilde);
  trace.accepted = !trace.capped && ratio >= 1.0;
  const bool in_window = trace.k >= trace.k_tilde_star - 1 && trace.k <= trace.k_tilde_star + 1;
  if (trace.accepted != (!trace.capped && in_window)) {
    throw std::logic_error("adapt_nuts: acceptance ratio disagrees with the window overlap rule");
  }
  return trace;
}

TransitionRecord adapt_nuts_step(const TargetModel& model, const Vector& theta,
                                 const AdaptiveConfig& cfg, Rng& rng) {
  auto trace = adapt_nuts_trace(model, theta, cfg, rng);
  TransitionRecord record;
  record.accepted = trace.accepted;
  record.next_position = trace.accepted ? std::move(trace.proposal.position) : theta;
  record.k_used = trace.k;
  record.k_tilde = trace.k_tilde;
  record.k_tilde_star = trace.k_tilde_star;
  record.orbit_len = trace.orbit.size();
  record.dh_gap = trace.orbit.dh_gap;
  record.capped = trace.capped;
  return record;
}

ChainResult run_chain(const TargetModel& model, const ChainSettings& settings, std::size_t n_draws,
                      const Vector& initial, Rng& rng) {
  settings.validate();
  check_position(model, initial);
  if (n_draws < 1) throw std::invalid_argument("run_chain: need at least one draw");

  ChainResult result;
  result.draws.resize(static_cast<Eigen::Index>(n_draws), static_cast<Eigen::Index>(model.dim()));
  result.records.reserve(n_draws);
  const auto adaptive = settings.adaptive();
  Vector theta = initial;
  for (std::size_t i = 0; i < n_draws; ++i) {
    auto record = settings.mode == SamplerMode::Fixed
                      ? nuts_transition(model, theta, settings.h, settings.refinement,
                                        settings.max_doublings, rng)
                      : adapt_nuts_step(model, theta, adaptive, rng);
    theta = record.next_position;
    result.draws.row(static_cast<Eigen::Index>(i)) = theta.transpose();
    result.records.push_back(std::move(record));
  }
  return result;
}

Rng make_chain_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

ChainResult run_chain(const TargetModel& model, const ChainSettings& settings, std::size_t n_draws,
                      const Vector& initial, std::uint64_t seed) {
  auto rng = make_chain_rng(seed, 0);
  return run_chain(model, settings, n_draws, initial, rng);
}

}  // namespace gist
