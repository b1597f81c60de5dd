#pragma once

// NUTS transition kernels: fixed step size, and locally step-size-adaptive
// NUTS with a Gibbs self-tuning accept/reject on the step-reduction exponent.
//
// Random numbers are consumed in a fixed order per transition:
//   1. d standard normals for the momentum,
//   2. M bits for the direction string,
//   3. (adaptive only) one uniform integer in {-1, 0, 1} for k - k_tilde,
//   4. one uniform per orbit index i > a during index selection.
// Rejected adaptive transitions consume exactly the same stream.

#include "gist/model.hpp"
#include "gist/orbit.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace gist {

struct AdaptiveConfig {
  double h = 0.5;      // coarse step size
  int max_doublings = 10;  // M
  double a_min = 0.7;  // acceptance threshold on exp(-dH_gap)
  int k_cap = 10;      // largest exponent tried by step_reduction

  void validate() const;
};

struct TransitionRecord {
  Vector next_position;
  bool accepted = true;
  int k_used = 0;
  int k_tilde = 0;
  int k_tilde_star = 0;
  std::int64_t orbit_len = 1;
  double dh_gap = 0.0;
  bool capped = false;  // a step-reduction search hit k_cap
};

/// Enlarged-space state (theta, rho, k, B, ell, a, b, L) of one adaptive
/// transition with its image under the involution.
struct AdaptiveTrace {
  PhasePoint start;
  PhasePoint proposal;
  int k = 0;
  DirectionString directions;
  DirectionString directions_star;
  OrbitSpec orbit;
  std::int64_t index = 0;
  int k_tilde = 0;
  int k_tilde_star = 0;
  bool capped = false;
  bool accepted = false;
};

struct StepReduction {
  int k = 1;
  bool capped = false;
};

/// Smallest k in [1:k_cap] with exp(-dH_gap) >= a_min for the orbit selected
/// at refinement 2^k. Returns {k_cap, true} when no such k exists.
StepReduction step_reduction(const TargetModel& model, const PhasePoint& z,
                             const DirectionString& directions, double h, double a_min, int k_cap);

/// p_k(k | k_tilde) = 1/3 on {k_tilde - 1, k_tilde, k_tilde + 1}.
double window_pmf(int k, int k_tilde);

/// Fixed-step NUTS transition with refinement R (R = 1 is standard NUTS).
TransitionRecord nuts_transition(const TargetModel& model, const Vector& theta, double h,
                                 std::int64_t refinement, int max_doublings, Rng& rng);

/// Position after one fixed-step NUTS transition.
Vector nuts_step(const TargetModel& model, const Vector& theta, double h, std::int64_t refinement,
                 int max_doublings, Rng& rng);

/// One step-size-adaptive NUTS transition, returning the whole enlarged state.
AdaptiveTrace adapt_nuts_trace(const TargetModel& model, const Vector& theta,
                               const AdaptiveConfig& cfg, Rng& rng);

TransitionRecord adapt_nuts_step(const TargetModel& model, const Vector& theta,
                                 const AdaptiveConfig& cfg, Rng& rng);

enum class SamplerMode { Fixed, Adaptive };

struct ChainSettings {
  SamplerMode mode = SamplerMode::Adaptive;
  double h = 0.5;
  std::int64_t refinement = 1;  // fixed mode only
  int max_doublings = 10;
  double a_min = 0.7;           // adaptive mode only
  int k_cap = 10;

  AdaptiveConfig adaptive() const { return {h, max_doublings, a_min, k_cap}; }
  void validate() const;
};

struct ChainResult {
  Eigen::MatrixXd draws;  // one row per transition
  std::vector<TransitionRecord> records;
};

/// Runs n_draws transitions from `initial`. Deterministic given the rng state.
ChainResult run_chain(const TargetModel& model, const ChainSettings& settings, std::size_t n_draws,
                      const Vector& initial, Rng& rng);

/// Seeds an rng from (seed, stream) so chains run from one seed are independent
/// and reproducible regardless of scheduling.
Rng make_chain_rng(std::uint64_t seed, std::uint64_t stream);

ChainResult run_chain(const TargetModel& model, const ChainSettings& settings, std::size_t n_draws,
                      const Vector& initial, std::uint64_t seed);

}  // namespace gist
