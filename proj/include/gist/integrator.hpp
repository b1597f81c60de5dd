#pragma once

// Leapfrog integration with running extrema of the Hamiltonian.

#include "gist/model.hpp"

#include <cstdint>

namespace gist {

/// Default bound on |L| * R fine steps for a single leapfrog call.
inline constexpr std::int64_t kDefaultMaxFineSteps = std::int64_t{1} << 20;

/// Endpoint of a leapfrog path plus the max/min Hamiltonian over every visited
/// state, the start included. A non-finite energy stops integration early,
/// sets `divergent` and forces h_max to +infinity.
struct LeapfrogResult {
  PhasePoint endpoint;
  double h_max = 0.0;
  double h_min = 0.0;
  bool divergent = false;
};

/// U(theta) + |rho|^2/2 evaluated the same way everywhere in the library, so
/// that energies recomputed along different routes compare bit for bit.
inline double energy(const TargetModel& model, const Vector& theta, const Vector& rho) {
  return model.potential(theta) + 0.5 * rho.squaredNorm();
}

/// Stateful forward leapfrog stepper. Keeps grad U at the current position so
/// each step costs one gradient evaluation; results are identical to
/// recomputing the gradient at the start of every step.
class LeapfrogStepper {
 public:
  LeapfrogStepper(const TargetModel& model, double step_size, PhasePoint start);

  /// One leapfrog step forward in time; returns the energy of the new state.
  double step();
  /// rho -> -rho. Exact, so stepping with flipped momentum integrates backward.
  void flip_momentum() { state_.momentum = -state_.momentum; }

  const PhasePoint& state() const { return state_; }
  PhasePoint& state() { return state_; }
  double step_size() const { return h_; }

 private:
  const TargetModel* model_;
  double h_;
  PhasePoint state_;
  Vector grad_;
};

/// Phi_h^L(z). Negative L flips the momentum, integrates |L| steps forward and
/// flips back. Throws std::invalid_argument for h <= 0 or a bad start point and
/// std::length_error when |L| exceeds `max_fine_steps`.
LeapfrogResult leapfrog(const TargetModel& model, const PhasePoint& z, std::int64_t steps,
                        double h, std::int64_t max_fine_steps = kDefaultMaxFineSteps);

/// leapfrog(z, R * L_coarse, h / R): every coarse step is R fine steps and the
/// energy extrema span every fine gridpoint.
LeapfrogResult leapfrog_refined(const TargetModel& model, const PhasePoint& z,
                                std::int64_t coarse_steps, double h, std::int64_t refinement,
                                std::int64_t max_fine_steps = kDefaultMaxFineSteps);

}  // namespace gist
