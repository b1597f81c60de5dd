#include "gist/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace gist {

LeapfrogStepper::LeapfrogStepper(const TargetModel& model, double step_size, PhasePoint start)
    : model_(&model), h_(step_size), state_(std::move(start)) {
  if (!(step_size > 0.0)) throw std::invalid_argument("leapfrog: step size must be positive");
  const auto d = static_cast<Eigen::Index>(model.dim());
  if (state_.position.size() != d || state_.momentum.size() != d) {
    throw std::invalid_argument("leapfrog: phase point dimension does not match model");
  }
  model_->gradient(state_.position, grad_);
}

double LeapfrogStepper::step() {
  const double half = 0.5 * h_;
  state_.momentum -= half * grad_;
  state_.position += h_ * state_.momentum;
  model_->gradient(state_.position, grad_);
  state_.momentum -= half * grad_;
  return energy(*model_, state_.position, state_.momentum);
}

LeapfrogResult leapfrog(const TargetModel& model, const PhasePoint& z, std::int64_t steps,
                        double h, std::int64_t max_fine_steps) {
  if (steps > max_fine_steps || steps < -max_fine_steps) {
    throw std::length_error("leapfrog: step count exceeds the fine-step cap");
  }
  LeapfrogStepper stepper(model, h, z);
  const double h0 = energy(model, z.position, z.momentum);

  LeapfrogResult result;
  result.h_max = h0;
  result.h_min = h0;
  if (!std::isfinite(h0)) {
    result.divergent = true;
    result.h_max = std::numeric_limits<double>::infinity();
    result.endpoint = z;
    return result;
  }

  const std::int64_t n = steps < 0 ? -steps : steps;
  if (steps < 0) stepper.flip_momentum();
  for (std::int64_t i = 0; i < n; ++i) {
    const double e = stepper.step();
    if (!std::isfinite(e)) {
      result.divergent = true;
      result.h_max = std::numeric_limits<double>::infinity();
      break;
    }
    result.h_max = std::max(result.h_max, e);
    result.h_min = std::min(result.h_min, e);
  }
  if (steps < 0) stepper.flip_momentum();
  result.endpoint = std::move(stepper.state());
  return result;
}

LeapfrogResult leapfrog_refined(const TargetModel& model, const PhasePoint& z,
                                std::int64_t coarse_steps, double h, std::int64_t refinement,
                                std::int64_t max_fine_steps) {
  if (refinement < 1) throw std::invalid_argument("leapfrog: refinement factor must be >= 1");
  if (coarse_steps > max_fine_steps / refinement || coarse_steps < -(max_fine_steps / refinement)) {
    throw std::length_error("leapfrog: step count exceeds the fine-step cap");
  }
  return leapfrog(model, z, coarse_steps * refinement, h / static_cast<double>(refinement),
                  max_fine_steps);
}

}  // namespace gist
