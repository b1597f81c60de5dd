#include "gist/model.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace gist {

PhasePoint::PhasePoint(Vector theta, Vector rho)
    : position(std::move(theta)), momentum(std::move(rho)) {
  if (position.size() != momentum.size()) {
    throw std::invalid_argument("PhasePoint: position and momentum lengths differ");
  }
}

double funnel_potential(double omega, const Vector& x) {
  const double n = static_cast<double>(x.size());
  return omega * omega / 18.0 + 0.5 * std::exp(-omega) * x.squaredNorm() + 0.5 * n * omega;
}

double stdnormal_potential(const Vector& x) { return 0.5 * x.squaredNorm(); }

FunnelModel::FunnelModel(std::size_t num_x) : num_x_(num_x) {
  if (num_x == 0) throw std::invalid_argument("funnel: need at least one x coordinate");
}

double FunnelModel::potential(const Vector& theta) const {
  if (static_cast<std::size_t>(theta.size()) != dim()) {
    throw std::invalid_argument("funnel: dimension mismatch");
  }
  const double omega = theta[0];
  const double sq = theta.tail(num_x_).squaredNorm();
  return omega * omega / 18.0 + 0.5 * std::exp(-omega) * sq +
         0.5 * static_cast<double>(num_x_) * omega;
}

void FunnelModel::gradient(const Vector& theta, Vector& out) const {
  if (static_cast<std::size_t>(theta.size()) != dim()) {
    throw std::invalid_argument("funnel: dimension mismatch");
  }
  out.resize(theta.size());
  const double omega = theta[0];
  const double scale = std::exp(-omega);
  const auto x = theta.tail(num_x_);
  out[0] = omega / 9.0 - 0.5 * scale * x.squaredNorm() + 0.5 * static_cast<double>(num_x_);
  out.tail(num_x_) = scale * x;
}

StdNormalModel::StdNormalModel(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("std_normal: dimension must be positive");
}

double StdNormalModel::potential(const Vector& theta) const {
  if (static_cast<std::size_t>(theta.size()) != dim_) {
    throw std::invalid_argument("std_normal: dimension mismatch");
  }
  return stdnormal_potential(theta);
}

void StdNormalModel::gradient(const Vector& theta, Vector& out) const {
  if (static_cast<std::size_t>(theta.size()) != dim_) {
    throw std::invalid_argument("std_normal: dimension mismatch");
  }
  out = theta;
}

FunctionModel::FunctionModel(std::string name, std::size_t dim, PotentialFn potential,
                             GradientFn gradient)
    : name_(std::move(name)),
      dim_(dim),
      potential_(std::move(potential)),
      gradient_(std::move(gradient)) {
  if (dim == 0) throw std::invalid_argument("FunctionModel: dimension must be positive");
  if (!potential_ || !gradient_) throw std::invalid_argument("FunctionModel: empty callable");
}

double FunctionModel::potential(const Vector& theta) const { return potential_(theta); }

void FunctionModel::gradient(const Vector& theta, Vector& out) const {
  out.resize(theta.size());
  gradient_(theta, out);
}

double hamiltonian(const TargetModel& model, const PhasePoint& z) {
  const auto d = static_cast<Eigen::Index>(model.dim());
  if (z.position.size() != d || z.momentum.size() != d) {
    throw std::invalid_argument("hamiltonian: phase point dimension does not match model");
  }
  return model.potential(z.position) + 0.5 * z.momentum.squaredNorm();
}

std::shared_ptr<const TargetModel> make_model(std::string_view name, std::size_t dim) {
  if (name == "funnel") return std::make_shared<FunnelModel>(dim);
  if (name == "std_normal") return std::make_shared<StdNormalModel>(dim);
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

}  // namespace gist
