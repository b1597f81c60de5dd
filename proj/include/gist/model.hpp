#pragma once

// Target distributions for Hamiltonian samplers.
//
// Potentials are -log density with additive normalization constants dropped,
// so every reported energy (and every H+ - H- gap) is constant-free.

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace gist {

using Vector = Eigen::VectorXd;

/// Position and momentum of a Hamiltonian system with identity mass matrix.
struct PhasePoint {
  Vector position;
  Vector momentum;

  PhasePoint() = default;
  PhasePoint(Vector theta, Vector rho);

  std::size_t dim() const { return static_cast<std::size_t>(position.size()); }
};

/// A differentiable target density exp(-U(theta)).
///
/// Implementations are immutable after construction and may be shared by
/// any number of concurrently running chains.
class TargetModel {
 public:
  virtual ~TargetModel() = default;

  virtual std::size_t dim() const = 0;
  virtual std::string name() const = 0;
  virtual double potential(const Vector& theta) const = 0;
  /// Writes grad U(theta) into `out`, which is resized if needed.
  virtual void gradient(const Vector& theta, Vector& out) const = 0;

  Vector gradient(const Vector& theta) const {
    Vector g(theta.size());
    gradient(theta, g);
    return g;
  }
};

/// Neal's funnel: omega ~ normal(0, 3), x_i | omega ~ normal(0, exp(omega/2)).
/// Coordinates are laid out as (omega, x_1, ..., x_d); dim() == d + 1.
class FunnelModel final : public TargetModel {
 public:
  explicit FunnelModel(std::size_t num_x);

  std::size_t dim() const override { return num_x_ + 1; }
  std::string name() const override { return "funnel"; }
  double potential(const Vector& theta) const override;
  using TargetModel::gradient;
  void gradient(const Vector& theta, Vector& out) const override;

 private:
  std::size_t num_x_;
};

/// Standard normal in d dimensions, U(x) = |x|^2 / 2.
class StdNormalModel final : public TargetModel {
 public:
  explicit StdNormalModel(std::size_t dim);

  std::size_t dim() const override { return dim_; }
  std::string name() const override { return "std_normal"; }
  double potential(const Vector& theta) const override;
  using TargetModel::gradient;
  void gradient(const Vector& theta, Vector& out) const override;

 private:
  std::size_t dim_;
};

/// Adapts a pair of callables to the TargetModel interface.
class FunctionModel final : public TargetModel {
 public:
  using PotentialFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<void(const Vector&, Vector&)>;

  FunctionModel(std::string name, std::size_t dim, PotentialFn potential,
                GradientFn gradient);

  std::size_t dim() const override { return dim_; }
  std::string name() const override { return name_; }
  double potential(const Vector& theta) const override;
  using TargetModel::gradient;
  void gradient(const Vector& theta, Vector& out) const override;

 private:
  std::string name_;
  std::size_t dim_;
  PotentialFn potential_;
  GradientFn gradient_;
};

/// omega^2/18 + sum_i (x_i^2 exp(-omega)/2 + omega/2). Overflow of exp(-omega)
/// yields +infinity, which samplers treat as a divergence.
double funnel_potential(double omega, const Vector& x);

/// |x|^2 / 2.
double stdnormal_potential(const Vector& x);

/// U(theta) + |rho|^2 / 2. Throws std::invalid_argument on dimension mismatch.
double hamiltonian(const TargetModel& model, const PhasePoint& z);

/// Builds a shipped model by name: "funnel" (dim = number of x coordinates,
/// total dimension dim + 1) or "std_normal". Throws std::invalid_argument.
std::shared_ptr<const TargetModel> make_model(std::string_view name, std::size_t dim);

}  // namespace gist
