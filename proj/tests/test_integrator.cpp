#include "doctest.h"

#include "gist/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using gist::PhasePoint;
using gist::Vector;

namespace {

PhasePoint point(std::initializer_list<double> theta, std::initializer_list<double> rho) {
  Vector t(static_cast<Eigen::Index>(theta.size())), r(static_cast<Eigen::Index>(rho.size()));
  Eigen::Index i = 0;
  for (const double x : theta) t[i++] = x;
  i = 0;
  for (const double x : rho) r[i++] = x;
  return {t, r};
}

// Hand-coded leapfrog for U = |x|^2/2.
PhasePoint normal_step(const PhasePoint& z, double h) {
  const Vector half = z.momentum - 0.5 * h * z.position;
  const Vector theta = z.position + h * half;
  return {theta, half - 0.5 * h * theta};
}

double modified_energy(const PhasePoint& z, double h) {
  return 0.5 * (1.0 - h * h / 4.0) * z.position.squaredNorm() + 0.5 * z.momentum.squaredNorm();
}

PhasePoint random_point(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector t(static_cast<Eigen::Index>(dim)), r(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    t[i] = normal(rng);
    r[i] = normal(rng);
  }
  return {t, r};
}

}  // namespace

TEST_CASE("zero steps return the start") {
  const gist::StdNormalModel model(2);
  const auto z = point({0.3, -1.0}, {0.5, 2.0});
  const auto result = gist::leapfrog(model, z, 0, 0.5);
  CHECK(result.endpoint.position == z.position);
  CHECK(result.endpoint.momentum == z.momentum);
  CHECK(result.h_max == gist::hamiltonian(model, z));
  CHECK(result.h_min == gist::hamiltonian(model, z));
}

TEST_CASE("one step on the standard normal") {
  const gist::StdNormalModel model(1);
  const auto result = gist::leapfrog(model, point({1.0}, {0.0}), 1, 0.5);
  CHECK(result.endpoint.position[0] == doctest::Approx(0.875).epsilon(1e-15));
  CHECK(result.endpoint.momentum[0] == doctest::Approx(-0.46875).epsilon(1e-15));
}

TEST_CASE("matches a hand-coded integrator over many steps") {
  const gist::StdNormalModel model(3);
  std::mt19937_64 rng(3);
  auto z = random_point(3, rng);
  const auto result = gist::leapfrog(model, z, 40, 0.3);
  for (int i = 0; i < 40; ++i) z = normal_step(z, 0.3);
  CHECK((result.endpoint.position - z.position).norm() < 1e-12);
  CHECK((result.endpoint.momentum - z.momentum).norm() < 1e-12);
}

TEST_CASE("forward then backward returns to the start") {
  const gist::FunnelModel model(3);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto z = random_point(4, rng);
    const auto there = gist::leapfrog(model, z, 25, 0.05).endpoint;
    const auto back = gist::leapfrog(model, there, -25, 0.05).endpoint;
    CHECK((back.position - z.position).lpNorm<Eigen::Infinity>() < 1e-10);
    CHECK((back.momentum - z.momentum).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("negative step counts integrate the flipped state") {
  const gist::FunnelModel model(2);
  std::mt19937_64 rng(5);
  const auto z = random_point(3, rng);
  const auto backward = gist::leapfrog(model, z, -7, 0.1).endpoint;
  const auto flipped = gist::leapfrog(model, {z.position, -z.momentum}, 7, 0.1).endpoint;
  CHECK(backward.position == flipped.position);
  CHECK(backward.momentum == -flipped.momentum);
}

TEST_CASE("modified Hamiltonian is conserved on the standard normal") {
  const gist::StdNormalModel model(2);
  std::mt19937_64 rng(13);
  for (const double h : {0.1, 0.9, 1.5, 1.95}) {
    const auto z = random_point(2, rng);
    gist::LeapfrogStepper stepper(model, h, z);
    const double start = modified_energy(z, h);
    for (int i = 0; i < 500; ++i) {
      stepper.step();
      CHECK(std::abs(modified_energy(stepper.state(), h) - start) <= 1e-10 * start);
    }
  }
}

TEST_CASE("energy gap obeys the standard normal envelope") {
  const gist::StdNormalModel model(4);
  std::mt19937_64 rng(17);
  for (const double h : {0.25, 0.5, 1.0, 1.8}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto z = random_point(4, rng);
      const auto result = gist::leapfrog(model, z, 200, h);
      const double bound = h * h / (4.0 - h * h) * modified_energy(z, h);
      CHECK(result.h_max - result.h_min <= bound * (1.0 + 1e-12) + 1e-12);
    }
  }
}

TEST_CASE("energy extrema match recomputed iterates") {
  const gist::FunnelModel model(2);
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const auto z = random_point(3, rng);
    const int steps = (trial % 2 == 0 ? 1 : -1) * (3 + trial);
    const auto result = gist::leapfrog(model, z, steps, 0.2);
    double hi = gist::hamiltonian(model, z), lo = hi;
    const int sign = steps < 0 ? -1 : 1;
    for (int i = 1; i <= std::abs(steps); ++i) {
      const double e = gist::hamiltonian(model, gist::leapfrog(model, z, sign * i, 0.2).endpoint);
      hi = std::max(hi, e);
      lo = std::min(lo, e);
    }
    CHECK(result.h_max == doctest::Approx(hi).epsilon(1e-13));
    CHECK(result.h_min == doctest::Approx(lo).epsilon(1e-13));
  }
}

TEST_CASE("refined integration is R fine steps per coarse step") {
  const gist::FunnelModel model(2);
  std::mt19937_64 rng(23);
  const auto z = random_point(3, rng);
  const auto refined = gist::leapfrog_refined(model, z, 5, 0.4, 2);
  const auto fine = gist::leapfrog(model, z, 10, 0.2);
  CHECK(refined.endpoint.position == fine.endpoint.position);
  CHECK(refined.h_max == fine.h_max);
  const auto plain = gist::leapfrog_refined(model, z, 5, 0.4, 1);
  CHECK(plain.endpoint.position == gist::leapfrog(model, z, 5, 0.4).endpoint.position);
}

TEST_CASE("divergence is flagged with infinite maximum energy") {
  const gist::FunnelModel model(2);
  Vector theta(3);
  theta << -30.0, 1.0, 1.0;
  const auto result = gist::leapfrog(model, {theta, Vector::Zero(3)}, 50, 1.0);
  CHECK(result.divergent);
  CHECK(std::isinf(result.h_max));
}

TEST_CASE("invalid arguments") {
  const gist::StdNormalModel model(1);
  const auto z = point({0.0}, {1.0});
  CHECK_THROWS_AS(gist::leapfrog(model, z, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gist::leapfrog(model, z, 1, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(gist::leapfrog(model, z, 11, 0.1, 10), std::length_error);
  CHECK_THROWS_AS(gist::leapfrog_refined(model, z, 6, 0.1, 2, 10), std::length_error);
}
