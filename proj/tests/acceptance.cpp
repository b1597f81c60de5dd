// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "gist/cli.hpp"
#include "gist/integrator.hpp"
#include "gist/model.hpp"
#include "gist/orbit.hpp"
#include "gist/sampler.hpp"
#include "gist/verify.hpp"

#include <boost/math/distributions/normal.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace gist;

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double normal_fraction_below(double x, double sd) {
  return boost::math::cdf(boost::math::normal(0.0, sd), x);
}

Vector omega_column(const ChainResult& chain) { return chain.draws.col(0); }

Outcome funnel_bottleneck() {
  const FunnelModel model(10);
  ChainSettings s;
  s.mode = SamplerMode::Fixed;
  s.h = 0.25;
  s.refinement = 1;
  s.max_doublings = 10;
  auto rng = make_chain_rng(kSeed, 0);
  const auto chain = run_chain(model, s, 50000, Vector::Zero(11), rng);
  const Vector omega = omega_column(chain);
  const double frac = (omega.array() < -4.0).cast<double>().mean();
  const double limit = 0.25 * normal_fraction_below(-4.0, 3.0);
  return {frac < limit, fmt("fraction(omega < -4) = %.5f, limit %.5f", frac, limit)};
}

Outcome funnel_adaptive() {
  const FunnelModel model(10);
  ChainSettings s;
  s.mode = SamplerMode::Adaptive;
  s.h = 0.5;
  s.max_doublings = 10;
  s.a_min = 0.7;
  auto rng = make_chain_rng(kSeed, 0);
  const auto chain = run_chain(model, s, 50000, Vector::Zero(11), rng);
  const Vector omega = omega_column(chain);
  const double mean = omega.mean();
  const double sd = std::sqrt((omega.array() - mean).square().sum() / static_cast<double>(omega.size() - 1));
  const double frac = (omega.array() < -4.0).cast<double>().mean();
  const double exact = normal_fraction_below(-4.0, 3.0);
  const bool pass = std::abs(mean) <= 0.15 && sd >= 2.7 && sd <= 3.3 && frac >= 0.6 * exact &&
                    frac <= 1.4 * exact;
  return {pass, fmt("mean %.4f, sd %.4f, fraction(omega < -4) = %.5f in [%.5f, %.5f]", mean, sd, frac,
                    0.6 * exact, 1.4 * exact)};
}

Outcome step_size_scaling() {
  cli::ScalingConfig cfg;
  cfg.seed = kSeed;
  const auto result = cli::cmd_scaling(cfg);
  const double mode = result.slopes.at("mode");
  const double stationary = result.slopes.at("stationary");
  const bool pass = std::abs(mode + 0.5) <= 0.1 && std::abs(stationary + 0.25) <= 0.1;
  return {pass, fmt("slope at mode %.4f (target -0.5 +- 0.1), in stationarity %.4f (target -0.25 +- 0.1)",
                    mode, stationary)};
}

Outcome modified_hamiltonian() {
  const StdNormalModel model(4);
  Rng rng(kSeed);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (const double h : {1.85, 1.31, 0.925}) {
    Vector theta(4), rho(4);
    for (int i = 0; i < 4; ++i) {
      theta[i] = normal(rng);
      rho[i] = normal(rng);
    }
    const auto modified = [h](const PhasePoint& z) {
      return 0.5 * (1.0 - h * h / 4.0) * z.position.squaredNorm() + 0.5 * z.momentum.squaredNorm();
    };
    LeapfrogStepper stepper(model, h, PhasePoint(theta, rho));
    const double start = modified(stepper.state());
    for (int step = 0; step < 1000; ++step) {
      stepper.step();
      worst = std::max(worst, std::abs(modified(stepper.state()) - start) / start);
    }
  }
  return {worst <= 1e-10, fmt("max relative drift %.3e over h in {1.85, 1.31, 0.925}", worst)};
}

PhasePoint random_point(std::size_t dim, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector theta(static_cast<Eigen::Index>(dim)), rho(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    theta[i] = normal(rng);
    rho[i] = normal(rng);
  }
  return {theta, rho};
}

PhasePoint iterate(const TargetModel& model, const PhasePoint& z, std::int64_t index, double h,
                   std::int64_t refinement) {
  return leapfrog_refined(model, z, index, h, refinement, std::int64_t{1} << 40).endpoint;
}

// Every dyadic block of [a:b] of size >= 2, each endpoint integrated from z.
bool brute_force_sub_u_turn(const TargetModel& model, std::int64_t a, std::int64_t b, const PhasePoint& z,
                            double h, std::int64_t refinement) {
  const std::int64_t n = b - a + 1;
  std::map<std::int64_t, PhasePoint> points;
  for (std::int64_t i = a; i <= b; ++i) points.emplace(i, iterate(model, z, i, h, refinement));
  for (std::int64_t size = 2; size <= n; size *= 2) {
    for (std::int64_t lo = a; lo + size - 1 <= b; lo += size) {
      if (u_turn_between(points.at(lo), points.at(lo + size - 1))) return true;
    }
  }
  return false;
}

Outcome property_suite() {
  Rng rng(kSeed);
  std::size_t failures = 0;
  std::vector<std::string> parts;

  // (a) G o G on randomized enlarged states taken from funnel runs, plus k = 8 states.
  {
    const FunnelModel funnel(10);
    const AdaptiveConfig cfg{0.5, 6, 0.7, 10};
    std::vector<verify::EnlargedState> states;
    Vector theta = Vector::Zero(11);
    while (states.size() < 10000) {
      const auto trace = adapt_nuts_trace(funnel, theta, cfg, rng);
      states.push_back({trace.start, trace.k, trace.directions, trace.orbit.ell, trace.orbit.a,
                        trace.orbit.b, trace.index});
      if (trace.accepted) theta = trace.proposal.position;
    }
    for (int i = 0; i < 200; ++i) {
      const auto z = PhasePoint(theta, random_point(11, rng).momentum);
      const auto directions = DirectionString::random(4, rng);
      const auto orbit = orbit_selection(funnel, z, directions, 0.5, 256);
      const auto pick = index_selection(funnel, z, orbit.a, orbit.b, 0.5, 256, rng);
      states.push_back({z, 8, directions, orbit.ell, orbit.a, orbit.b, pick.index});
    }
    const auto report = verify::check_g_involution(funnel, states, 0.5);
    const bool ok = report.discrete_mismatches == 0 && report.max_continuous_deviation <= 1e-8;
    failures += ok ? 0 : 1;
    parts.push_back(fmt("(a) %zu states, %zu discrete mismatches, max deviation %.2e", report.states,
                        report.discrete_mismatches, report.max_continuous_deviation));
  }

  // (b) endpoint shift and doubling-count equality for every L of 10^3 selected orbits.
  {
    std::size_t bad = 0, checked = 0;
    const FunnelModel funnel(3);
    const StdNormalModel normal(3);
    std::uniform_int_distribution<int> m_dist(1, 7);
    std::uniform_real_distribution<double> h_dist(0.1, 1.2);
    for (int trial = 0; trial < 1000; ++trial) {
      const TargetModel& model = trial % 2 == 0 ? static_cast<const TargetModel&>(normal) : funnel;
      const auto z = random_point(model.dim(), rng);
      const double h = h_dist(rng);
      const std::int64_t refinement = std::int64_t{1} << (trial % 3);
      const auto directions = DirectionString::random(static_cast<std::size_t>(m_dist(rng)), rng);
      const auto orbit = orbit_selection(model, z, directions, h, refinement);
      LeapfrogStepper stepper(model, h / static_cast<double>(refinement), iterate(model, z, orbit.a, h, refinement));
      for (std::int64_t l = orbit.a; l <= orbit.b; ++l) {
        if (l > orbit.a) {
          for (std::int64_t r = 0; r < refinement; ++r) stepper.step();
        }
        const auto seen = orbit_selection(model, stepper.state(), b_star(l, orbit.a, orbit.b, directions), h,
                                          refinement);
        ++checked;
        if (seen.a != orbit.a - l || seen.b != orbit.b - l || seen.ell != orbit.ell) ++bad;
      }
    }
    failures += bad;
    parts.push_back(fmt("(b) %zu shifted orbits, %zu mismatches", checked, bad));
  }

  // (c) b_star applied twice is the identity, exhaustively for M <= 6.
  {
    std::size_t bad = 0, checked = 0;
    for (int m = 0; m <= 6; ++m) {
      for (std::uint32_t code = 0; code < (1u << m); ++code) {
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) bits[static_cast<std::size_t>(j)] = (code >> j) & 1u;
        const DirectionString directions(bits);
        for (int ell = 0; ell <= m; ++ell) {
          const auto [a, b] = orbit_endpoints(directions.prefix(static_cast<std::size_t>(ell)));
          for (std::int64_t l = a; l <= b; ++l) {
            const auto once = b_star(l, a, b, directions);
            const auto twice = b_star(-l, a - l, b - l, once);
            const auto shifted = orbit_endpoints(once.prefix(static_cast<std::size_t>(ell)));
            ++checked;
            if (!(twice == directions) || shifted.first != a - l || shifted.second != b - l) ++bad;
          }
        }
      }
    }
    failures += bad;
    parts.push_back(fmt("(c) %zu cases, %zu failures", checked, bad));
  }

  // (d) the worked bisection example.
  {
    const bool ok = beta_string(2, -3, 4) == DirectionString{1, 0, 1};
    failures += ok ? 0 : 1;
    parts.push_back(std::string("(d) beta(2,-3,4) ") + (ok ? "= (1,0,1)" : "mismatch"));
  }

  // (e) sub-U-turn recursion against a flat scan of all dyadic blocks.
  {
    std::size_t bad = 0;
    const FunnelModel funnel(2);
    const StdNormalModel normal(2);
    std::uniform_int_distribution<int> log_size(0, 6);
    std::uniform_int_distribution<int> offset(-70, 70);
    std::uniform_real_distribution<double> h_dist(0.05, 1.5);
    for (int trial = 0; trial < 1000; ++trial) {
      const TargetModel& model = trial % 2 == 0 ? static_cast<const TargetModel&>(normal) : funnel;
      const auto z = random_point(model.dim(), rng);
      const double h = h_dist(rng);
      const std::int64_t refinement = 1 + trial % 2;
      const std::int64_t a = offset(rng);
      const std::int64_t b = a + (std::int64_t{1} << log_size(rng)) - 1;
      const auto fast = indicator_sub_u_turn(model, a, b, z, h, refinement);
      const bool oracle = brute_force_sub_u_turn(model, a, b, z, h, refinement);
      if (!fast.divergent && fast.u_turn != oracle) ++bad;
      if (fast.divergent && !fast.u_turn) ++bad;
    }
    failures += bad;
    parts.push_back(fmt("(e) 1000 cases, %zu mismatches", bad));
  }

  std::string detail;
  for (const auto& p : parts) detail += (detail.empty() ? "" : "; ") + p;
  return {failures == 0, detail};
}

Outcome ks_recovery() {
  std::string detail;
  bool all = true;
  for (const std::size_t d : {std::size_t{1}, std::size_t{5}}) {
    const StdNormalModel model(d);
    double worst_p = 1.0;
    const auto attempt = [&](std::uint64_t seed) {
      auto rng = make_chain_rng(seed, d);
      ChainSettings s;
      s.mode = SamplerMode::Adaptive;
      s.h = 0.5;
      s.max_doublings = 10;
      s.a_min = 0.7;
      const auto chain = run_chain(model, s, 100000, Vector::Zero(static_cast<Eigen::Index>(d)), rng);
      bool ok = true;
      worst_p = 1.0;
      for (Eigen::Index c = 0; c < chain.draws.cols(); ++c) {
        const Vector column = chain.draws.col(c);
        const auto ks = verify::ks_stationarity_test(
            std::span<const double>(column.data(), static_cast<std::size_t>(column.size())),
            [](double x) { return verify::normal_cdf(x); });
        worst_p = std::min(worst_p, ks.p_value);
        ok = ok && ks.pass;
      }
      return ok;
    };
    const bool ok = verify::passes_with_retry(attempt, kSeed);
    all = all && ok;
    detail += fmt("%sd=%zu %s (min p %.4f)", detail.empty() ? "" : "; ", d, ok ? "pass" : "fail", worst_p);
  }
  return {all, detail};
}

Outcome kernel_oracle() {
  std::string detail;
  bool all = true;
  const StdNormalModel normal(2);
  const FunnelModel funnel(2);
  constexpr int kDraws = 100000;

  std::size_t cells = 0;
  for (int m = 0; m <= 6; ++m) {
    for (int which = 0; which < 2; ++which) {
      const TargetModel& model = which == 0 ? static_cast<const TargetModel&>(normal) : funnel;
      const double h = which == 0 ? 0.5 : 0.3;
      const std::int64_t refinement = which == 0 ? 1 : 2;
      const auto test = [&](std::uint64_t seed) {
        Rng rng = make_chain_rng(seed, static_cast<std::uint64_t>(10 * m + which));
        const auto z = random_point(model.dim(), rng);
        const auto table = verify::brute_force_orbit_kernel(model, z, h, refinement, m);
        std::map<verify::OrbitKey, std::int64_t> counts;
        for (int i = 0; i < kDraws; ++i) {
          const auto spec = orbit_selection(model, z, DirectionString::random(static_cast<std::size_t>(m), rng), h,
                                            refinement);
          ++counts[verify::OrbitKey{spec.ell, spec.a, spec.b}];
        }
        bool ok = true;
        for (const auto& [key, count] : counts) {
          if (!table.entries.contains(key)) ok = false;
        }
        for (const auto& [key, p] : table.entries) {
          const double expected = kDraws * p;
          const double sigma = std::sqrt(kDraws * p * (1.0 - p));
          const auto it = counts.find(key);
          const double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second);
          if (std::abs(observed - expected) > 4.0 * sigma) ok = false;
        }
        cells = std::max(cells, table.entries.size());
        return ok;
      };
      if (!verify::passes_with_retry(test, kSeed)) {
        all = false;
        detail += fmt("orbit kernel M=%d model=%s failed; ", m, model.name().c_str());
      }
    }
  }
  detail += fmt("orbit kernels M=0..6 on 2 targets (up to %zu cells)", cells);

  double min_p = 1.0;
  for (int which = 0; which < 2; ++which) {
    const TargetModel& model = which == 0 ? static_cast<const TargetModel&>(normal) : funnel;
    const auto test = [&](std::uint64_t seed) {
      Rng rng = make_chain_rng(seed, 100 + static_cast<std::uint64_t>(which));
      const auto z = random_point(model.dim(), rng);
      const auto orbit = orbit_selection(model, z, DirectionString::random(5, rng), 0.4, 1);
      const auto p = verify::index_kernel(model, z, orbit.a, orbit.b, 0.4, 1);
      std::vector<std::int64_t> counts(p.size(), 0);
      for (int i = 0; i < kDraws; ++i) {
        const auto pick = index_selection(model, z, orbit.a, orbit.b, 0.4, 1, rng);
        ++counts[static_cast<std::size_t>(pick.index - orbit.a)];
      }
      const auto chi = verify::chi_square_test(counts, p);
      min_p = std::min(min_p, chi.p_value);
      return chi.pass;
    };
    if (!verify::passes_with_retry(test, kSeed)) {
      all = false;
      detail += fmt("; index kernel model=%s failed", model.name().c_str());
    }
  }
  detail += fmt("; index chi-square min p %.4f", min_p);
  return {all, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 funnel bottleneck with fixed step", funnel_bottleneck},
      {"2 funnel recovery with adaptive step", funnel_adaptive},
      {"3 step-size scaling with dimension", step_size_scaling},
      {"4 modified Hamiltonian conservation", modified_hamiltonian},
      {"5 involution and orbit property suite", property_suite},
      {"6 exact-target recovery (KS)", ks_recovery},
      {"7 kernel oracle agreement", kernel_oracle},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto started = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::printf("%s criterion %s: %s [%.1fs]\n", outcome.pass ? "PASS" : "FAIL", name.c_str(),
                outcome.detail.c_str(), secs);
    std::fflush(stdout);
    failed += outcome.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
