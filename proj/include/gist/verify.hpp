#pragma once

// Brute-force oracles and statistical checks for the NUTS kernels.
//
// Orbits here are re-selected by integrating every leg from the start point,
// and kernels are built by enumeration.

#include "gist/model.hpp"
#include "gist/orbit.hpp"

#include "json.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace gist::verify {

/// Orbit selection exactly as written: each doubling calls indicator_u_turn on
/// the current orbit and indicator_sub_u_turn on the proposed extension.
OrbitSpec orbit_selection_literal(const TargetModel& model, const PhasePoint& z,
                                  const DirectionString& directions, double h,
                                  std::int64_t refinement);

struct OrbitKey {
  int ell = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;
  auto operator<=>(const OrbitKey&) const = default;
};

/// Exact law of (ell, a, b) given z, obtained by enumerating all 2^M strings.
struct KernelTable {
  std::map<OrbitKey, double> entries;
  PhasePoint z;
  double h = 0.0;
  std::int64_t refinement = 1;
  int max_doublings = 0;

  double total() const;
};

inline constexpr int kMaxEnumeratedDoublings = 8;

/// Throws std::invalid_argument for M > kMaxEnumeratedDoublings.
KernelTable brute_force_orbit_kernel(const TargetModel& model, const PhasePoint& z, double h,
                                     std::int64_t refinement, int max_doublings);

/// Boltzmann index probabilities over [a:b], each iterate integrated directly
/// from z. Entry i corresponds to index a + i.
std::vector<double> index_kernel(const TargetModel& model, const PhasePoint& z, std::int64_t a,
                                 std::int64_t b, double h, std::int64_t refinement);

/// A point of the enlarged space (theta, rho, k, B, ell, a, b, L).
struct EnlargedState {
  PhasePoint z;
  int k = 0;
  DirectionString directions;
  int ell = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t index = 0;
};

/// The involution: (Phi^{2^k L}_{h/2^k}(z), k, B*, ell, a - L, b - L, -L).
EnlargedState apply_g(const TargetModel& model, const EnlargedState& state, double h);

struct InvolutionReport {
  std::size_t states = 0;
  double max_continuous_deviation = 0.0;
  std::size_t discrete_mismatches = 0;
};

/// Applies G twice to each state and records the worst deviation.
InvolutionReport check_g_involution(const TargetModel& model, std::span<const EnlargedState> states,
                                    double h);

/// Both sides of the NUTS kernel detailed-balance identity at (z, B, L):
///   exp(-H(z)) p(B, ell, a, b, L | z)  vs  exp(-H(z*)) p(B*, ell, a-L, b-L, -L | z*)
/// with P from the literal orbit selection and Q from index_kernel. Both sides
/// are reported relative to exp(-H(z)).
struct BalanceCheck {
  double forward = 0.0;
  double reverse = 0.0;
  double relative_error() const;
};

BalanceCheck nuts_detailed_balance(const TargetModel& model, const PhasePoint& z,
                                   const DirectionString& directions, std::int64_t index, double h,
                                   std::int64_t refinement);

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
  bool pass = false;
  std::size_t n = 0;
};

inline constexpr double kSignificance = 1e-3;

/// One-sample Kolmogorov-Smirnov test; pass iff p > alpha. Needs >= 1000 draws.
KsResult ks_stationarity_test(std::span<const double> draws,
                              const std::function<double(double)>& cdf,
                              double alpha = kSignificance);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool pass = true;
};

/// Pearson goodness of fit of `counts` against `probabilities`. Cells with zero
/// probability must have zero counts (otherwise p = 0).
ChiSquareResult chi_square_test(std::span<const std::int64_t> counts,
                                std::span<const double> probabilities,
                                double alpha = kSignificance);

/// Runs `test(seed)`; on failure reruns once with an independent seed and
/// reports failure only when both runs fail.
bool passes_with_retry(const std::function<bool(std::uint64_t)>& test, std::uint64_t seed);

nlohmann::json to_json(const InvolutionReport& report);
nlohmann::json to_json(const KsResult& result);
nlohmann::json to_json(const ChiSquareResult& result);
nlohmann::json to_json(const KernelTable& table);

}  // namespace gist::verify
