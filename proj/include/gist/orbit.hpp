#pragma once

// No-U-turn orbit selection by random doubling and Boltzmann index selection
// over the selected orbit.
//
// Indices count coarse steps: index i is Phi_{h/R}^{R i}(z). Every routine
// that takes (h, R) integrates with R fine steps of size h/R per index.

#include "gist/integrator.hpp"
#include "gist/model.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace gist {

using Rng = std::mt19937_64;

/// Doubling directions B in {0,1}^M. Bit j (1-based in the math, 0-based
/// here) set means the j-th doubling extends backward in time.
class DirectionString {
 public:
  DirectionString() = default;
  explicit DirectionString(std::vector<std::uint8_t> bits);
  DirectionString(std::initializer_list<int> bits);

  /// Uniform on {0,1}^M; consumes exactly M draws from `rng`.
  static DirectionString random(std::size_t length, Rng& rng);

  std::size_t size() const { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  /// First n bits.
  DirectionString prefix(std::size_t n) const;

  friend bool operator==(const DirectionString&, const DirectionString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Endpoints [a:b], doubling count ell (b - a + 1 == 2^ell) and the energy gap
/// H+ - H- collected while selecting the orbit.
struct OrbitSpec {
  std::int64_t a = 0;
  std::int64_t b = 0;
  int ell = 0;
  double dh_gap = 0.0;
  bool divergent = false;

  std::int64_t size() const { return b - a + 1; }
};

struct UTurnCheck {
  bool u_turn = false;
  double h_max = 0.0;
  double h_min = 0.0;
  bool divergent = false;
};

struct SubUTurnCheck {
  bool u_turn = false;
  bool divergent = false;
};

struct IndexSelection {
  PhasePoint endpoint;
  std::int64_t index = 0;
};

/// True iff rho_end . (theta_plus - theta_minus) < 0 for either endpoint.
bool u_turn_between(const PhasePoint& minus, const PhasePoint& plus);

/// U-turn indicator on [a:b] from z, integrating both legs from z. Energy
/// extrema are merged over both legs. A divergent leg forces u_turn = true and
/// h_max = +infinity.
UTurnCheck indicator_u_turn(const TargetModel& model, std::int64_t a, std::int64_t b,
                            const PhasePoint& z, double h, std::int64_t refinement);

/// Sub-U-turn indicator: U-turn at any node of the balanced binary tree over
/// [a:b]. Requires b - a + 1 to be a power of two; a == b gives false.
SubUTurnCheck indicator_sub_u_turn(const TargetModel& model, std::int64_t a, std::int64_t b,
                                   const PhasePoint& z, double h, std::int64_t refinement);

/// (a, b) = (-sum 2^{j-1} B_j, sum 2^{j-1} (1 - B_j)) over the given prefix.
std::pair<std::int64_t, std::int64_t> orbit_endpoints(const DirectionString& prefix);

/// Doubles the orbit following B until the current orbit has a U-turn or the
/// proposed extension has a sub-U-turn, at most B.size() times.
///
/// States are cached as the orbit grows, so the cost is linear in the number
/// of fine steps; decisions and the energy gap match the per-check
/// re-integration of `indicator_u_turn` / `indicator_sub_u_turn` exactly.
OrbitSpec orbit_selection(const TargetModel& model, const PhasePoint& z,
                          const DirectionString& directions, double h, std::int64_t refinement);

/// Draws L in [a:b] with probability proportional to exp(-H) of the L-th
/// iterate, in one forward pass from the a-endpoint. Consumes one uniform per
/// index i > a. Weights are accumulated in log space; if every weight is zero
/// or non-finite the start state (index 0) is returned.
IndexSelection index_selection(const TargetModel& model, const PhasePoint& z, std::int64_t a,
                               std::int64_t b, double h, std::int64_t refinement, Rng& rng);

/// Bisection bits of L within [a:b]: the last bit says whether L lies in the
/// upper half, earlier bits recurse into the half containing L. Throws
/// std::invalid_argument unless L is in [a:b] and b - a + 1 is a power of two.
DirectionString beta_string(std::int64_t index, std::int64_t a, std::int64_t b);

/// Direction string of the orbit as seen from index L: the first ell bits are
/// beta_string(L, a, b), the rest copied from `directions`.
DirectionString b_star(std::int64_t index, std::int64_t a, std::int64_t b,
                       const DirectionString& directions);

/// floor(log2(n)) for n a power of two; throws std::invalid_argument otherwise.
int exact_log2(std::int64_t n);

}  // namespace gist
