#include "gist/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace gist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// floor((a + b) / 2); right shift of a signed value rounds toward -infinity.
std::int64_t midpoint_floor(std::int64_t a, std::int64_t b) { return (a + b) >> 1; }

double log_add_exp(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

// Lazily grown table of coarse iterates around z. Forward iterates are
// integrated from z, backward iterates from the flipped z and flipped back.
class OrbitCache {
 public:
  OrbitCache(const TargetModel& model, const PhasePoint& z, double h, std::int64_t refinement)
      : z_(z),
        refinement_(refinement),
        forward_(model, h / static_cast<double>(refinement), z),
        backward_(model, h / static_cast<double>(refinement), z) {
    backward_.flip_momentum();
    h0_ = energy(model, z.position, z.momentum);
    fwd_max_.push_back(h0_);
    fwd_min_.push_back(h0_);
    bwd_max_.push_back(h0_);
    bwd_min_.push_back(h0_);
    if (!std::isfinite(h0_)) {
      fwd_dead_ = true;
      bwd_dead_ = true;
    }
  }

  double start_energy() const { return h0_; }

  // False when a non-finite energy occurs at or before `index`.
  bool ensure(std::int64_t index) {
    if (index >= 0) {
      while (static_cast<std::int64_t>(fwd_states_.size()) < index) {
        if (fwd_dead_) return false;
        extend(forward_, fwd_states_, fwd_max_, fwd_min_, fwd_dead_, false);
      }
    } else {
      while (static_cast<std::int64_t>(bwd_states_.size()) < -index) {
        if (bwd_dead_) return false;
        extend(backward_, bwd_states_, bwd_max_, bwd_min_, bwd_dead_, true);
      }
    }
    return true;
  }

  const PhasePoint& at(std::int64_t index) const {
    if (index == 0) return z_;
    if (index > 0) return fwd_states_[static_cast<std::size_t>(index - 1)];
    return bwd_states_[static_cast<std::size_t>(-index - 1)];
  }

  // Energy extrema over the fine gridpoints covered by legs 0 -> a and 0 -> b.
  std::pair<double, double> energy_range(std::int64_t a, std::int64_t b) const {
    double hi = h0_;
    double lo = h0_;
    for (const auto idx : {a, b}) {
      if (idx > 0) {
        hi = std::max(hi, fwd_max_[static_cast<std::size_t>(idx)]);
        lo = std::min(lo, fwd_min_[static_cast<std::size_t>(idx)]);
      } else if (idx < 0) {
        hi = std::max(hi, bwd_max_[static_cast<std::size_t>(-idx)]);
        lo = std::min(lo, bwd_min_[static_cast<std::size_t>(-idx)]);
      }
    }
    return {hi, lo};
  }

 private:
  void extend(LeapfrogStepper& stepper, std::vector<PhasePoint>& states, std::vector<double>& maxes,
              std::vector<double>& mins, bool& dead, bool flipped) {
    double hi = maxes.back();
    double lo = mins.back();
    for (std::int64_t s = 0; s < refinement_; ++s) {
      const double e = stepper.step();
      if (!std::isfinite(e)) {
        dead = true;
        return;
      }
      hi = std::max(hi, e);
      lo = std::min(lo, e);
    }
    if (flipped) {
      states.emplace_back(stepper.state().position, -stepper.state().momentum);
    } else {
      states.push_back(stepper.state());
    }
    maxes.push_back(hi);
    mins.push_back(lo);
  }

  const PhasePoint& z_;
  std::int64_t refinement_;
  LeapfrogStepper forward_;
  LeapfrogStepper backward_;
  double h0_ = 0.0;
  std::vector<PhasePoint> fwd_states_;
  std::vector<PhasePoint> bwd_states_;
  // *_max_[j] / *_min_[j]: extrema over fine gridpoints from z out to index +-j.
  std::vector<double> fwd_max_, fwd_min_, bwd_max_, bwd_min_;
  bool fwd_dead_ = false;
  bool bwd_dead_ = false;
};

bool cached_sub_u_turn(const OrbitCache& cache, std::int64_t a, std::int64_t b) {
  if (a == b) return false;
  if (u_turn_between(cache.at(a), cache.at(b))) return true;
  const auto m = midpoint_floor(a, b);
  return cached_sub_u_turn(cache, a, m) || cached_sub_u_turn(cache, m + 1, b);
}

void require_power_of_two_span(std::int64_t a, std::int64_t b) {
  if (b < a) throw std::invalid_argument("orbit: expected a <= b");
  exact_log2(b - a + 1);
}

}  // namespace

DirectionString::DirectionString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (const auto bit : bits_) {
    if (bit > 1) throw std::invalid_argument("DirectionString: bits must be 0 or 1");
  }
}

DirectionString::DirectionString(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (const int bit : bits) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("DirectionString: bits must be 0 or 1");
    bits_.push_back(static_cast<std::uint8_t>(bit));
  }
}

DirectionString DirectionString::random(std::size_t length, Rng& rng) {
  std::vector<std::uint8_t> bits(length);
  for (auto& bit : bits) bit = static_cast<std::uint8_t>(rng() >> 63);
  return DirectionString(std::move(bits));
}

DirectionString DirectionString::prefix(std::size_t n) const {
  if (n > bits_.size()) throw std::invalid_argument("DirectionString: prefix longer than string");
  return DirectionString(std::vector<std::uint8_t>(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n)));
}

int exact_log2(std::int64_t n) {
  if (n <= 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("orbit: interval length must be a power of two");
  }
  int ell = 0;
  while ((std::int64_t{1} << ell) < n) ++ell;
  return ell;
}

bool u_turn_between(const PhasePoint& minus, const PhasePoint& plus) {
  const Vector span = plus.position - minus.position;
  return plus.momentum.dot(span) < 0.0 || minus.momentum.dot(span) < 0.0;
}

UTurnCheck indicator_u_turn(const TargetModel& model, std::int64_t a, std::int64_t b,
                            const PhasePoint& z, double h, std::int64_t refinement) {
  if (b < a) throw std::invalid_argument("indicator_u_turn: expected a <= b");
  const auto minus = leapfrog_refined(model, z, a, h, refinement);
  const auto plus = leapfrog_refined(model, z, b, h, refinement);
  UTurnCheck check;
  check.h_max = std::max(minus.h_max, plus.h_max);
  check.h_min = std::min(minus.h_min, plus.h_min);
  check.divergent = minus.divergent || plus.divergent;
  if (check.divergent) {
    check.u_turn = true;
    check.h_max = kInf;
    return check;
  }
  check.u_turn = u_turn_between(minus.endpoint, plus.endpoint);
  return check;
}

SubUTurnCheck indicator_sub_u_turn(const TargetModel& model, std::int64_t a, std::int64_t b,
                                   const PhasePoint& z, double h, std::int64_t refinement) {
  require_power_of_two_span(a, b);
  if (a == b) return {};
  const auto m = midpoint_floor(a, b);
  const auto full = indicator_u_turn(model, a, b, z, h, refinement);
  const auto left = indicator_sub_u_turn(model, a, m, z, h, refinement);
  const auto right = indicator_sub_u_turn(model, m + 1, b, z, h, refinement);
  return {full.u_turn || left.u_turn || right.u_turn,
          full.divergent || left.divergent || right.divergent};
}

std::pair<std::int64_t, std::int64_t> orbit_endpoints(const DirectionString& prefix) {
  std::int64_t a = 0;
  std::int64_t b = 0;
  for (std::size_t j = 0; j < prefix.size(); ++j) {
    const std::int64_t weight = std::int64_t{1} << j;
    a -= weight * prefix[j];
    b += weight * (1 - prefix[j]);
  }
  return {a, b};
}

OrbitSpec orbit_selection(const TargetModel& model, const PhasePoint& z,
                          const DirectionString& directions, double h, std::int64_t refinement) {
  if (!(h > 0.0)) throw std::invalid_argument("orbit_selection: step size must be positive");
  if (refinement < 1) throw std::invalid_argument("orbit_selection: refinement must be >= 1");
  if (directions.size() > 62) throw std::invalid_argument("orbit_selection: direction string too long");

  OrbitCache cache(model, z, h, refinement);
  OrbitSpec spec;
  double h_max = cache.start_energy();
  double h_min = cache.start_energy();
  if (!std::isfinite(h_max)) {
    spec.divergent = true;
    spec.dh_gap = kInf;
    return spec;
  }

  for (std::size_t i = 1; i <= directions.size(); ++i) {
    const std::int64_t shift = (directions[i - 1] ? -1 : 1) * (std::int64_t{1} << (i - 1));
    const std::int64_t ext_a = spec.a + shift;
    const std::int64_t ext_b = spec.b + shift;

    // U-turn on the current orbit; its legs define the tracked energy range.
    if (!cache.ensure(spec.a) || !cache.ensure(spec.b)) {
      spec.divergent = true;
      break;
    }
    const auto [hi, lo] = cache.energy_range(spec.a, spec.b);
    h_max = std::max(h_max, hi);
    h_min = std::min(h_min, lo);
    if (u_turn_between(cache.at(spec.a), cache.at(spec.b))) break;

    // Sub-U-turn on the proposed extension; a single state needs no work.
    if (ext_a != ext_b) {
      if (!cache.ensure(ext_a) || !cache.ensure(ext_b)) {
        spec.divergent = true;
        break;
      }
      if (cached_sub_u_turn(cache, ext_a, ext_b)) break;
    }

    spec.a = std::min(spec.a, ext_a);
    spec.b = std::max(spec.b, ext_b);
    spec.ell = static_cast<int>(i);
  }

  spec.dh_gap = spec.divergent ? kInf : h_max - h_min;
  return spec;
}

IndexSelection index_selection(const TargetModel& model, const PhasePoint& z, std::int64_t a,
                               std::int64_t b, double h, std::int64_t refinement, Rng& rng) {
  if (a > 0 || b < 0) throw std::invalid_argument("index_selection: expected a <= 0 <= b");
  if (refinement < 1) throw std::invalid_argument("index_selection: refinement must be >= 1");
  const double fine = h / static_cast<double>(refinement);

  // Walk to the a-endpoint one coarse step at a time.
  LeapfrogStepper to_start(model, fine, z);
  if (a < 0) {
    to_start.flip_momentum();
    for (std::int64_t s = 0; s < -a * refinement; ++s) to_start.step();
    to_start.flip_momentum();
  }

  LeapfrogStepper walker(model, fine, std::move(to_start.state()));
  const auto log_weight = [&](const PhasePoint& p) {
    const double e = energy(model, p.position, p.momentum);
    return std::isfinite(e) ? -e : -kInf;
  };

  IndexSelection selection{walker.state(), a};
  double log_total = log_weight(walker.state());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::int64_t i = a + 1; i <= b; ++i) {
    for (std::int64_t s = 0; s < refinement; ++s) walker.step();
    const double lw = log_weight(walker.state());
    const double u = unif(rng);
    double accept = 0.0;
    if (lw != -kInf) {
      log_total = log_add_exp(log_total, lw);
      accept = std::exp(lw - log_total);
    }
    if (u <= accept) {
      selection.index = i;
      selection.endpoint = walker.state();
    }
  }

  if (log_total == -kInf) return {z, 0};
  return selection;
}

DirectionString beta_string(std::int64_t index, std::int64_t a, std::int64_t b) {
  require_power_of_two_span(a, b);
  if (index < a || index > b) throw std::invalid_argument("beta_string: index outside [a:b]");
  if (a == b) return {};
  const auto m = midpoint_floor(a, b);
  const bool upper = index > m;
  auto inner = upper ? beta_string(index, m + 1, b) : beta_string(index, a, m);
  auto bits = inner.bits();
  bits.push_back(upper ? 1 : 0);
  return DirectionString(std::move(bits));
}

DirectionString b_star(std::int64_t index, std::int64_t a, std::int64_t b,
                       const DirectionString& directions) {
  const auto beta = beta_string(index, a, b);
  if (beta.size() > directions.size()) {
    throw std::invalid_argument("b_star: orbit has more doublings than the direction string");
  }
  auto bits = beta.bits();
  bits.insert(bits.end(), directions.bits().begin() + static_cast<std::ptrdiff_t>(beta.size()),
              directions.bits().end());
  return DirectionString(std::move(bits));
}

}  // namespace gist
