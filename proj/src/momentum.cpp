#include "apgm/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace apgm {

MomentumParams::MomentumParams(double a, double b) : a_(a), b_(b) {
  if (!is_valid(a, b)) {
    throw std::invalid_argument("invalid momentum parameters (a, b) = (" +
                                std::to_string(a) + ", " + std::to_string(b) +
                                "): need 0 <= a < 1 and a^2/4 <= b <= 1/4");
  }
}

bool MomentumParams::is_valid(double a, double b) noexcept {
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return a >= 0.0 && a < 1.0 && b >= a * a / 4.0 && b <= 0.25;
}

std::vector<MomentumParams> standard_pairs() {
  std::vector<MomentumParams> pairs;
  for (double a : {0.0, 1.0 / 6.0, 0.25, 0.5, 0.75}) {
    pairs.emplace_back(a, a * a / 4.0);
    pairs.emplace_back(a, (a * a + 1.0) / 8.0);
    pairs.emplace_back(a, 0.25);
  }
  return pairs;
}

MomentumReal next_t(MomentumReal t, const MomentumParams& params) noexcept {
  // Written as (t - a/2)^2 + (b - a^2/4) so the radicand never goes negative
  // through cancellation.
  const MomentumReal a = params.a();
  const MomentumReal shifted = t - 0.5L * a;
  const MomentumReal excess = std::max(MomentumReal(params.b()) - 0.25L * a * a, 0.0L);
  return std::sqrt(shifted * shifted + excess) + 0.5L;
}

MomentumState momentum_initial(const MomentumParams& params) noexcept {
  MomentumState s;
  s.k = 1;
  s.t = 1.0L;
  s.t_next = next_t(1.0L, params);
  s.gamma = 0.0L;
  return s;
}

MomentumState momentum_step(const MomentumState& state,
                            const MomentumParams& params) noexcept {
  MomentumState s;
  s.k = state.k + 1;
  s.t = state.t_next;
  s.t_next = next_t(s.t, params);
  s.gamma = (s.t - 1.0L) / s.t_next;
  return s;
}

std::vector<MomentumState> momentum_table(const MomentumParams& params,
                                          std::size_t k_max) {
  if (k_max == 0) throw std::invalid_argument("momentum_table: k_max must be >= 1");
  std::vector<MomentumState> rows;
  rows.reserve(k_max);
  rows.push_back(momentum_initial(params));
  while (rows.size() < k_max) rows.push_back(momentum_step(rows.back(), params));
  return rows;
}

}  // namespace apgm
