#pragma once

#include <cstddef>
#include <vector>

namespace apgm {

/// Momentum hyperparameters (a, b) of the generalized accelerated method.
///
/// Valid pairs satisfy 0 <= a < 1 and a^2/4 <= b <= 1/4. The constructor
/// throws std::invalid_argument otherwise, so a constructed value is always
/// usable by the solver loop. (a, b) = (0, 1/4) reproduces the classical
/// FISTA sequence; b = a^2/4 gives the linear sequence
/// t_k = (1 - a) k / 2 + (1 + a) / 2.
class MomentumParams {
public:
  MomentumParams(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  static bool is_valid(double a, double b) noexcept;

  /// The classical FISTA choice (0, 1/4).
  static MomentumParams fista() { return {0.0, 0.25}; }

private:
  double a_;
  double b_;
};

/// The 15-pair grid combining a in {0, 1/6, 1/4, 1/2, 3/4} with
/// b in {a^2/4, (a^2+1)/8, 1/4}, ordered a-major.
std::vector<MomentumParams> standard_pairs();

/// Working precision of the recurrence. t_k grows like k, so binary64 cannot
/// resolve t_k^2 - t_{k+1}^2 + t_{k+1} to 1e-9 beyond k ~ 10^4; the extended
/// format can (the solver only consumes gamma, rounded to double).
using MomentumReal = long double;

/// State of the (t_k, gamma_k) recurrence at iteration k.
struct MomentumState {
  std::size_t k = 1;
  MomentumReal t = 1.0L;       // t_k
  MomentumReal t_next = 1.0L;  // t_{k+1}
  MomentumReal gamma = 0.0L;   // (t_k - 1) / t_{k+1}
};

/// t_{k+1} = sqrt(t_k^2 - a t_k + b) + 1/2.
MomentumReal next_t(MomentumReal t, const MomentumParams& params) noexcept;

/// State at k = 1 (t_1 = 1, gamma_1 = 0).
MomentumState momentum_initial(const MomentumParams& params) noexcept;

/// Advances the state from k to k + 1.
MomentumState momentum_step(const MomentumState& state,
                            const MomentumParams& params) noexcept;

/// States for k = 1..k_max. Row k holds t_k, t_{k+1} and gamma_k.
std::vector<MomentumState> momentum_table(const MomentumParams& params,
                                          std::size_t k_max);

}  // namespace apgm
