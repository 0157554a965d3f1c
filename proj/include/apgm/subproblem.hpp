#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "apgm/problem.hpp"

namespace apgm {

/// Settings for the simplex dual ascent.
struct DualSolverConfig {
  /// Relative duality-gap target; the absolute target is
  /// gap_tol * max(1, |primal_value|).
  double gap_tol = 1e-10;
  /// Inner iteration cap. Zero selects default_max_inner(m, n).
  std::size_t max_inner = 0;
};

std::size_t default_max_inner(std::size_t m, std::size_t n) noexcept;

struct SubproblemResult {
  std::vector<double> z;       // p_ell(x, y)
  std::vector<double> lambda;  // dual weights on the unit simplex
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  std::size_t inner_iterations = 0;
};

/// The dual ascent hit its iteration cap without reaching the gap target.
class SubproblemFailure : public std::runtime_error {
public:
  SubproblemFailure(const std::string& what, double last_gap)
      : std::runtime_error(what), last_gap_(last_gap) {}
  double last_gap() const noexcept { return last_gap_; }

private:
  double last_gap_;
};

/// Linearization of every f_i at y, shifted by the reference values F(x):
/// bracket_i(z) = <grad_i, z - y> + g_i(z) + offset_i with
/// offset_i = f_i(y) - F_i(x).
struct LinearModel {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> grads;    // m x n, row-major
  std::vector<double> f_at_y;   // f_i(y)
  std::vector<double> offsets;  // f_i(y) - F_i(x)

  std::span<const double> grad(std::size_t i) const {
    return std::span<const double>(grads).subspan(i * n, n);
  }
};

/// Builds the model from F(x) (must be finite) and y.
LinearModel linearize(const ProblemSpec& problem, std::span<const double> F_at_x,
                      std::span<const double> y);

/// bracket_i(z) for all i; +inf where z violates a box.
std::vector<double> bracket_values(const ProblemSpec& problem, const LinearModel& model,
                                   std::span<const double> y, std::span<const double> z);

/// phi(z; x, y) = max_i bracket_i(z) + (ell/2) ||z - y||^2.
/// Throws std::invalid_argument when x is outside dom F.
double phi_value(const ProblemSpec& problem, double ell, std::span<const double> z,
                 std::span<const double> x, std::span<const double> y);

/// Minimizes phi(., x, y) through its concave dual over the unit simplex.
///
/// Every box indicator of the problem constrains z regardless of its dual
/// weight: the max in phi is +inf wherever any box is violated, so the
/// primal feasible set is the intersection of all boxes.
SubproblemResult solve_linearized(const ProblemSpec& problem, const LinearModel& model,
                                  double ell, std::span<const double> y,
                                  const DualSolverConfig& cfg = {});

SubproblemResult solve_subproblem(const ProblemSpec& problem, double ell,
                                  std::span<const double> x, std::span<const double> y,
                                  const DualSolverConfig& cfg = {});

/// ||p_ell(x, y) - y||_inf.
double stationarity_residual(const ProblemSpec& problem, double ell,
                             std::span<const double> x, std::span<const double> y,
                             const DualSolverConfig& cfg = {});

/// Euclidean projection onto {lambda >= 0, sum lambda = 1} (sort and threshold).
std::vector<double> project_simplex(std::span<const double> v);

}  // namespace apgm
