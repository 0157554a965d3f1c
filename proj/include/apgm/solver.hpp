#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "apgm/momentum.hpp"
#include "apgm/problem.hpp"
#include "apgm/subproblem.hpp"

namespace apgm {

struct SolverConfig {
  MomentumParams params = MomentumParams::fista();
  double eps = 1e-5;
  double ell0 = 1.0;
  double backtrack_factor = 2.0;
  std::size_t max_iterations = 10000;
  /// Use the problem's known Lipschitz constant as a constant ell and skip
  /// backtracking. Requires problem.known_L().
  bool use_known_L = false;
  /// Record every history_stride-th iteration (the last one is always kept).
  std::size_t history_stride = 1;
  DualSolverConfig dual{};

  void validate() const;
};

enum class Termination { kConverged, kMaxIterations, kSubproblemFailure };

std::string to_string(Termination t);

struct HistoryEntry {
  std::size_t k = 0;
  std::vector<double> F;   // F(x^k)
  double step_norm = 0.0;  // ||x^k - x^{k-1}||_2
  double residual = 0.0;   // ||x^k - y^k||_inf
};

struct RunRecord {
  std::size_t iterations = 0;  // accepted iterates
  Termination terminated = Termination::kMaxIterations;
  std::vector<double> initial_F;
  /// On convergence the terminal subproblem solution p, within eps of the
  /// certified y^k; otherwise the last accepted iterate (x^0 if none).
  std::vector<double> final_x;
  std::vector<double> final_F;
  double final_ell = 0.0;
  /// ||p - y||_inf of the last subproblem solved; below eps on convergence.
  double final_residual = 0.0;
  /// ||x^k - x^{k-1}||_inf of the last accepted step (0 if none).
  double final_step_inf = 0.0;
  std::size_t backtracks = 0;
  std::vector<HistoryEntry> history;
  std::string failure;  // message when terminated by a subproblem failure
  double wall_time = 0.0;
};

/// Descent-lemma test for every objective:
/// f_i(p) <= f_i(y) + <grad f_i(y), p - y> + (ell/2) ||p - y||^2
///           + 1e-12 max(1, |f_i(y)|).
bool backtrack_check(const ProblemSpec& problem, double ell, std::span<const double> y,
                     std::span<const double> p);

/// Same test, reusing f_i(y) and grad f_i(y) from a linearization at y.
bool backtrack_check(const ProblemSpec& problem, const LinearModel& model, double ell,
                     std::span<const double> y, std::span<const double> p);

/// Accelerated proximal gradient method with momentum (a, b) from x0.
/// Throws std::invalid_argument if x0 is outside dom F or cfg is invalid.
RunRecord solve(const ProblemSpec& problem, std::span<const double> x0,
                const SolverConfig& cfg);

/// Independent runs, one per start, gathered in start order. Runs execute
/// concurrently when OpenMP is available.
std::vector<RunRecord> multistart(const ProblemSpec& problem,
                                  const std::vector<std::vector<double>>& starts,
                                  const SolverConfig& cfg);

}  // namespace apgm
