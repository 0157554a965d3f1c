#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "apgm/problem.hpp"
#include "apgm/solver.hpp"

namespace apgm {

/// min_i [F_i(x) - F_i(z)] from objective vectors. Both must be finite.
double sigma_from_values(std::span<const double> F_x, std::span<const double> F_z);

/// min_i [F_i(x_k) - F_i(z)].
double sigma(const ProblemSpec& problem, std::span<const double> x_k,
             std::span<const double> z);

/// max(0, max_z sigma(x, z)) over the reference objective vectors: a certified
/// lower bound on the merit function u0(x), exact for m = 1 when a minimizer
/// is among the references.
double merit_lower_bound_from_values(std::span<const double> F_x,
                                     std::span<const std::vector<double>> reference_F);

double merit_lower_bound(const ProblemSpec& problem, std::span<const double> x,
                         std::span<const std::vector<double>> references);

struct MeritSample {
  std::size_t k = 0;
  double u0_value = 0.0;
};

/// Merit lower bound along a recorded history.
std::vector<MeritSample> merit_curve(const RunRecord& record,
                                     std::span<const std::vector<double>> reference_F);

struct RateCheck {
  double bound_constant = 0.0;  // 2 ell R
  std::size_t violations = 0;
  double max_ratio = 0.0;  // max_k u0(x^k) (k+1)^2 / (2 ell R)
};

/// Checks u0(x^k) <= 2 ell R / (k+1)^2 along a single-objective history, with
/// u0 = max(0, F_1(x^k) - F_star) and a relative slack on the bound.
RateCheck check_rate_bound(const RunRecord& record, double ell, double R, double F_star,
                           double rel_slack = 1e-9);

/// ||p_ell(x, x) - x||_inf; zero exactly at weakly Pareto optimal x.
double pareto_certificate(const ProblemSpec& problem, std::span<const double> x, double ell,
                          const DualSolverConfig& cfg = {});

}  // namespace apgm
