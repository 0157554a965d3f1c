#include "apgm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace apgm {

double sigma_from_values(std::span<const double> F_x, std::span<const double> F_z) {
  if (F_x.size() != F_z.size() || F_x.empty()) {
    throw std::invalid_argument("sigma: objective vectors differ in length");
  }
  double s = kInf;
  for (std::size_t i = 0; i < F_x.size(); ++i) {
    if (!std::isfinite(F_x[i]) || !std::isfinite(F_z[i])) {
      throw std::invalid_argument("sigma: point outside dom F");
    }
    s = std::min(s, F_x[i] - F_z[i]);
  }
  return s;
}

double sigma(const ProblemSpec& problem, std::span<const double> x_k,
             std::span<const double> z) {
  return sigma_from_values(problem.evaluate(x_k), problem.evaluate(z));
}

double merit_lower_bound_from_values(std::span<const double> F_x,
                                     std::span<const std::vector<double>> reference_F) {
  if (reference_F.empty()) throw std::invalid_argument("merit_lower_bound: no references");
  double best = 0.0;
  for (const auto& Fz : reference_F) best = std::max(best, sigma_from_values(F_x, Fz));
  return best;
}

double merit_lower_bound(const ProblemSpec& problem, std::span<const double> x,
                         std::span<const std::vector<double>> references) {
  if (references.empty()) throw std::invalid_argument("merit_lower_bound: no references");
  std::vector<std::vector<double>> ref_F;
  ref_F.reserve(references.size());
  for (const auto& z : references) ref_F.push_back(problem.evaluate(z));
  return merit_lower_bound_from_values(problem.evaluate(x), ref_F);
}

std::vector<MeritSample> merit_curve(const RunRecord& record,
                                     std::span<const std::vector<double>> reference_F) {
  std::vector<MeritSample> out;
  out.reserve(record.history.size());
  for (const auto& h : record.history) {
    out.push_back({h.k, merit_lower_bound_from_values(h.F, reference_F)});
  }
  return out;
}

RateCheck check_rate_bound(const RunRecord& record, double ell, double R, double F_star,
                           double rel_slack) {
  if (record.history.empty()) throw std::invalid_argument("check_rate_bound: empty history");
  RateCheck rc;
  rc.bound_constant = 2.0 * ell * R;
  for (const auto& h : record.history) {
    if (h.F.size() != 1) throw std::invalid_argument("check_rate_bound: needs m = 1");
    const double u0 = std::max(0.0, h.F[0] - F_star);
    const double kp1 = static_cast<double>(h.k + 1);
    const double scaled = u0 * kp1 * kp1;
    double ratio;
    if (rc.bound_constant > 0.0) ratio = scaled / rc.bound_constant;
    else ratio = scaled > 0.0 ? kInf : 0.0;
    rc.max_ratio = std::max(rc.max_ratio, ratio);
    if (ratio > 1.0 + rel_slack) ++rc.violations;
  }
  return rc;
}

double pareto_certificate(const ProblemSpec& problem, std::span<const double> x, double ell,
                          const DualSolverConfig& cfg) {
  return stationarity_residual(problem, ell, x, x, cfg);
}

}  // namespace apgm
