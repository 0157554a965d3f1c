#include "apgm/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace apgm {

void SolverConfig::validate() const {
  if (!(eps > 0.0)) throw std::invalid_argument("SolverConfig: eps must be > 0");
  if (!(ell0 > 0.0)) throw std::invalid_argument("SolverConfig: ell0 must be > 0");
  if (!(backtrack_factor > 1.0)) {
    throw std::invalid_argument("SolverConfig: backtrack_factor must be > 1");
  }
  if (history_stride == 0) throw std::invalid_argument("SolverConfig: history_stride must be >= 1");
  if (!(dual.gap_tol > 0.0)) throw std::invalid_argument("SolverConfig: gap_tol must be > 0");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged";
    case Termination::kMaxIterations: return "max_iter";
    case Termination::kSubproblemFailure: return "subproblem_failure";
  }
  return "?";
}

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return s;
}

double inf_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s = std::max(s, std::abs(a[j] - b[j]));
  return s;
}

constexpr double kMaxEllGrowth = 1152921504606846976.0;  // 2^60

}  // namespace

bool backtrack_check(const ProblemSpec& problem, const LinearModel& model, double ell,
                     std::span<const double> y, std::span<const double> p) {
  const double quad = 0.5 * ell * sq_dist(p, y);
  for (std::size_t i = 0; i < model.m; ++i) {
    const auto g = model.grad(i);
    double lin = 0.0;
    for (std::size_t j = 0; j < model.n; ++j) lin += g[j] * (p[j] - y[j]);
    const double fy = model.f_at_y[i];
    const double bound = fy + lin + quad + 1e-12 * std::max(1.0, std::abs(fy));
    if (!(problem.smooth_value(i, p) <= bound)) return false;
  }
  return true;
}

bool backtrack_check(const ProblemSpec& problem, double ell, std::span<const double> y,
                     std::span<const double> p) {
  problem.check_dim(y, "backtrack_check");
  problem.check_dim(p, "backtrack_check");
  // Offsets are irrelevant to the test; linearize against F(x) = 0.
  const std::vector<double> zeros(problem.m(), 0.0);
  const auto model = linearize(problem, zeros, y);
  return backtrack_check(problem, model, ell, y, p);
}

RunRecord solve(const ProblemSpec& problem, std::span<const double> x0,
                const SolverConfig& cfg) {
  cfg.validate();
  problem.check_dim(x0, "solve");
  if (cfg.use_known_L && !problem.known_L()) {
    throw std::invalid_argument("solve: use_known_L set but the problem has no known L");
  }

  const auto started = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.initial_F = problem.evaluate(x0);
  for (const double v : rec.initial_F) {
    if (!std::isfinite(v)) throw std::invalid_argument("solve: x0 is outside dom F");
  }

  double ell = cfg.use_known_L ? *problem.known_L() : cfg.ell0;
  const double ell_cap = cfg.ell0 * kMaxEllGrowth;
  const std::size_t n = problem.n();

  std::vector<double> x_prev(x0.begin(), x0.end());  // x^{k-1}
  std::vector<double> y(x0.begin(), x0.end());       // y^k
  std::vector<double> F_prev = rec.initial_F;
  std::vector<double> x_new(n);
  MomentumState momentum = momentum_initial(cfg.params);
  std::optional<HistoryEntry> pending;  // latest unrecorded iterate

  try {
    for (std::size_t k = 1;; ++k) {
      const auto model = linearize(problem, F_prev, y);
      auto sub = solve_linearized(problem, model, ell, y, cfg.dual);
      if (!cfg.use_known_L) {
        while (!backtrack_check(problem, model, ell, y, sub.z)) {
          ell *= cfg.backtrack_factor;
          ++rec.backtracks;
          if (ell > ell_cap) {
            throw SubproblemFailure("backtracking exceeded 2^60 * ell0", sub.gap);
          }
          sub = solve_linearized(problem, model, ell, y, cfg.dual);
        }
      }

      const double residual = inf_dist(sub.z, y);
      rec.final_residual = residual;
      if (residual < cfg.eps) {
        rec.terminated = Termination::kConverged;
        // y^k is the certified point. Report p instead: it is within eps of
        // y^k and, unlike an extrapolated y^k, always inside dom F.
        x_prev = std::move(sub.z);
        F_prev = problem.evaluate(x_prev);
        break;
      }
      if (rec.iterations >= cfg.max_iterations) {
        rec.terminated = Termination::kMaxIterations;
        break;
      }

      x_new = std::move(sub.z);
      const double step_norm = std::sqrt(sq_dist(x_new, x_prev));
      rec.final_step_inf = inf_dist(x_new, x_prev);
      const double gamma = static_cast<double>(momentum.gamma);
      for (std::size_t j = 0; j < n; ++j) y[j] = x_new[j] + gamma * (x_new[j] - x_prev[j]);
      std::swap(x_prev, x_new);
      F_prev = problem.evaluate(x_prev);
      rec.iterations = k;

      HistoryEntry entry{k, F_prev, step_norm, residual};
      if (k % cfg.history_stride == 0 || k == 1) {
        rec.history.push_back(std::move(entry));
        pending.reset();
      } else {
        pending = std::move(entry);
      }
      momentum = momentum_step(momentum, cfg.params);
    }
  } catch (const SubproblemFailure& e) {
    rec.terminated = Termination::kSubproblemFailure;
    rec.failure = e.what();
  } catch (const InfeasibleProx& e) {
    rec.terminated = Termination::kSubproblemFailure;
    rec.failure = e.what();
  }

  if (pending) rec.history.push_back(std::move(*pending));

  rec.final_x = std::move(x_prev);
  rec.final_F = std::move(F_prev);
  rec.final_ell = ell;
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

std::vector<RunRecord> multistart(const ProblemSpec& problem,
                                  const std::vector<std::vector<double>>& starts,
                                  const SolverConfig& cfg) {
  cfg.validate();
  std::vector<RunRecord> records(starts.size());
  const auto count = static_cast<std::ptrdiff_t>(starts.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t s = 0; s < count; ++s) {
    try {
      records[s] = solve(problem, starts[s], cfg);
    } catch (const std::exception& e) {
      RunRecord failed;
      failed.terminated = Termination::kSubproblemFailure;
      failed.failure = e.what();
      failed.final_x = starts[s];
      records[s] = std::move(failed);
    }
  }
  return records;
}

}  // namespace apgm
