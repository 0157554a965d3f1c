#include "apgm/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

namespace apgm {

std::size_t default_max_inner(std::size_t m, std::size_t n) noexcept {
  return std::clamp<std::size_t>(10 * m * n, 500, 5000);
}

LinearModel linearize(const ProblemSpec& problem, std::span<const double> F_at_x,
                      std::span<const double> y) {
  problem.check_dim(y, "linearize");
  if (F_at_x.size() != problem.m()) {
    throw std::invalid_argument("linearize: F(x) has wrong length");
  }
  LinearModel model;
  model.m = problem.m();
  model.n = problem.n();
  model.grads.resize(model.m * model.n);
  model.f_at_y.resize(model.m);
  model.offsets.resize(model.m);
  for (std::size_t i = 0; i < model.m; ++i) {
    if (!std::isfinite(F_at_x[i])) {
      throw std::invalid_argument("linearize: x is outside dom F");
    }
    std::span<double> g(model.grads.data() + i * model.n, model.n);
    model.f_at_y[i] = problem.smooth(i).value_grad(y, g);
    model.offsets[i] = model.f_at_y[i] - F_at_x[i];
  }
  return model;
}

std::vector<double> bracket_values(const ProblemSpec& problem, const LinearModel& model,
                                   std::span<const double> y, std::span<const double> z) {
  std::vector<double> h(model.m);
  for (std::size_t i = 0; i < model.m; ++i) {
    const auto gi = model.grad(i);
    double lin = 0.0;
    for (std::size_t j = 0; j < model.n; ++j) lin += gi[j] * (z[j] - y[j]);
    h[i] = lin + problem.nonsmooth_value(i, z) + model.offsets[i];
  }
  return h;
}

namespace {

double half_sq_dist(std::span<const double> a, std::span<const double> b, double ell) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return 0.5 * ell * s;
}

// State of the dual at one lambda: the inner minimizer and the bracket values.
struct DualPoint {
  std::vector<double> lambda;
  std::vector<double> z;
  std::vector<double> h;
  double theta = 0.0;
  double primal = 0.0;
};

class DualEvaluator {
public:
  DualEvaluator(const ProblemSpec& problem, const LinearModel& model, double ell,
                std::span<const double> y)
      : problem_(problem), model_(model), ell_(ell), y_(y), w_(model.n) {}

  void evaluate(DualPoint& p) {
    const std::size_t n = model_.n;
    std::fill(w_.begin(), w_.end(), 0.0);
    for (std::size_t i = 0; i < model_.m; ++i) {
      const double li = p.lambda[i];
      if (li == 0.0) continue;
      const auto gi = model_.grad(i);
      for (std::size_t j = 0; j < n; ++j) w_[j] += li * gi[j];
    }
    for (std::size_t j = 0; j < n; ++j) w_[j] = y_[j] - w_[j] / ell_;
    p.z.resize(n);
    separable_prox(problem_.nonsmooth(), p.lambda, w_, ell_, BoxRule::kAll, p.z);
    p.h = bracket_values(problem_, model_, y_, p.z);
    const double q = half_sq_dist(p.z, y_, ell_);
    double weighted = 0.0;
    for (std::size_t i = 0; i < model_.m; ++i) weighted += p.lambda[i] * p.h[i];
    p.theta = weighted + q;
    p.primal = *std::max_element(p.h.begin(), p.h.end()) + q;
  }

private:
  const ProblemSpec& problem_;
  const LinearModel& model_;
  double ell_;
  std::span<const double> y_;
  std::vector<double> w_;
};

SubproblemResult to_result(DualPoint&& p, std::size_t iterations) {
  SubproblemResult r;
  r.z = std::move(p.z);
  r.lambda = std::move(p.lambda);
  r.primal_value = p.primal;
  r.dual_value = p.theta;
  r.gap = p.primal - p.theta;
  r.inner_iterations = iterations;
  return r;
}

// Generalized Hessian of -theta at lambda: M M^T / ell, where row i of M holds
// the derivatives of bracket i in the coordinates where z(lambda) is smooth
// (off every box bound and every active l1 kink).
Eigen::MatrixXd dual_curvature(const ProblemSpec& problem, const LinearModel& model,
                               double ell, const DualPoint& p) {
  const std::size_t m = model.m;
  const std::size_t n = model.n;
  const auto pieces = problem.nonsmooth();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                            static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const double zj = p.z[j];
    bool smooth = true;
    for (std::size_t i = 0; i < m && smooth; ++i) {
      if (const auto* box = pieces[i].as_box()) {
        smooth = zj != box->lower[j] && zj != box->upper[j];
      } else if (const auto* l1 = pieces[i].as_l1()) {
        smooth = !(p.lambda[i] > 0.0 && l1->weight > 0.0 && zj == l1->shift[j]);
      }
    }
    if (!smooth) continue;
    for (std::size_t i = 0; i < m; ++i) {
      double d = model.grads[i * n + j];
      if (const auto* l1 = pieces[i].as_l1()) {
        d += zj > l1->shift[j] ? l1->weight : (zj < l1->shift[j] ? -l1->weight : 0.0);
      }
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
    }
  }
  return M * M.transpose() / ell;
}

// Maximizer of c.l - l^T H l / 2 over the unit simplex, H positive
// semidefinite: the best feasible stationary point over all faces.
std::vector<double> simplex_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& c) {
  const auto m = H.rows();
  const double scale = std::max(H.diagonal().maxCoeff(), 1e-300);
  std::vector<double> best(static_cast<std::size_t>(m), 0.0);
  double best_value = -kInf;
  std::vector<Eigen::Index> face;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    face.clear();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (mask & (1u << i)) face.push_back(i);
    }
    const auto k = static_cast<Eigen::Index>(face.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::VectorXd rhs(k + 1);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index q = 0; q < k; ++q) K(r, q) = H(face[r], face[q]) / scale;
      K(r, k) = 1.0;
      K(k, r) = 1.0;
      rhs(r) = c(face[r]) / scale;
    }
    rhs(k) = 1.0;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd sol = lu.solve(rhs);
    Eigen::VectorXd l = Eigen::VectorXd::Zero(m);
    bool feasible = true;
    for (Eigen::Index r = 0; r < k && feasible; ++r) {
      feasible = sol(r) >= -1e-12;
      l(face[r]) = std::max(sol(r), 0.0);
    }
    if (!feasible) continue;
    l /= l.sum();
    const double value = c.dot(l) - 0.5 * l.dot(H * l);
    if (value > best_value) {
      best_value = value;
      for (Eigen::Index i = 0; i < m; ++i) best[static_cast<std::size_t>(i)] = l(i);
    }
  }
  return best;
}

constexpr std::size_t kMaxNewtonObjectives = 10;

}  // namespace

std::vector<double> project_simplex(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("project_simplex: empty input");
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) tau = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - tau, 0.0);
  return out;
}

SubproblemResult solve_linearized(const ProblemSpec& problem, const LinearModel& model,
                                  double ell, std::span<const double> y,
                                  const DualSolverConfig& cfg) {
  if (!(ell > 0.0)) throw std::invalid_argument("solve_subproblem: ell must be > 0");
  problem.check_dim(y, "solve_subproblem");
  const std::size_t m = model.m;
  const std::size_t n = model.n;
  DualEvaluator dual(problem, model, ell, y);

  // Single objective: the subproblem is one proximal gradient step.
  if (m == 1) {
    DualPoint p;
    p.lambda = {1.0};
    std::vector<double> w(n);
    const auto g = model.grad(0);
    for (std::size_t j = 0; j < n; ++j) w[j] = y[j] - g[j] / ell;
    p.z.resize(n);
    separable_prox(problem.nonsmooth(), p.lambda, w, ell, BoxRule::kAll, p.z);
    p.h = bracket_values(problem, model, y, p.z);
    p.primal = p.h[0] + half_sq_dist(p.z, y, ell);
    p.theta = p.primal;
    return to_result(std::move(p), 0);
  }

  const std::size_t max_inner = cfg.max_inner ? cfg.max_inner : default_max_inner(m, n);

  DualPoint cur;
  cur.lambda.assign(m, 1.0 / static_cast<double>(m));
  dual.evaluate(cur);

  // Safe step for the smooth part of the dual: 1 / (||G||_F^2 / ell).
  double grad_energy = 0.0;
  for (const double v : model.grads) grad_energy += v * v;
  double step = grad_energy > 0.0 ? ell / grad_energy : 1.0;

  DualPoint trial;
  std::vector<double> ascent(m);
  std::vector<double> dir(m);

  // Newton-type step: maximize the local quadratic model of theta over the
  // simplex, then halve until the slope of theta along the step (from the
  // bracket values, free of cancellation) is consistent with an increase.
  auto newton_step = [&]() {
    const Eigen::MatrixXd H = dual_curvature(problem, model, ell, cur);
    Eigen::VectorXd c(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      double hl = 0.0;
      for (std::size_t q = 0; q < m; ++q) {
        hl += H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q)) * cur.lambda[q];
      }
      c(static_cast<Eigen::Index>(i)) = cur.h[i] + hl;
    }
    const auto target = simplex_qp(H, c);
    double slope0 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      dir[i] = target[i] - cur.lambda[i];
      slope0 += cur.h[i] * dir[i];
    }
    if (!(slope0 > 0.0)) return false;
    double alpha = 1.0;
    for (int tries = 0; tries < 4; ++tries, alpha *= 0.5) {
      trial.lambda.resize(m);
      double sum = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        trial.lambda[i] = std::max(cur.lambda[i] + alpha * dir[i], 0.0);
        sum += trial.lambda[i];
      }
      for (double& v : trial.lambda) v /= sum;
      dual.evaluate(trial);
      double slope = 0.0;
      for (std::size_t i = 0; i < m; ++i) slope += trial.h[i] * dir[i];
      if (slope >= -(1.0 - 2e-4) * slope0) return true;
    }
    return false;
  };

  std::size_t it = 0;
  for (;; ++it) {
    const double gap = cur.primal - cur.theta;
    const double tol = cfg.gap_tol * std::max(1.0, std::abs(cur.primal));
    if (gap <= tol) break;
    if (it >= max_inner) {
      throw SubproblemFailure("dual ascent did not reach the gap target within " +
                                  std::to_string(max_inner) + " iterations (gap " +
                                  std::to_string(gap) + ")",
                              gap);
    }
    if (m <= kMaxNewtonObjectives && newton_step()) {
      std::swap(cur, trial);
      continue;
    }

    for (std::size_t i = 0; i < m; ++i) ascent[i] = cur.lambda[i] + step * cur.h[i];
    trial.lambda = project_simplex(ascent);
    double dist2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = trial.lambda[i] - cur.lambda[i];
      dist2 += d * d;
    }
    if (dist2 == 0.0) break;  // projected-gradient fixed point: lambda is optimal
    dual.evaluate(trial);
    // Sufficient increase theta(trial) >= theta + <h, d> - |d|^2 / (2 step),
    // certified through the monotonicity of h along d. Differences of theta
    // itself drown in round-off long before the gap target is met.
    double curvature = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      curvature -= (trial.h[i] - cur.h[i]) * (trial.lambda[i] - cur.lambda[i]);
    }
    if (curvature <= dist2 / (2.0 * step)) {
      std::swap(cur, trial);
      step = std::min(step * 2.0, 1e30);
    } else {
      step *= 0.5;
    }
  }
  return to_result(std::move(cur), it);
}

SubproblemResult solve_subproblem(const ProblemSpec& problem, double ell,
                                  std::span<const double> x, std::span<const double> y,
                                  const DualSolverConfig& cfg) {
  problem.check_dim(x, "solve_subproblem");
  const auto Fx = problem.evaluate(x);
  const auto model = linearize(problem, Fx, y);
  return solve_linearized(problem, model, ell, y, cfg);
}

double phi_value(const ProblemSpec& problem, double ell, std::span<const double> z,
                 std::span<const double> x, std::span<const double> y) {
  if (!(ell > 0.0)) throw std::invalid_argument("phi_value: ell must be > 0");
  problem.check_dim(z, "phi_value");
  problem.check_dim(x, "phi_value");
  const auto Fx = problem.evaluate(x);
  const auto model = linearize(problem, Fx, y);
  const auto h = bracket_values(problem, model, y, z);
  return *std::max_element(h.begin(), h.end()) + half_sq_dist(z, y, ell);
}

double stationarity_residual(const ProblemSpec& problem, double ell,
                             std::span<const double> x, std::span<const double> y,
                             const DualSolverConfig& cfg) {
  const auto r = solve_subproblem(problem, ell, x, y, cfg);
  double res = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) res = std::max(res, std::abs(r.z[j] - y[j]));
  return res;
}

}  // namespace apgm
