#include "apgm/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace apgm {

ProblemSpec::ProblemSpec(std::string name, std::size_t n, std::vector<SmoothFunction> smooth,
                         std::vector<SeparablePiece> nonsmooth,
                         std::vector<double> init_lower, std::vector<double> init_upper,
                         std::optional<double> known_L)
    : name_(std::move(name)),
      n_(n),
      smooth_(std::move(smooth)),
      nonsmooth_(std::move(nonsmooth)),
      init_lower_(std::move(init_lower)),
      init_upper_(std::move(init_upper)),
      known_L_(known_L) {
  if (n_ == 0) throw std::invalid_argument("ProblemSpec: n must be >= 1");
  if (smooth_.empty()) throw std::invalid_argument("ProblemSpec: need at least one objective");
  if (smooth_.size() != nonsmooth_.size()) {
    throw std::invalid_argument("ProblemSpec: smooth/nonsmooth count mismatch");
  }
  for (const auto& g : nonsmooth_) {
    if (g.dim() != n_) throw std::invalid_argument("ProblemSpec: nonsmooth piece dimension");
  }
  if (init_lower_.size() != n_ || init_upper_.size() != n_) {
    throw std::invalid_argument("ProblemSpec: init box dimension");
  }
  for (std::size_t j = 0; j < n_; ++j) {
    if (!(init_lower_[j] <= init_upper_[j])) {
      throw std::invalid_argument("ProblemSpec: init box lower > upper");
    }
  }
  if (known_L_ && !(*known_L_ > 0.0)) {
    throw std::invalid_argument("ProblemSpec: known_L must be > 0");
  }
}

void ProblemSpec::check_dim(std::span<const double> x, const char* what) const {
  if (x.size() != n_) {
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(n_) + ", got " + std::to_string(x.size()));
  }
}

double ProblemSpec::smooth_value(std::size_t i, std::span<const double> x) const {
  check_dim(x, "smooth_value");
  return smooth_.at(i).value(x);
}

double ProblemSpec::nonsmooth_value(std::size_t i, std::span<const double> x) const {
  return piece_value(nonsmooth_.at(i), x);
}

std::vector<double> ProblemSpec::evaluate(std::span<const double> x) const {
  check_dim(x, "evaluate");
  std::vector<double> values(m());
  for (std::size_t i = 0; i < m(); ++i) {
    values[i] = smooth_[i].value(x) + piece_value(nonsmooth_[i], x);
  }
  return values;
}

std::vector<double> ProblemSpec::gradient(std::size_t i, std::span<const double> x) const {
  if (i >= m()) throw std::out_of_range("gradient: objective index out of range");
  check_dim(x, "gradient");
  std::vector<double> g(n_);
  smooth_[i].value_grad(x, g);
  return g;
}

bool ProblemSpec::in_domain(std::span<const double> x) const {
  for (const double v : evaluate(x)) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

namespace {

// (1/n) ||x - c||^2 for a constant-vector center c.
SmoothFunction scaled_sq_distance(double center, std::size_t n) {
  const double scale = 1.0 / static_cast<double>(n);
  SmoothFunction f;
  f.value = [=](std::span<const double> x) {
    double s = 0.0;
    for (const double xj : x) s += (xj - center) * (xj - center);
    return scale * s;
  };
  f.value_grad = [=](std::span<const double> x, std::span<double> g) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = x[j] - center;
      s += d * d;
      g[j] = 2.0 * scale * d;
    }
    return scale * s;
  };
  return f;
}

// (1/n^2) sum_j j (x_j - j)^4, j one-based.
SmoothFunction fds_quartic(std::size_t n) {
  const double nd = static_cast<double>(n);
  const double scale = 1.0 / (nd * nd);
  SmoothFunction f;
  f.value = [=](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double idx = static_cast<double>(j + 1);
      const double d = x[j] - idx;
      s += idx * d * d * d * d;
    }
    return scale * s;
  };
  f.value_grad = [=](std::span<const double> x, std::span<double> g) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double idx = static_cast<double>(j + 1);
      const double d = x[j] - idx;
      const double d3 = d * d * d;
      s += idx * d3 * d;
      g[j] = 4.0 * scale * idx * d3;
    }
    return scale * s;
  };
  return f;
}

// exp(sum_j x_j / n) + ||x||^2.
SmoothFunction fds_exponential(std::size_t n) {
  const double inv_n = 1.0 / static_cast<double>(n);
  SmoothFunction f;
  f.value = [=](std::span<const double> x) {
    double sum = 0.0;
    double sq = 0.0;
    for (const double xj : x) {
      sum += xj;
      sq += xj * xj;
    }
    return std::exp(sum * inv_n) + sq;
  };
  f.value_grad = [=](std::span<const double> x, std::span<double> g) {
    double sum = 0.0;
    double sq = 0.0;
    for (const double xj : x) {
      sum += xj;
      sq += xj * xj;
    }
    const double e = std::exp(sum * inv_n);
    for (std::size_t j = 0; j < x.size(); ++j) g[j] = inv_n * e + 2.0 * x[j];
    return e + sq;
  };
  return f;
}

// (1/(n(n+1))) sum_j j (n - j + 1) exp(-x_j), j one-based.
SmoothFunction fds_weighted_exp(std::size_t n) {
  const double nd = static_cast<double>(n);
  const double scale = 1.0 / (nd * (nd + 1.0));
  auto weight = [nd](std::size_t j) {
    const double idx = static_cast<double>(j + 1);
    return idx * (nd - idx + 1.0);
  };
  SmoothFunction f;
  f.value = [=](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += weight(j) * std::exp(-x[j]);
    return scale * s;
  };
  f.value_grad = [=](std::span<const double> x, std::span<double> g) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double t = weight(j) * std::exp(-x[j]);
      s += t;
      g[j] = -scale * t;
    }
    return scale * s;
  };
  return f;
}

}  // namespace

TestProblem parse_problem_name(std::string_view name) {
  if (name == "JOS1") return TestProblem::kJos1;
  if (name == "JOS1_L1" || name == "JOS1-L1") return TestProblem::kJos1L1;
  if (name == "FDS") return TestProblem::kFds;
  if (name == "FDS_CON" || name == "FDS-CON") return TestProblem::kFdsCon;
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

std::string problem_name(TestProblem p) {
  switch (p) {
    case TestProblem::kJos1: return "JOS1";
    case TestProblem::kJos1L1: return "JOS1_L1";
    case TestProblem::kFds: return "FDS";
    case TestProblem::kFdsCon: return "FDS_CON";
  }
  return "?";
}

ProblemSpec make_problem(TestProblem which, std::size_t n) {
  if (n == 0) throw std::invalid_argument("make_problem: n must be >= 1");
  const double nd = static_cast<double>(n);
  auto constant = [n](double v) { return std::vector<double>(n, v); };

  switch (which) {
    case TestProblem::kJos1:
      return ProblemSpec("JOS1", n, {scaled_sq_distance(0.0, n), scaled_sq_distance(2.0, n)},
                         {SeparablePiece::zero(n), SeparablePiece::zero(n)}, constant(-2.0),
                         constant(4.0), 2.0 / nd);
    case TestProblem::kJos1L1:
      return ProblemSpec("JOS1_L1", n,
                         {scaled_sq_distance(0.0, n), scaled_sq_distance(2.0, n)},
                         {SeparablePiece::l1(1.0 / nd, constant(0.0)),
                          SeparablePiece::l1(1.0 / (2.0 * nd), constant(1.0))},
                         constant(-2.0), constant(4.0), 2.0 / nd);
    case TestProblem::kFds:
      return ProblemSpec("FDS", n, {fds_quartic(n), fds_exponential(n), fds_weighted_exp(n)},
                         {SeparablePiece::zero(n), SeparablePiece::zero(n),
                          SeparablePiece::zero(n)},
                         constant(-2.0), constant(2.0));
    case TestProblem::kFdsCon:
      return ProblemSpec("FDS_CON", n,
                         {fds_quartic(n), fds_exponential(n), fds_weighted_exp(n)},
                         {SeparablePiece::nonnegative(n), SeparablePiece::nonnegative(n),
                          SeparablePiece::nonnegative(n)},
                         constant(0.0), constant(2.0));
  }
  throw std::invalid_argument("make_problem: unknown problem");
}

ProblemSpec make_problem(std::string_view name, std::size_t n) {
  return make_problem(parse_problem_name(name), n);
}

}  // namespace apgm
