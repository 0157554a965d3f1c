#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apgm/prox.hpp"

namespace apgm {

/// A convex, continuously differentiable f: R^n -> R.
///
/// `value_grad` writes the gradient into its second argument and returns the
/// function value. Both callables must be reentrant: a ProblemSpec is shared
/// read-only across concurrent runs.
struct SmoothFunction {
  std::function<double(std::span<const double>)> value;
  std::function<double(std::span<const double>, std::span<double>)> value_grad;
};

/// F_i = f_i + g_i for i = 1..m on R^n.
class ProblemSpec {
public:
  ProblemSpec(std::string name, std::size_t n, std::vector<SmoothFunction> smooth,
              std::vector<SeparablePiece> nonsmooth, std::vector<double> init_lower,
              std::vector<double> init_upper, std::optional<double> known_L = {});

  const std::string& name() const noexcept { return name_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return smooth_.size(); }
  const SmoothFunction& smooth(std::size_t i) const { return smooth_.at(i); }
  std::span<const SeparablePiece> nonsmooth() const noexcept { return nonsmooth_; }
  std::span<const double> init_lower() const noexcept { return init_lower_; }
  std::span<const double> init_upper() const noexcept { return init_upper_; }
  std::optional<double> known_L() const noexcept { return known_L_; }

  double smooth_value(std::size_t i, std::span<const double> x) const;
  double nonsmooth_value(std::size_t i, std::span<const double> x) const;

  /// (f_i(x) + g_i(x))_i; entries are +inf where a box is violated.
  std::vector<double> evaluate(std::span<const double> x) const;

  /// grad f_i(x), i zero-based.
  std::vector<double> gradient(std::size_t i, std::span<const double> x) const;

  /// True when every F_i(x) is finite.
  bool in_domain(std::span<const double> x) const;

  void check_dim(std::span<const double> x, const char* what) const;

private:
  std::string name_;
  std::size_t n_;
  std::vector<SmoothFunction> smooth_;
  std::vector<SeparablePiece> nonsmooth_;
  std::vector<double> init_lower_;
  std::vector<double> init_upper_;
  std::optional<double> known_L_;
};

enum class TestProblem { kJos1, kJos1L1, kFds, kFdsCon };

/// Accepts "JOS1", "JOS1_L1" (or "JOS1-L1"), "FDS", "FDS_CON" (or "FDS-CON").
/// Throws std::invalid_argument for anything else.
TestProblem parse_problem_name(std::string_view name);
std::string problem_name(TestProblem p);

/// The multi-objective benchmark problems at dimension n.
ProblemSpec make_problem(TestProblem which, std::size_t n);
ProblemSpec make_problem(std::string_view name, std::size_t n);

}  // namespace apgm
