#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace apgm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// g(x) = 0.
struct ZeroPiece {};

/// g(x) = weight * sum_j |x_j - shift_j|, weight >= 0.
struct WeightedL1 {
  double weight = 0.0;
  std::vector<double> shift;
};

/// g(x) = 0 on [lower, upper], +inf elsewhere. Bounds may be infinite.
struct BoxIndicator {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// A separable closed convex function on R^n.
class SeparablePiece {
public:
  using Kind = std::variant<ZeroPiece, WeightedL1, BoxIndicator>;

  static SeparablePiece zero(std::size_t n);
  static SeparablePiece l1(double weight, std::vector<double> shift);
  static SeparablePiece l1(double weight, std::size_t n);  // shift = 0
  static SeparablePiece box(std::vector<double> lower, std::vector<double> upper);
  static SeparablePiece nonnegative(std::size_t n);

  std::size_t dim() const noexcept { return dim_; }
  const Kind& kind() const noexcept { return kind_; }
  bool is_zero() const noexcept { return std::holds_alternative<ZeroPiece>(kind_); }
  const WeightedL1* as_l1() const noexcept { return std::get_if<WeightedL1>(&kind_); }
  const BoxIndicator* as_box() const noexcept { return std::get_if<BoxIndicator>(&kind_); }

private:
  SeparablePiece(Kind kind, std::size_t dim) : kind_(std::move(kind)), dim_(dim) {}
  Kind kind_;
  std::size_t dim_;
};

/// Exact value of the piece at x, +inf outside a box.
double piece_value(const SeparablePiece& piece, std::span<const double> x);

/// Thrown when the active boxes of a combination have empty intersection.
class InfeasibleProx : public std::domain_error {
public:
  explicit InfeasibleProx(const std::string& what) : std::domain_error(what) {}
};

/// Non-owning view of sum_i weights_i * g_i with weights on the unit simplex.
class WeightedCombination {
public:
  /// Throws std::invalid_argument on size mismatch, mixed dimensions or
  /// weights off the simplex (tolerance 1e-12).
  WeightedCombination(std::span<const SeparablePiece> pieces,
                      std::span<const double> weights);

  std::span<const SeparablePiece> pieces() const noexcept { return pieces_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t dim() const noexcept;

  /// sum_i weights_i g_i(x); a box only counts when its weight is positive.
  double value(std::span<const double> x) const;

private:
  std::span<const SeparablePiece> pieces_;
  std::span<const double> weights_;
};

/// Which boxes constrain the prox.
enum class BoxRule {
  kWeighted,  // only boxes whose weight is positive
  kAll,       // every box, regardless of its weight
};

/// argmin_z sum_i weights_i g_i(z) + (ell/2) ||z - w||^2 for nonnegative
/// weights (no simplex requirement). Each coordinate is an exact 1-D
/// piecewise-quadratic minimization over the sorted l1 breakpoints followed
/// by a clamp onto the intersected box. Throws InfeasibleProx on an empty box.
void separable_prox(std::span<const SeparablePiece> pieces,
                    std::span<const double> weights, std::span<const double> w,
                    double ell, BoxRule rule, std::span<double> out);

/// The prox of a simplex-weighted combination.
std::vector<double> weighted_prox(const WeightedCombination& comb,
                                  std::span<const double> w, double ell);

}  // namespace apgm
