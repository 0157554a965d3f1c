#include "apgm/prox.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace apgm {

namespace {

void require_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (expected " +
                                std::to_string(expected) + ", got " +
                                std::to_string(got) + ")");
  }
}

// Minimizer of sum_j c_j |z - b_j| + (ell/2)(z - w)^2 with b sorted ascending.
// The derivative on the k-th open interval (b_k, b_{k+1}) is
// ell (z - w) + S_k with S_k = 2 (c_1 + ... + c_k) - C, increasing in k, so the
// first interval whose stationary point does not overshoot its right edge
// holds the answer, either inside it or at its left kink.
double l1_quadratic_argmin(std::span<const std::pair<double, double>> kinks,
                           double w, double ell) {
  double total = 0.0;
  for (const auto& [b, c] : kinks) total += c;
  double prefix = 0.0;
  const std::size_t count = kinks.size();
  for (std::size_t k = 0; k <= count; ++k) {
    const double z = w - (2.0 * prefix - total) / ell;
    const double right = k < count ? kinks[k].first : kInf;
    if (z <= right) {
      if (k == 0) return z;
      const double left = kinks[k - 1].first;
      return z >= left ? z : left;
    }
    if (k < count) prefix += kinks[k].second;
  }
  return kinks.empty() ? w : kinks.back().first;  // unreachable: last interval is unbounded
}

}  // namespace

SeparablePiece SeparablePiece::zero(std::size_t n) { return {ZeroPiece{}, n}; }

SeparablePiece SeparablePiece::l1(double weight, std::vector<double> shift) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("WeightedL1: weight must be finite and >= 0");
  }
  const std::size_t n = shift.size();
  return {WeightedL1{weight, std::move(shift)}, n};
}

SeparablePiece SeparablePiece::l1(double weight, std::size_t n) {
  return l1(weight, std::vector<double>(n, 0.0));
}

SeparablePiece SeparablePiece::box(std::vector<double> lower, std::vector<double> upper) {
  require_dim(lower.size(), upper.size(), "BoxIndicator");
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!(lower[j] <= upper[j])) {
      throw std::invalid_argument("BoxIndicator: lower > upper at coordinate " +
                                  std::to_string(j));
    }
  }
  const std::size_t n = lower.size();
  return {BoxIndicator{std::move(lower), std::move(upper)}, n};
}

SeparablePiece SeparablePiece::nonnegative(std::size_t n) {
  return box(std::vector<double>(n, 0.0), std::vector<double>(n, kInf));
}

double piece_value(const SeparablePiece& piece, std::span<const double> x) {
  require_dim(piece.dim(), x.size(), "piece_value");
  if (const auto* l1 = piece.as_l1()) {
    double sum = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) sum += std::abs(x[j] - l1->shift[j]);
    return l1->weight * sum;
  }
  if (const auto* box = piece.as_box()) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] < box->lower[j] || x[j] > box->upper[j]) return kInf;
    }
  }
  return 0.0;
}

WeightedCombination::WeightedCombination(std::span<const SeparablePiece> pieces,
                                         std::span<const double> weights)
    : pieces_(pieces), weights_(weights) {
  require_dim(pieces.size(), weights.size(), "WeightedCombination");
  if (pieces.empty()) throw std::invalid_argument("WeightedCombination: no pieces");
  double sum = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    require_dim(pieces[0].dim(), pieces[i].dim(), "WeightedCombination");
    if (!(weights[i] >= 0.0)) {
      throw std::invalid_argument("WeightedCombination: negative weight");
    }
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("WeightedCombination: weights must sum to 1");
  }
}

std::size_t WeightedCombination::dim() const noexcept { return pieces_[0].dim(); }

double WeightedCombination::value(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (weights_[i] == 0.0) continue;
    const double v = piece_value(pieces_[i], x);
    if (v == kInf) return kInf;
    total += weights_[i] * v;
  }
  return total;
}

void separable_prox(std::span<const SeparablePiece> pieces,
                    std::span<const double> weights, std::span<const double> w,
                    double ell, BoxRule rule, std::span<double> out) {
  require_dim(pieces.size(), weights.size(), "separable_prox");
  require_dim(w.size(), out.size(), "separable_prox");
  if (!(ell > 0.0)) throw std::invalid_argument("separable_prox: ell must be > 0");

  std::vector<std::pair<const WeightedL1*, double>> l1s;
  std::vector<const BoxIndicator*> boxes;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    require_dim(w.size(), pieces[i].dim(), "separable_prox");
    const bool active = weights[i] > 0.0;
    if (const auto* l1 = pieces[i].as_l1()) {
      if (active && l1->weight > 0.0) l1s.emplace_back(l1, weights[i] * l1->weight);
    } else if (const auto* box = pieces[i].as_box()) {
      if (active || rule == BoxRule::kAll) boxes.push_back(box);
    }
  }

  std::vector<std::pair<double, double>> kinks(l1s.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    for (std::size_t p = 0; p < l1s.size(); ++p) {
      kinks[p] = {l1s[p].first->shift[j], l1s[p].second};
    }
    if (kinks.size() > 1) {
      std::sort(kinks.begin(), kinks.end(),
                [](const auto& u, const auto& v) { return u.first < v.first; });
    }
    double z = l1_quadratic_argmin(kinks, w[j], ell);

    if (!boxes.empty()) {
      double lo = -kInf;
      double hi = kInf;
      for (const auto* box : boxes) {
        lo = std::max(lo, box->lower[j]);
        hi = std::min(hi, box->upper[j]);
      }
      if (lo > hi) {
        throw InfeasibleProx("separable_prox: empty box intersection at coordinate " +
                             std::to_string(j));
      }
      z = std::clamp(z, lo, hi);
    }
    out[j] = z;
  }
}

std::vector<double> weighted_prox(const WeightedCombination& comb,
                                  std::span<const double> w, double ell) {
  std::vector<double> out(w.size());
  separable_prox(comb.pieces(), comb.weights(), w, ell, BoxRule::kWeighted, out);
  return out;
}

}  // namespace apgm
