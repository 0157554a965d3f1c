#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "apgm/prox.hpp"
#include "apgm/rng.hpp"

namespace {

using apgm::BoxRule;
using apgm::kInf;
using apgm::SeparablePiece;

// Objective of the 1-D prox problem at z, evaluated from the definitions.
double prox_objective(const std::vector<SeparablePiece>& pieces, const std::vector<double>& lam,
                      double w, double ell, double z, BoxRule rule) {
  double v = 0.5 * ell * (z - w) * (z - w);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (const auto* l1 = pieces[i].as_l1()) {
      v += lam[i] * l1->weight * std::abs(z - l1->shift[0]);
    } else if (const auto* box = pieces[i].as_box()) {
      const bool counts = rule == BoxRule::kAll || lam[i] > 0.0;
      if (counts && (z < box->lower[0] || z > box->upper[0])) return kInf;
    }
  }
  return v;
}

// Dense grid followed by two zoomed grids around the incumbent.
double grid_argmin(const std::vector<SeparablePiece>& pieces, const std::vector<double>& lam,
                   double w, double ell, BoxRule rule, double lo, double hi) {
  double best_z = lo;
  double best = kInf;
  double step = (hi - lo) / 20000.0;
  for (int pass = 0; pass < 3; ++pass) {
    const double a = pass == 0 ? lo : best_z - 2 * step * 100;
    const double b = pass == 0 ? hi : best_z + 2 * step * 100;
    if (pass > 0) step = (b - a) / 20000.0;
    for (int s = 0; s <= 20000; ++s) {
      const double z = a + step * s;
      const double v = prox_objective(pieces, lam, w, ell, z, rule);
      if (v < best) {
        best = v;
        best_z = z;
      }
    }
    // Box edges are candidates the grid can step over.
    for (const auto& p : pieces) {
      if (const auto* box = p.as_box()) {
        for (const double e : {box->lower[0], box->upper[0]}) {
          const double v = std::isfinite(e) ? prox_objective(pieces, lam, w, ell, e, rule) : kInf;
          if (v < best) {
            best = v;
            best_z = e;
          }
        }
      }
    }
  }
  return best_z;
}

std::vector<double> prox(const std::vector<SeparablePiece>& pieces, const std::vector<double>& lam,
                         const std::vector<double>& w, double ell,
                         BoxRule rule = BoxRule::kWeighted) {
  std::vector<double> out(w.size());
  apgm::separable_prox(pieces, lam, w, ell, rule, out);
  return out;
}

TEST(PieceValue, Examples) {
  EXPECT_DOUBLE_EQ(apgm::piece_value(SeparablePiece::l1(0.5, 2), std::vector<double>{1, -3}), 2.0);
  const auto nonneg = SeparablePiece::nonnegative(2);
  EXPECT_EQ(apgm::piece_value(nonneg, std::vector<double>{0, 5}), 0.0);
  EXPECT_EQ(apgm::piece_value(nonneg, std::vector<double>{-0.1, 5}), kInf);
  EXPECT_EQ(apgm::piece_value(SeparablePiece::zero(3), std::vector<double>{1, 2, 3}), 0.0);
  EXPECT_THROW(apgm::piece_value(nonneg, std::vector<double>{1}), std::invalid_argument);
}

TEST(PieceFactory, RejectsBadArguments) {
  EXPECT_THROW(SeparablePiece::l1(-1.0, 2), std::invalid_argument);
  EXPECT_THROW(SeparablePiece::box({1.0}, {0.0}), std::invalid_argument);
  EXPECT_THROW(SeparablePiece::box({0.0, 0.0}, {1.0}), std::invalid_argument);
}

TEST(WeightedProx, SpecExamples) {
  {
    const std::vector<SeparablePiece> p{SeparablePiece::l1(0.3, 1)};
    EXPECT_NEAR(prox(p, {1.0}, {1.0}, 1.0)[0], 0.7, 1e-15);
  }
  {
    const std::vector<SeparablePiece> p{SeparablePiece::nonnegative(1)};
    EXPECT_EQ(prox(p, {1.0}, {-2.0}, 1.0)[0], 0.0);
  }
  {
    const std::vector<SeparablePiece> p{SeparablePiece::l1(1.0, 1),
                                        SeparablePiece::l1(0.5, std::vector<double>{1.0})};
    EXPECT_NEAR(prox(p, {0.5, 0.5}, {2.0}, 1.0)[0], 1.25, 1e-15);
  }
  {
    const std::vector<SeparablePiece> p{SeparablePiece::zero(2), SeparablePiece::zero(2)};
    const auto z = prox(p, {0.3, 0.7}, {3.0, -1.0}, 5.0);
    EXPECT_EQ(z[0], 3.0);
    EXPECT_EQ(z[1], -1.0);
  }
}

TEST(WeightedProx, CombinationViewValidatesSimplex) {
  const std::vector<SeparablePiece> p{SeparablePiece::zero(1), SeparablePiece::zero(1)};
  const std::vector<double> bad{0.6, 0.6};
  EXPECT_THROW(apgm::WeightedCombination(p, bad), std::invalid_argument);
  const std::vector<double> neg{1.5, -0.5};
  EXPECT_THROW(apgm::WeightedCombination(p, neg), std::invalid_argument);
  const std::vector<double> ok{0.25, 0.75};
  const apgm::WeightedCombination comb(p, ok);
  EXPECT_EQ(apgm::weighted_prox(comb, std::vector<double>{4.0}, 1.0)[0], 4.0);
}

TEST(WeightedProx, CombinationValueCountsOnlyWeightedBoxes) {
  const std::vector<SeparablePiece> p{SeparablePiece::nonnegative(1), SeparablePiece::l1(2.0, 1)};
  const std::vector<double> lam{0.0, 1.0};
  const apgm::WeightedCombination comb(p, lam);
  EXPECT_DOUBLE_EQ(comb.value(std::vector<double>{-1.0}), 2.0);
  const std::vector<double> lam2{0.5, 0.5};
  EXPECT_EQ(apgm::WeightedCombination(p, lam2).value(std::vector<double>{-1.0}), kInf);
}

TEST(WeightedProx, BoxRuleControlsZeroWeightBoxes) {
  const std::vector<SeparablePiece> p{SeparablePiece::nonnegative(1), SeparablePiece::zero(1)};
  EXPECT_EQ(prox(p, {0.0, 1.0}, {-3.0}, 1.0, BoxRule::kWeighted)[0], -3.0);
  EXPECT_EQ(prox(p, {0.0, 1.0}, {-3.0}, 1.0, BoxRule::kAll)[0], 0.0);
}

TEST(WeightedProx, EmptyBoxIntersectionThrows) {
  const std::vector<SeparablePiece> p{SeparablePiece::box({0.0}, {1.0}),
                                      SeparablePiece::box({2.0}, {3.0})};
  EXPECT_THROW(prox(p, {0.5, 0.5}, {1.5}, 1.0), apgm::InfeasibleProx);
  EXPECT_NO_THROW(prox(p, {1.0, 0.0}, {1.5}, 1.0));
}

struct RandomInstance {
  std::vector<SeparablePiece> pieces;
  std::vector<double> lam;
  double w = 0.0;
  double ell = 1.0;
};

// One coordinate, up to four mixed pieces, boxes sharing a common point so the
// weighted intersection is never empty.
RandomInstance random_instance(apgm::SplitMix64& rng) {
  RandomInstance inst;
  const int m = 1 + static_cast<int>(rng.next() % 4);
  const double anchor = rng.uniform(-1.0, 1.0);
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    const auto kind = rng.next() % 3;
    if (kind == 0) {
      inst.pieces.push_back(SeparablePiece::zero(1));
    } else if (kind == 1) {
      inst.pieces.push_back(SeparablePiece::l1(rng.uniform(0.0, 2.0),
                                               std::vector<double>{rng.uniform(-2.0, 2.0)}));
    } else {
      const double lo = rng.uniform() < 0.2 ? -kInf : anchor - rng.uniform(0.0, 1.5);
      const double hi = rng.uniform() < 0.2 ? kInf : anchor + rng.uniform(0.0, 1.5);
      inst.pieces.push_back(SeparablePiece::box({lo}, {hi}));
    }
    const double l = rng.uniform() < 0.15 ? 0.0 : rng.uniform(0.01, 1.0);
    inst.lam.push_back(l);
    total += l;
  }
  if (total == 0.0) {
    inst.lam[0] = 1.0;
    total = 1.0;
  }
  for (double& l : inst.lam) l /= total;
  inst.w = rng.uniform(-3.0, 3.0);
  inst.ell = rng.uniform(0.2, 5.0);
  return inst;
}

TEST(WeightedProx, AgreesWithGridOracle) {
  apgm::SplitMix64 rng(20240601);
  for (int trial = 0; trial < 500; ++trial) {
    const auto inst = random_instance(rng);
    for (const auto rule : {BoxRule::kWeighted, BoxRule::kAll}) {
      const double z = prox(inst.pieces, inst.lam, {inst.w}, inst.ell, rule)[0];
      const double z_grid =
          grid_argmin(inst.pieces, inst.lam, inst.w, inst.ell, rule, -8.0, 8.0);
      ASSERT_NEAR(z, z_grid, 1e-5) << "trial " << trial;
      const double fz = prox_objective(inst.pieces, inst.lam, inst.w, inst.ell, z, rule);
      const double fg = prox_objective(inst.pieces, inst.lam, inst.w, inst.ell, z_grid, rule);
      ASSERT_LE(fz, fg + 1e-12) << "trial " << trial;
    }
  }
}

TEST(WeightedProx, SubgradientOptimality) {
  apgm::SplitMix64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const auto inst = random_instance(rng);
    const double z = prox(inst.pieces, inst.lam, {inst.w}, inst.ell)[0];
    // Subdifferential of sum lam_i g_i at z as an interval [lo, hi].
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < inst.pieces.size(); ++i) {
      if (const auto* l1 = inst.pieces[i].as_l1()) {
        const double c = inst.lam[i] * l1->weight;
        const double s = l1->shift[0];
        if (z > s) {
          lo += c;
          hi += c;
        } else if (z < s) {
          lo -= c;
          hi -= c;
        } else {
          lo -= c;
          hi += c;
        }
      } else if (const auto* box = inst.pieces[i].as_box()) {
        if (inst.lam[i] == 0.0) continue;
        ASSERT_GE(z, box->lower[0]);
        ASSERT_LE(z, box->upper[0]);
        if (z == box->lower[0]) lo = -kInf;
        if (z == box->upper[0]) hi = kInf;
      }
    }
    const double r = -inst.ell * (z - inst.w);  // must lie in [lo, hi]
    ASSERT_GE(r, lo - 1e-8) << "trial " << trial;
    ASSERT_LE(r, hi + 1e-8) << "trial " << trial;
  }
}

TEST(WeightedProx, Nonexpansive) {
  apgm::SplitMix64 rng(99);
  const std::size_t n = 6;
  std::vector<double> shift(n);
  for (double& s : shift) s = rng.uniform(-1.0, 1.0);
  const std::vector<SeparablePiece> p{SeparablePiece::l1(0.7, shift),
                                      SeparablePiece::box(std::vector<double>(n, -1.5),
                                                          std::vector<double>(n, 2.0)),
                                      SeparablePiece::l1(0.2, n)};
  const std::vector<double> lam{0.5, 0.3, 0.2};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> w1(n), w2(n);
    for (std::size_t j = 0; j < n; ++j) {
      w1[j] = rng.uniform(-3.0, 3.0);
      w2[j] = rng.uniform(-3.0, 3.0);
    }
    const auto z1 = prox(p, lam, w1, 1.3);
    const auto z2 = prox(p, lam, w2, 1.3);
    double dz = 0.0, dw = 0.0, inner = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      dz += (z1[j] - z2[j]) * (z1[j] - z2[j]);
      dw += (w1[j] - w2[j]) * (w1[j] - w2[j]);
      inner += (z1[j] - z2[j]) * (w1[j] - w2[j]);
    }
    ASSERT_LE(std::sqrt(dz), std::sqrt(dw) + 1e-12);
    ASSERT_LE(dz, inner + 1e-12);  // firm nonexpansiveness
  }
}

TEST(WeightedProx, ZeroWeightPiecesHaveNoEffect) {
  apgm::SplitMix64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto inst = random_instance(rng);
    std::vector<SeparablePiece> kept;
    std::vector<double> kept_lam;
    inst.lam.push_back(0.0);
    inst.pieces.push_back(SeparablePiece::l1(5.0, std::vector<double>{rng.uniform(-1, 1)}));
    for (std::size_t i = 0; i < inst.pieces.size(); ++i) {
      if (inst.lam[i] > 0.0) {
        kept.push_back(inst.pieces[i]);
        kept_lam.push_back(inst.lam[i]);
      }
    }
    const double full = prox(inst.pieces, inst.lam, {inst.w}, inst.ell)[0];
    const double reduced = prox(kept, kept_lam, {inst.w}, inst.ell)[0];
    ASSERT_EQ(full, reduced) << "trial " << trial;
  }
}

}  // namespace
