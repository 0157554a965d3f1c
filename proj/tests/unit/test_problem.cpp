#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "apgm/problem.hpp"
#include "apgm/rng.hpp"

namespace {

using apgm::kInf;
using apgm::TestProblem;

std::vector<double> random_point(const apgm::ProblemSpec& p, apgm::SplitMix64& rng) {
  std::vector<double> x(p.n());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = rng.uniform(p.init_lower()[j], p.init_upper()[j]);
  return x;
}

TEST(Problem, EvaluateExamples) {
  const auto jos1 = apgm::make_problem(TestProblem::kJos1, 2);
  const auto F = jos1.evaluate(std::vector<double>{0.0, 0.0});
  EXPECT_DOUBLE_EQ(F[0], 0.0);
  EXPECT_DOUBLE_EQ(F[1], 4.0);

  const auto con = apgm::make_problem(TestProblem::kFdsCon, 2);
  EXPECT_EQ(con.evaluate(std::vector<double>{-1.0, 0.0})[0], kInf);
  EXPECT_FALSE(con.in_domain(std::vector<double>{-1.0, 0.0}));
  EXPECT_TRUE(con.in_domain(std::vector<double>{1.0, 0.0}));

  const auto l1 = apgm::make_problem(TestProblem::kJos1L1, 2);
  const auto G = l1.evaluate(std::vector<double>{1.0, 1.0});
  EXPECT_DOUBLE_EQ(G[0], 2.0);
  EXPECT_DOUBLE_EQ(G[1], 1.0);
}

// Scalar reimplementation of JOS1_L1 used as an independent oracle.
std::vector<double> jos1_l1_oracle(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double f1 = 0, f2 = 0, g1 = 0, g2 = 0;
  for (const double v : x) {
    f1 += v * v;
    f2 += (v - 2) * (v - 2);
    g1 += std::abs(v);
    g2 += std::abs(v - 1);
  }
  return {f1 / n + g1 / n, f2 / n + g2 / (2 * n)};
}

TEST(Problem, Jos1L1MatchesScalarOracle) {
  const auto p = apgm::make_problem(TestProblem::kJos1L1, 7);
  apgm::SplitMix64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto x = random_point(p, rng);
    const auto F = p.evaluate(x);
    const auto ref = jos1_l1_oracle(x);
    EXPECT_NEAR(F[0], ref[0], 1e-13);
    EXPECT_NEAR(F[1], ref[1], 1e-13);
  }
}

TEST(Problem, GradientExamples) {
  const auto jos1 = apgm::make_problem(TestProblem::kJos1, 2);
  const auto g = jos1.gradient(0, std::vector<double>{1.0, 3.0});
  EXPECT_DOUBLE_EQ(g[0], 1.0);
  EXPECT_DOUBLE_EQ(g[1], 3.0);

  const auto fds = apgm::make_problem(TestProblem::kFds, 2);
  const auto g3 = fds.gradient(2, std::vector<double>{0.0, 0.0});
  EXPECT_NEAR(g3[0], -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(g3[1], -1.0 / 3.0, 1e-15);
  const auto g1 = fds.gradient(0, std::vector<double>{1.0, 2.0});
  EXPECT_EQ(g1[0], 0.0);
  EXPECT_EQ(g1[1], 0.0);

  EXPECT_THROW(fds.gradient(3, std::vector<double>{0.0, 0.0}), std::out_of_range);
  EXPECT_THROW(fds.gradient(0, std::vector<double>{0.0}), std::invalid_argument);
}

TEST(Problem, MakeProblemShapes) {
  const auto jos1 = apgm::make_problem("JOS1", 50);
  EXPECT_EQ(jos1.m(), 2u);
  ASSERT_TRUE(jos1.known_L().has_value());
  EXPECT_DOUBLE_EQ(*jos1.known_L(), 0.04);
  EXPECT_TRUE(jos1.nonsmooth()[0].is_zero());
  EXPECT_EQ(jos1.init_lower()[0], -2.0);
  EXPECT_EQ(jos1.init_upper()[49], 4.0);

  const auto con = apgm::make_problem("FDS-CON", 50);
  EXPECT_EQ(con.m(), 3u);
  EXPECT_FALSE(con.known_L().has_value());
  for (const auto& g : con.nonsmooth()) {
    const auto* box = g.as_box();
    ASSERT_NE(box, nullptr);
    EXPECT_EQ(box->lower[3], 0.0);
    EXPECT_EQ(box->upper[3], kInf);
  }
  EXPECT_EQ(con.init_lower()[0], 0.0);
  EXPECT_EQ(con.init_upper()[0], 2.0);

  const auto l1 = apgm::make_problem("JOS1_L1", 50);
  const auto* a = l1.nonsmooth()[0].as_l1();
  const auto* b = l1.nonsmooth()[1].as_l1();
  ASSERT_NE(a, nullptr);
  ASSERT_NE(b, nullptr);
  EXPECT_DOUBLE_EQ(a->weight, 1.0 / 50);
  EXPECT_EQ(a->shift[10], 0.0);
  EXPECT_DOUBLE_EQ(b->weight, 1.0 / 100);
  EXPECT_EQ(b->shift[10], 1.0);

  const auto fds = apgm::make_problem("FDS", 50);
  EXPECT_EQ(fds.init_lower()[0], -2.0);
  EXPECT_EQ(fds.init_upper()[0], 2.0);
}

TEST(Problem, NameParsing) {
  EXPECT_EQ(apgm::parse_problem_name("JOS1-L1"), TestProblem::kJos1L1);
  EXPECT_EQ(apgm::parse_problem_name("FDS_CON"), TestProblem::kFdsCon);
  EXPECT_THROW(apgm::parse_problem_name("ZDT1"), std::invalid_argument);
  EXPECT_THROW(apgm::make_problem("JOS1", 0), std::invalid_argument);
  for (const auto p : {TestProblem::kJos1, TestProblem::kJos1L1, TestProblem::kFds,
                       TestProblem::kFdsCon}) {
    EXPECT_EQ(apgm::parse_problem_name(apgm::problem_name(p)), p);
  }
}

class ProblemProperties : public ::testing::TestWithParam<TestProblem> {};

TEST_P(ProblemProperties, GradientsMatchCentralDifferences) {
  const auto p = apgm::make_problem(GetParam(), 12);
  apgm::SplitMix64 rng(11);
  const double h = 1e-6;
  for (int t = 0; t < 100; ++t) {
    auto x = random_point(p, rng);
    for (std::size_t i = 0; i < p.m(); ++i) {
      const auto g = p.gradient(i, x);
      double scale = 1.0;
      for (const double v : g) scale = std::max(scale, std::abs(v));
      for (std::size_t j = 0; j < p.n(); ++j) {
        const double keep = x[j];
        x[j] = keep + h;
        const double fp = p.smooth_value(i, x);
        x[j] = keep - h;
        const double fm = p.smooth_value(i, x);
        x[j] = keep;
        const double fd = (fp - fm) / (2 * h);
        ASSERT_LE(std::abs(fd - g[j]), 1e-4 * scale) << "objective " << i << " coord " << j;
      }
    }
  }
}

TEST_P(ProblemProperties, SmoothPartsAreConvexOnTheBox) {
  const auto p = apgm::make_problem(GetParam(), 10);
  apgm::SplitMix64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const auto x = random_point(p, rng);
    const auto y = random_point(p, rng);
    for (const double alpha : {0.25, 0.5, 0.75}) {
      std::vector<double> z(p.n());
      for (std::size_t j = 0; j < z.size(); ++j) z[j] = alpha * x[j] + (1 - alpha) * y[j];
      for (std::size_t i = 0; i < p.m(); ++i) {
        const double lhs = p.smooth_value(i, z);
        const double rhs = alpha * p.smooth_value(i, x) + (1 - alpha) * p.smooth_value(i, y);
        ASSERT_LE(lhs, rhs + 1e-10 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST_P(ProblemProperties, EvaluateIsSmoothPlusNonsmooth) {
  const auto p = apgm::make_problem(GetParam(), 9);
  apgm::SplitMix64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const auto x = random_point(p, rng);
    const auto F = p.evaluate(x);
    for (std::size_t i = 0; i < p.m(); ++i) {
      ASSERT_EQ(F[i], p.smooth_value(i, x) + apgm::piece_value(p.nonsmooth()[i], x));
      std::vector<double> g(p.n());
      const double v = p.smooth_value(i, x);
      ASSERT_NEAR(p.smooth(i).value_grad(x, g), v, 1e-14 * std::max(1.0, std::abs(v)));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(All, ProblemProperties,
                         ::testing::Values(TestProblem::kJos1, TestProblem::kJos1L1,
                                           TestProblem::kFds, TestProblem::kFdsCon),
                         [](const auto& info) { return apgm::problem_name(info.param); });

}  // namespace
