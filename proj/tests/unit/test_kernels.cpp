#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "apgm/kernels/kernels.hpp"
#include "apgm/rng.hpp"

namespace {

namespace k = apgm::kernels;

std::vector<double> random_field(std::size_t n, std::uint64_t seed) {
  apgm::SplitMix64 rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

TEST(Kernels, Helpers) {
  EXPECT_TRUE(k::is_power_of_two(1));
  EXPECT_TRUE(k::is_power_of_two(64));
  EXPECT_FALSE(k::is_power_of_two(0));
  EXPECT_FALSE(k::is_power_of_two(48));
  EXPECT_EQ(k::haar_levels({32, 8}), 3u);
  EXPECT_EQ(k::haar_levels({1, 1}), 0u);
}

TEST(Kernels, ParallelConvolutionMatchesDirect) {
  const std::vector<double> col{0.1, 0.5, 0.4};
  const std::vector<double> row{0.2, 0.3, 0.1, 0.3, 0.1};
  for (const k::Extent e : {k::Extent{8, 8}, k::Extent{16, 32}, k::Extent{5, 7}}) {
    const auto in = random_field(e.size(), e.height * 31 + e.width);
    std::vector<double> a(e.size()), b(e.size());
    k::serial::convolve_periodic(e, {col, row}, in, a);
    k::omp::convolve_periodic(e, {col, row}, in, b);
    EXPECT_LE(max_abs_diff(a, b), 1e-14);
  }
}

TEST(Kernels, ParallelHaarMatchesSerialBitwise) {
  for (const k::Extent e : {k::Extent{2, 2}, k::Extent{16, 16}, k::Extent{8, 32}}) {
    const auto in = random_field(e.size(), e.size());
    std::vector<double> a(e.size()), b(e.size());
    k::serial::haar_analysis(e, in, a);
    k::omp::haar_analysis(e, in, b);
    EXPECT_EQ(a, b);
    std::vector<double> sa(e.size()), sb(e.size());
    k::serial::haar_synthesis(e, a, sa);
    k::omp::haar_synthesis(e, a, sb);
    EXPECT_EQ(sa, sb);
    EXPECT_LE(max_abs_diff(sa, in), 1e-12);
  }
}

TEST(Kernels, HaarTwoByTwo) {
  const std::vector<double> in{1, 1, 1, 1};
  std::vector<double> out(4);
  k::serial::haar_analysis({2, 2}, in, out);
  EXPECT_NEAR(out[0], 2.0, 1e-15);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(out[i], 0.0, 1e-15);
}

TEST(Kernels, DotProduct) {
  const std::vector<double> a{1, 2, 3}, b{4, -5, 6};
  EXPECT_EQ(k::serial::dot(a, b), 12.0);
}

}  // namespace
