#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "apgm/kernels/kernels.hpp"

namespace apgm::kernels {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

bool is_power_of_two(std::size_t v) noexcept { return v != 0 && (v & (v - 1)) == 0; }

std::size_t haar_levels(Extent e) noexcept {
  std::size_t levels = 0;
  for (std::size_t s = std::min(e.height, e.width); s > 1; s >>= 1) ++levels;
  return levels;
}

namespace serial {

void convolve_periodic(Extent e, SeparableTaps k, std::span<const double> in,
                       std::span<double> out) {
  const auto H = static_cast<std::ptrdiff_t>(e.height);
  const auto W = static_cast<std::ptrdiff_t>(e.width);
  const auto kh = static_cast<std::ptrdiff_t>(k.col_taps.size());
  const auto kw = static_cast<std::ptrdiff_t>(k.row_taps.size());
  const std::ptrdiff_t hc = kh / 2;
  const std::ptrdiff_t hr = kw / 2;
  for (std::ptrdiff_t r = 0; r < H; ++r) {
    for (std::ptrdiff_t c = 0; c < W; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t i = 0; i < kh; ++i) {
        const std::ptrdiff_t rr = ((r - i + hc) % H + H) % H;
        for (std::ptrdiff_t j = 0; j < kw; ++j) {
          const std::ptrdiff_t cc = ((c - j + hr) % W + W) % W;
          acc += k.col_taps[i] * k.row_taps[j] * in[rr * W + cc];
        }
      }
      out[r * W + c] = acc;
    }
  }
}

void haar_analysis(Extent e, std::span<const double> in, std::span<double> out) {
  const std::size_t W = e.width;
  std::vector<double> cur(in.begin(), in.end());
  std::vector<double> next;
  for (std::size_t lev = 0; lev < haar_levels(e); ++lev) {
    const std::size_t bh = e.height >> lev;
    const std::size_t bw = e.width >> lev;
    next = cur;
    for (std::size_t r = 0; r < bh; ++r) {
      for (std::size_t i = 0; i < bw / 2; ++i) {
        const double a = cur[r * W + 2 * i];
        const double b = cur[r * W + 2 * i + 1];
        next[r * W + i] = (a + b) * kInvSqrt2;
        next[r * W + bw / 2 + i] = (a - b) * kInvSqrt2;
      }
    }
    cur = next;
    for (std::size_t c = 0; c < bw; ++c) {
      for (std::size_t i = 0; i < bh / 2; ++i) {
        const double a = cur[(2 * i) * W + c];
        const double b = cur[(2 * i + 1) * W + c];
        next[i * W + c] = (a + b) * kInvSqrt2;
        next[(bh / 2 + i) * W + c] = (a - b) * kInvSqrt2;
      }
    }
    cur = next;
  }
  std::copy(cur.begin(), cur.end(), out.begin());
}

void haar_synthesis(Extent e, std::span<const double> in, std::span<double> out) {
  const std::size_t W = e.width;
  std::vector<double> cur(in.begin(), in.end());
  std::vector<double> next;
  for (std::size_t lev = haar_levels(e); lev-- > 0;) {
    const std::size_t bh = e.height >> lev;
    const std::size_t bw = e.width >> lev;
    next = cur;
    for (std::size_t c = 0; c < bw; ++c) {
      for (std::size_t i = 0; i < bh / 2; ++i) {
        const double s = cur[i * W + c];
        const double d = cur[(bh / 2 + i) * W + c];
        next[(2 * i) * W + c] = (s + d) * kInvSqrt2;
        next[(2 * i + 1) * W + c] = (s - d) * kInvSqrt2;
      }
    }
    cur = next;
    for (std::size_t r = 0; r < bh; ++r) {
      for (std::size_t i = 0; i < bw / 2; ++i) {
        const double s = cur[r * W + i];
        const double d = cur[r * W + bw / 2 + i];
        next[r * W + 2 * i] = (s + d) * kInvSqrt2;
        next[r * W + 2 * i + 1] = (s - d) * kInvSqrt2;
      }
    }
    cur = next;
  }
  std::copy(cur.begin(), cur.end(), out.begin());
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace serial
}  // namespace apgm::kernels
