#include <algorithm>
#include <vector>

#include "apgm/kernels/kernels.hpp"

namespace apgm::kernels::omp {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Wrapped source index for each output position and tap: idx[p * taps + t].
std::vector<std::size_t> wrap_table(std::size_t length, std::size_t taps) {
  const auto L = static_cast<std::ptrdiff_t>(length);
  const auto half = static_cast<std::ptrdiff_t>(taps / 2);
  std::vector<std::size_t> idx(length * taps);
  for (std::ptrdiff_t p = 0; p < L; ++p) {
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(taps); ++t) {
      idx[p * taps + t] = static_cast<std::size_t>(((p - t + half) % L + L) % L);
    }
  }
  return idx;
}

}  // namespace

void convolve_periodic(Extent e, SeparableTaps k, std::span<const double> in,
                       std::span<double> out) {
  const std::size_t H = e.height;
  const std::size_t W = e.width;
  const std::size_t kh = k.col_taps.size();
  const std::size_t kw = k.row_taps.size();
  const auto col_idx = wrap_table(H, kh);
  const auto row_idx = wrap_table(W, kw);
  std::vector<double> tmp(e.size());

  const auto rows = static_cast<std::ptrdiff_t>(H);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const double* src = in.data() + r * W;
    double* dst = tmp.data() + r * W;
    for (std::size_t c = 0; c < W; ++c) {
      const std::size_t* ix = row_idx.data() + c * kw;
      double acc = 0.0;
      for (std::size_t t = 0; t < kw; ++t) acc += k.row_taps[t] * src[ix[t]];
      dst[c] = acc;
    }
  }

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    double* dst = out.data() + r * W;
    const std::size_t* ix = col_idx.data() + r * kh;
    std::fill(dst, dst + W, 0.0);
    for (std::size_t t = 0; t < kh; ++t) {
      const double w = k.col_taps[t];
      const double* src = tmp.data() + ix[t] * W;
      for (std::size_t c = 0; c < W; ++c) dst[c] += w * src[c];
    }
  }
}

void haar_analysis(Extent e, std::span<const double> in, std::span<double> out) {
  const std::size_t W = e.width;
  std::copy(in.begin(), in.end(), out.begin());
  double* data = out.data();
  const std::size_t levels = haar_levels(e);
  for (std::size_t lev = 0; lev < levels; ++lev) {
    const std::size_t bh = e.height >> lev;
    const std::size_t bw = e.width >> lev;
#pragma omp parallel
    {
      std::vector<double> line(std::max(bh, bw));
#pragma omp for schedule(static)
      for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(bh); ++r) {
        double* row = data + r * W;
        for (std::size_t i = 0; i < bw / 2; ++i) {
          line[i] = (row[2 * i] + row[2 * i + 1]) * kInvSqrt2;
          line[bw / 2 + i] = (row[2 * i] - row[2 * i + 1]) * kInvSqrt2;
        }
        std::copy(line.begin(), line.begin() + bw, row);
      }
#pragma omp for schedule(static)
      for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(bw); ++c) {
        for (std::size_t i = 0; i < bh / 2; ++i) {
          const double a = data[(2 * i) * W + c];
          const double b = data[(2 * i + 1) * W + c];
          line[i] = (a + b) * kInvSqrt2;
          line[bh / 2 + i] = (a - b) * kInvSqrt2;
        }
        for (std::size_t i = 0; i < bh; ++i) data[i * W + c] = line[i];
      }
    }
  }
}

void haar_synthesis(Extent e, std::span<const double> in, std::span<double> out) {
  const std::size_t W = e.width;
  std::copy(in.begin(), in.end(), out.begin());
  double* data = out.data();
  for (std::size_t lev = haar_levels(e); lev-- > 0;) {
    const std::size_t bh = e.height >> lev;
    const std::size_t bw = e.width >> lev;
#pragma omp parallel
    {
      std::vector<double> line(std::max(bh, bw));
#pragma omp for schedule(static)
      for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(bw); ++c) {
        for (std::size_t i = 0; i < bh / 2; ++i) {
          const double s = data[i * W + c];
          const double d = data[(bh / 2 + i) * W + c];
          line[2 * i] = (s + d) * kInvSqrt2;
          line[2 * i + 1] = (s - d) * kInvSqrt2;
        }
        for (std::size_t i = 0; i < bh; ++i) data[i * W + c] = line[i];
      }
#pragma omp for schedule(static)
      for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(bh); ++r) {
        double* row = data + r * W;
        for (std::size_t i = 0; i < bw / 2; ++i) {
          line[2 * i] = (row[i] + row[bw / 2 + i]) * kInvSqrt2;
          line[2 * i + 1] = (row[i] - row[bw / 2 + i]) * kInvSqrt2;
        }
        std::copy(line.begin(), line.begin() + bw, row);
      }
    }
  }
}

}  // namespace apgm::kernels::omp
