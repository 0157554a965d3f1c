#pragma once

// Data-parallel image kernels on row-major height x width grids.
//
// `serial::` holds direct reference implementations used by the tests as an
// oracle; `omp::` holds the OpenMP versions the library runs. Every omp kernel
// computes each output element with a fixed summation order, so results do
// not depend on the thread count.

#include <cstddef>
#include <span>

namespace apgm::kernels {

/// Grid extent; data is row-major with index r * width + c.
struct Extent {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t size() const noexcept { return height * width; }
};

/// A 2-D kernel k(i, j) = col_taps[i] * row_taps[j], both of odd length and
/// centered. Convolution: out(r, c) = sum_ij k(i, j) in(r - i + hc, c - j + hr)
/// with periodic wrap, where hc, hr are the half lengths.
struct SeparableTaps {
  std::span<const double> col_taps;  // along height
  std::span<const double> row_taps;  // along width
};

namespace serial {

/// Direct 2-D periodic convolution with the full outer-product kernel.
void convolve_periodic(Extent e, SeparableTaps k, std::span<const double> in,
                       std::span<double> out);

/// Multi-level orthonormal 2-D Haar analysis, levels = log2(min(h, w)).
void haar_analysis(Extent e, std::span<const double> in, std::span<double> out);

/// Inverse of haar_analysis.
void haar_synthesis(Extent e, std::span<const double> in, std::span<double> out);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace serial

namespace omp {

/// Two-pass separable periodic convolution, parallel over rows and columns.
void convolve_periodic(Extent e, SeparableTaps k, std::span<const double> in,
                       std::span<double> out);

void haar_analysis(Extent e, std::span<const double> in, std::span<double> out);
void haar_synthesis(Extent e, std::span<const double> in, std::span<double> out);

}  // namespace omp

/// Number of Haar levels for an extent: log2(min(height, width)).
std::size_t haar_levels(Extent e) noexcept;

bool is_power_of_two(std::size_t v) noexcept;

}  // namespace apgm::kernels
