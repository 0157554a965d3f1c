#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "apgm/kernels/kernels.hpp"
#include "apgm/problem.hpp"

namespace apgm::imaging {

using kernels::Extent;

/// Row-major grayscale image, nominal range [0, 1].
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> values;

  Image() = default;
  Image(std::size_t h, std::size_t w, double fill = 0.0)
      : height(h), width(w), values(h * w, fill) {}
  Image(std::size_t h, std::size_t w, std::vector<double> v);

  Extent extent() const noexcept { return {height, width}; }
  double& at(std::size_t r, std::size_t c) { return values[r * width + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * width + c]; }
};

struct BlurSpec {
  std::size_t kernel_size = 9;
  double sigma = 4.0;
};

/// Truncated Gaussian as an outer product col x row; the 2-D kernel sums to 1
/// unless rescaled.
struct BlurKernel {
  std::vector<double> col;
  std::vector<double> row;

  kernels::SeparableTaps taps() const noexcept { return {col, row}; }
  /// Flipped kernel (the adjoint under periodic boundaries).
  BlurKernel reversed() const;
  /// Kernel multiplied by `factor` (test use: denormalized blurs).
  BlurKernel scaled(double factor) const;
};

/// Throws std::invalid_argument for even or zero sizes or sigma <= 0.
BlurKernel make_gaussian_kernel(const BlurSpec& spec);

/// Periodic 2-D convolution. Throws if the image is smaller than the kernel.
Image blur_apply(const BlurKernel& kernel, const Image& img);
Image blur_adjoint(const BlurKernel& kernel, const Image& img);

/// Orthonormal multi-level Haar pair (full depth). Throws on
/// non-power-of-two dimensions.
Image haar_analysis(const Image& img);
Image haar_synthesis(const Image& coeffs);

/// Largest eigenvalue of a symmetric positive semidefinite operator by power
/// iteration from a seeded uniform start. Stops when the Rayleigh quotient
/// changes by less than rel_tol (relative); throws std::runtime_error after
/// max_steps.
double power_iteration(const std::function<void(std::span<const double>, std::span<double>)>& op,
                       std::size_t n, std::uint64_t seed = 1, std::size_t max_steps = 10000,
                       double rel_tol = 1e-13);

struct LipschitzEstimate {
  double spectral = 0.0;  // 2 max |K^(w)|^2 over the periodic DFT grid
  double power = 0.0;     // 2 lambda_max(B^T B) by power iteration
  double value() const noexcept { return spectral; }
};

/// Gradient Lipschitz constant of ||B W x - theta||^2, i.e. 2 lambda_max(B^T B).
LipschitzEstimate lipschitz_constant(const BlurKernel& kernel, Extent dims);
LipschitzEstimate lipschitz_constant(const BlurSpec& spec, Extent dims);

struct DeblurProblem {
  ProblemSpec problem;
  std::vector<double> x0;  // wavelet coefficients of the observation
  LipschitzEstimate lipschitz;
  Extent dims;
};

/// Single objective f(x) = ||B W x - observed||^2, g(x) = lambda ||x||_1,
/// with W the Haar synthesis and known_L from lipschitz_constant.
DeblurProblem make_deblur_problem(const Image& observed, const BlurKernel& kernel,
                                  double lambda_reg);

/// Adds i.i.d. N(0, sigma^2) noise from a SplitMix64 stream.
Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed);

/// Piecewise-constant test scene (rectangles, disks) over a gradient ramp,
/// values in [0, 1].
Image make_phantom(std::size_t size);

/// 10 log10(1 / MSE) against a [0, 1] reference.
double psnr(const Image& reference, const Image& img);

/// Binary PGM, "P5", maxval 65535, big-endian 16-bit, [0, 1] mapped linearly
/// and clamped on write.
void write_pgm(const Image& img, std::ostream& out);
void write_pgm(const Image& img, const std::string& path);
Image read_pgm(std::istream& in);
Image read_pgm(const std::string& path);

}  // namespace apgm::imaging
