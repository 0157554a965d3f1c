#include "apgm/imaging/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "apgm/rng.hpp"

namespace apgm::imaging {

Image::Image(std::size_t h, std::size_t w, std::vector<double> v)
    : height(h), width(w), values(std::move(v)) {
  if (values.size() != h * w) throw std::invalid_argument("Image: value count mismatch");
}

BlurKernel BlurKernel::reversed() const {
  return {std::vector<double>(col.rbegin(), col.rend()),
          std::vector<double>(row.rbegin(), row.rend())};
}

BlurKernel BlurKernel::scaled(double factor) const {
  BlurKernel k = *this;
  for (double& v : k.row) v *= factor;
  return k;
}

BlurKernel make_gaussian_kernel(const BlurSpec& spec) {
  if (spec.kernel_size == 0 || spec.kernel_size % 2 == 0) {
    throw std::invalid_argument("BlurSpec: kernel_size must be odd");
  }
  if (!(spec.sigma > 0.0)) throw std::invalid_argument("BlurSpec: sigma must be > 0");
  const auto half = static_cast<std::ptrdiff_t>(spec.kernel_size / 2);
  std::vector<double> taps(spec.kernel_size);
  double sum = 0.0;
  for (std::ptrdiff_t i = -half; i <= half; ++i) {
    const double v = std::exp(-static_cast<double>(i * i) / (2.0 * spec.sigma * spec.sigma));
    taps[i + half] = v;
    sum += v;
  }
  for (double& v : taps) v /= sum;
  return {taps, taps};
}

namespace {

void require_fits(const BlurKernel& k, const Image& img) {
  if (img.height < k.col.size() || img.width < k.row.size()) {
    throw std::invalid_argument("blur: image smaller than the kernel");
  }
}

void require_pow2(Extent e) {
  if (!kernels::is_power_of_two(e.height) || !kernels::is_power_of_two(e.width)) {
    throw std::invalid_argument("haar: dimensions must be powers of two");
  }
}

// |sum_t taps[t] exp(-2 pi i f (t - half) / L)|^2 for f = 0..L-1.
std::vector<double> power_spectrum_1d(std::span<const double> taps, std::size_t L) {
  const auto half = static_cast<std::ptrdiff_t>(taps.size() / 2);
  std::vector<double> out(L);
  for (std::size_t f = 0; f < L; ++f) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < taps.size(); ++t) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(f) *
                           static_cast<double>(static_cast<std::ptrdiff_t>(t) - half) /
                           static_cast<double>(L);
      acc += taps[t] * std::polar(1.0, phase);
    }
    out[f] = std::norm(acc);
  }
  return out;
}

}  // namespace

Image blur_apply(const BlurKernel& kernel, const Image& img) {
  require_fits(kernel, img);
  Image out(img.height, img.width);
  kernels::omp::convolve_periodic(img.extent(), kernel.taps(), img.values, out.values);
  return out;
}

Image blur_adjoint(const BlurKernel& kernel, const Image& img) {
  return blur_apply(kernel.reversed(), img);
}

Image haar_analysis(const Image& img) {
  require_pow2(img.extent());
  Image out(img.height, img.width);
  kernels::omp::haar_analysis(img.extent(), img.values, out.values);
  return out;
}

Image haar_synthesis(const Image& coeffs) {
  require_pow2(coeffs.extent());
  Image out(coeffs.height, coeffs.width);
  kernels::omp::haar_synthesis(coeffs.extent(), coeffs.values, out.values);
  return out;
}

double power_iteration(const std::function<void(std::span<const double>, std::span<double>)>& op,
                       std::size_t n, std::uint64_t seed, std::size_t max_steps,
                       double rel_tol) {
  if (n == 0) throw std::invalid_argument("power_iteration: empty operator");
  SplitMix64 rng(seed);
  std::vector<double> x(n);
  std::vector<double> ax(n);
  for (double& v : x) v = rng.uniform();
  auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (const double e : v) s += e * e;
    const double inv = 1.0 / std::sqrt(s);
    for (double& e : v) e *= inv;
  };
  normalize(x);
  double estimate = 0.0;
  for (std::size_t step = 0; step < max_steps; ++step) {
    op(x, ax);
    double rq = 0.0;
    for (std::size_t j = 0; j < n; ++j) rq += x[j] * ax[j];
    if (step > 0 && std::abs(rq - estimate) <= rel_tol * std::abs(rq)) return rq;
    estimate = rq;
    x.swap(ax);
    normalize(x);
  }
  throw std::runtime_error("power_iteration: no convergence within " +
                           std::to_string(max_steps) + " steps");
}

LipschitzEstimate lipschitz_constant(const BlurKernel& kernel, Extent dims) {
  if (dims.height < kernel.col.size() || dims.width < kernel.row.size()) {
    throw std::invalid_argument("lipschitz_constant: grid smaller than the kernel");
  }
  LipschitzEstimate est;
  // The periodic blur is diagonalized by the 2-D DFT; its symbol factorizes.
  const auto col_spec = power_spectrum_1d(kernel.col, dims.height);
  const auto row_spec = power_spectrum_1d(kernel.row, dims.width);
  double peak = 0.0;
  for (const double c : col_spec) {
    for (const double r : row_spec) peak = std::max(peak, c * r);
  }
  est.spectral = 2.0 * peak;

  const BlurKernel adj = kernel.reversed();
  std::vector<double> tmp(dims.size());
  auto normal_op = [&](std::span<const double> in, std::span<double> out) {
    kernels::omp::convolve_periodic(dims, kernel.taps(), in, tmp);
    kernels::omp::convolve_periodic(dims, adj.taps(), tmp, out);
  };
  est.power = 2.0 * power_iteration(normal_op, dims.size());
  return est;
}

LipschitzEstimate lipschitz_constant(const BlurSpec& spec, Extent dims) {
  return lipschitz_constant(make_gaussian_kernel(spec), dims);
}

namespace {

struct DeblurContext {
  Extent dims;
  BlurKernel kernel;
  BlurKernel adjoint;
  std::vector<double> observed;

  // r = B W x - observed; returns ||r||^2.
  double residual(std::span<const double> x, std::vector<double>& image,
                  std::vector<double>& r) const {
    kernels::omp::haar_synthesis(dims, x, image);
    kernels::omp::convolve_periodic(dims, kernel.taps(), image, r);
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      r[j] -= observed[j];
      s += r[j] * r[j];
    }
    return s;
  }
};

}  // namespace

DeblurProblem make_deblur_problem(const Image& observed, const BlurKernel& kernel,
                                  double lambda_reg) {
  if (!(lambda_reg >= 0.0)) throw std::invalid_argument("deblur: lambda must be >= 0");
  require_pow2(observed.extent());
  require_fits(kernel, observed);

  auto ctx = std::make_shared<DeblurContext>();
  ctx->dims = observed.extent();
  ctx->kernel = kernel;
  ctx->adjoint = kernel.reversed();
  ctx->observed = observed.values;
  const std::size_t n = observed.values.size();

  SmoothFunction f;
  f.value = [ctx](std::span<const double> x) {
    std::vector<double> image(x.size());
    std::vector<double> r(x.size());
    return ctx->residual(x, image, r);
  };
  f.value_grad = [ctx](std::span<const double> x, std::span<double> g) {
    std::vector<double> image(x.size());
    std::vector<double> r(x.size());
    const double value = ctx->residual(x, image, r);
    kernels::omp::convolve_periodic(ctx->dims, ctx->adjoint.taps(), r, image);
    kernels::omp::haar_analysis(ctx->dims, image, g);
    for (double& v : g) v *= 2.0;
    return value;
  };

  const auto lip = lipschitz_constant(kernel, observed.extent());
  std::vector<SmoothFunction> smooth{std::move(f)};
  std::vector<SeparablePiece> nonsmooth{SeparablePiece::l1(lambda_reg, n)};
  ProblemSpec spec("DEBLUR", n, std::move(smooth), std::move(nonsmooth),
                   std::vector<double>(n, -kInf), std::vector<double>(n, kInf),
                   lip.value());
  return {std::move(spec), haar_analysis(observed).values, lip, observed.extent()};
}

Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("noise: sigma must be >= 0");
  Image out = img;
  if (sigma == 0.0) return out;
  SplitMix64 rng(seed);
  for (double& v : out.values) v += sigma * rng.normal();
  return out;
}

Image make_phantom(std::size_t size) {
  if (size < 8) throw std::invalid_argument("phantom: size must be >= 8");
  Image img(size, size);
  const double s = static_cast<double>(size);
  auto in_rect = [&](double r, double c, double r0, double c0, double r1, double c1) {
    return r >= r0 * s && r < r1 * s && c >= c0 * s && c < c1 * s;
  };
  auto in_disk = [&](double r, double c, double rc, double cc, double rad) {
    const double dr = r - rc * s;
    const double dc = c - cc * s;
    return dr * dr + dc * dc <= rad * rad * s * s;
  };
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      const double r = static_cast<double>(i) + 0.5;
      const double c = static_cast<double>(j) + 0.5;
      double v = 0.1 + 0.2 * c / s;  // ramp
      if (in_rect(r, c, 0.10, 0.10, 0.45, 0.40)) v = 0.85;
      if (in_rect(r, c, 0.20, 0.18, 0.35, 0.30)) v = 0.35;
      if (in_rect(r, c, 0.60, 0.55, 0.90, 0.92)) v = 0.60;
      if (in_rect(r, c, 0.08, 0.60, 0.14, 0.95)) v = 0.95;
      if (in_disk(r, c, 0.30, 0.72, 0.13)) v = 1.0;
      if (in_disk(r, c, 0.30, 0.72, 0.05)) v = 0.15;
      if (in_disk(r, c, 0.72, 0.25, 0.16)) v = 0.45;
      if (in_disk(r, c, 0.75, 0.74, 0.07)) v = 0.05;
      img.at(i, j) = v;
    }
  }
  return img;
}

double psnr(const Image& reference, const Image& img) {
  if (reference.values.size() != img.values.size() || img.values.empty()) {
    throw std::invalid_argument("psnr: size mismatch");
  }
  double mse = 0.0;
  for (std::size_t j = 0; j < img.values.size(); ++j) {
    const double d = reference.values[j] - img.values[j];
    mse += d * d;
  }
  mse /= static_cast<double>(img.values.size());
  return 10.0 * std::log10(1.0 / mse);
}

void write_pgm(const Image& img, std::ostream& out) {
  out << "P5\n" << img.width << ' ' << img.height << "\n65535\n";
  for (const double v : img.values) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    const auto q = static_cast<std::uint16_t>(std::lround(clamped * 65535.0));
    const char bytes[2] = {static_cast<char>(q >> 8), static_cast<char>(q & 0xFF)};
    out.write(bytes, 2);
  }
  if (!out) throw std::runtime_error("write_pgm: stream error");
}

void write_pgm(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
  write_pgm(img, out);
}

Image read_pgm(std::istream& in) {
  std::string magic;
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned maxval = 0;
  in >> magic >> width >> height >> maxval;
  if (!in || magic != "P5" || maxval != 65535) {
    throw std::runtime_error("read_pgm: expected binary P5 with maxval 65535");
  }
  in.get();  // single whitespace after the header
  Image img(height, width);
  for (double& v : img.values) {
    unsigned char bytes[2];
    in.read(reinterpret_cast<char*>(bytes), 2);
    if (!in) throw std::runtime_error("read_pgm: truncated data");
    v = static_cast<double>((bytes[0] << 8) | bytes[1]) / 65535.0;
  }
  return img;
}

Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_pgm: cannot open " + path);
  return read_pgm(in);
}

}  // namespace apgm::imaging
