#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "apgm/imaging/imaging.hpp"
#include "apgm/momentum.hpp"
#include "apgm/problem.hpp"
#include "apgm/solver.hpp"

namespace apgm::bench {

/// Invalid configuration text or values. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct BenchConfig {
  std::string problem = "JOS1";
  std::size_t n = 50;
  std::size_t num_starts = 100;
  std::uint64_t seed = 1;
  std::vector<MomentumParams> pairs = standard_pairs();
  double eps = 1e-5;
  std::size_t max_iterations = 10000;
  std::filesystem::path out_dir = "out";
  std::size_t history_stride = 1;

  void validate() const;
};

/// Parses a real number, accepting "p/q" fractions ("1/6").
double parse_real(std::string_view text, std::string_view key);

/// "a,b;a,b;..." with each pair validated.
std::vector<MomentumParams> parse_pairs(std::string_view text);

/// Applies one `key = value` setting; throws ConfigError for unknown keys or
/// bad values.
void apply_setting(BenchConfig& cfg, std::string_view key, std::string_view value);

/// Flat `key = value` file; `#` starts a comment. Missing keys keep their
/// defaults. Errors carry the line number.
BenchConfig load_config(const std::filesystem::path& path);
BenchConfig parse_config(std::string_view text);

/// num_starts points drawn uniformly from the problem's init box with a
/// SplitMix64 stream seeded by `seed`, start-major, coordinate-minor.
std::vector<std::vector<double>> sample_starts(const ProblemSpec& problem,
                                               std::size_t num_starts, std::uint64_t seed);

struct SweepRow {
  double a = 0.0;
  double b = 0.0;
  double total_time_s = 0.0;
  double mean_iterations = 0.0;
  double median_iterations = 0.0;
  std::size_t converged_count = 0;
  std::size_t failure_count = 0;
};

struct SweepSummary {
  std::vector<SweepRow> rows;  // in pair order
  std::size_t num_starts = 0;
};

/// Called once per pair with that pair's records, before they are released.
using PairObserver =
    std::function<void(const MomentumParams&, const std::vector<RunRecord>&)>;

/// Runs every pair from the same shared starts and writes starts.csv,
/// summary.csv, runs_<a>_<b>.csv, pareto_points_<a>_<b>.csv and
/// u0_curve_<a>_<b>.csv under cfg.out_dir.
SweepSummary run_sweep(const BenchConfig& cfg, const PairObserver& observer = {});

struct DeblurConfig {
  std::size_t size = 128;
  std::uint64_t seed = 1;
  double lambda = 2e-5;
  double noise_sigma = 1e-3;
  imaging::BlurSpec blur{};
  std::vector<MomentumParams> pairs = standard_pairs();
  std::size_t iterations = 500;
  /// Length of the FISTA reference run used for the best-known objective.
  std::size_t oracle_iterations = 5000;
  std::filesystem::path out_dir = "out";
  bool write_images = true;
};

struct DeblurRow {
  double a = 0.0;
  double b = 0.0;
  double time_s = 0.0;
  std::size_t iterations = 0;
  double final_F = 0.0;
  double psnr = 0.0;
  std::vector<double> F_history;  // F(x^k), k = 1..iterations
};

struct DeblurReport {
  imaging::LipschitzEstimate lipschitz;
  double observed_psnr = 0.0;
  double F_star = 0.0;  // best objective over all pairs and the reference run
  std::vector<DeblurRow> rows;
  std::vector<double> oracle_F_history;
  std::vector<double> oracle_psnr_history;
};

/// Phantom -> blur -> noise -> l2-l1 deblurring with constant ell = L for
/// every pair. Writes deblur_summary.csv, deblur_u0.csv, deblur_info.csv and
/// (optionally) PGM images.
DeblurReport run_deblur(const DeblurConfig& cfg);

/// %.17g formatting.
std::string format_real(double v);

/// File-name tag for a pair, e.g. "0.5_0.25".
std::string pair_tag(const MomentumParams& p);

}  // namespace apgm::bench
