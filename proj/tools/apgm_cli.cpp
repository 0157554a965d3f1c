#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "apgm/bench/bench.hpp"
#include "apgm/momentum.hpp"
#include "apgm/subproblem.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

using apgm::bench::ConfigError;

struct BenchFlags {
  std::string config;
  std::optional<std::string> problem, n, num_starts, seed, eps, max_iters, pairs, out_dir;
};

int run_bench(const BenchFlags& f) {
  auto cfg = f.config.empty() ? apgm::bench::BenchConfig{} : apgm::bench::load_config(f.config);
  const std::pair<const char*, const std::optional<std::string>*> overrides[] = {
      {"problem", &f.problem}, {"n", &f.n},     {"num_starts", &f.num_starts},
      {"seed", &f.seed},       {"eps", &f.eps}, {"max_iterations", &f.max_iters},
      {"pairs", &f.pairs},     {"out_dir", &f.out_dir},
  };
  for (const auto& [key, value] : overrides) {
    if (*value) apgm::bench::apply_setting(cfg, key, **value);
  }
  cfg.validate();

  const auto summary = apgm::bench::run_sweep(cfg);
  std::size_t failures = 0;
  for (const auto& row : summary.rows) {
    std::printf("a=%-9.6g b=%-9.6g converged=%zu/%zu mean_iters=%.1f median_iters=%.1f time=%.3fs\n",
                row.a, row.b, row.converged_count, summary.num_starts, row.mean_iterations,
                row.median_iterations, row.total_time_s);
    failures += row.failure_count;
  }
  if (failures > 0) {
    std::fprintf(stderr, "error: %zu run(s) ended in a subproblem failure\n", failures);
    return kExitSolver;
  }
  return 0;
}

struct DeblurFlags {
  std::size_t size = 128;
  std::uint64_t seed = 1;
  double lambda = 2e-5;
  std::size_t iters = 500;
  std::size_t oracle_iters = 5000;
  std::string out_dir = "out";
  std::optional<std::string> pairs;
  bool no_images = false;
};

int run_deblur(const DeblurFlags& f) {
  apgm::bench::DeblurConfig cfg;
  cfg.size = f.size;
  cfg.seed = f.seed;
  cfg.lambda = f.lambda;
  cfg.iterations = f.iters;
  cfg.oracle_iterations = f.oracle_iters;
  cfg.out_dir = f.out_dir;
  cfg.write_images = !f.no_images;
  if (f.pairs) cfg.pairs = apgm::bench::parse_pairs(*f.pairs);

  const auto report = apgm::bench::run_deblur(cfg);
  std::printf("L=%.17g observed_psnr=%.3f F_star=%.17g\n", report.lipschitz.value(),
              report.observed_psnr, report.F_star);
  for (const auto& row : report.rows) {
    std::printf("a=%-9.6g b=%-9.6g iters=%zu F=%.10g psnr=%.3f time=%.3fs\n", row.a, row.b,
                row.iterations, row.final_F, row.psnr, row.time_s);
  }
  return 0;
}

struct TableFlags {
  std::string a = "0";
  std::string b = "0.25";
  std::size_t k_max = 10;
};

int run_table(const TableFlags& f) {
  const double a = apgm::bench::parse_real(f.a, "a");
  const double b = apgm::bench::parse_real(f.b, "b");
  if (!apgm::MomentumParams::is_valid(a, b)) {
    throw ConfigError("invalid momentum pair: needs 0 <= a < 1 and a^2/4 <= b <= 1/4");
  }
  if (f.k_max == 0) throw ConfigError("invalid value for 'k-max': must be >= 1");
  std::printf("k,t,gamma\n");
  for (const auto& row : apgm::momentum_table(apgm::MomentumParams(a, b), f.k_max)) {
    const auto t = apgm::bench::format_real(static_cast<double>(row.t));
    const auto gamma = apgm::bench::format_real(static_cast<double>(row.gamma));
    std::printf("%zu,%s,%s\n", row.k, t.c_str(), gamma.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accelerated proximal gradient benchmarks for multi-objective problems"};
  app.require_subcommand(1);

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Multistart sweep over momentum pairs");
  bench_cmd->add_option("--config", bench.config, "key = value config file");
  bench_cmd->add_option("--problem", bench.problem, "JOS1, JOS1_L1, FDS or FDS_CON");
  bench_cmd->add_option("--n", bench.n, "Dimension");
  bench_cmd->add_option("--num-starts", bench.num_starts, "Number of shared random starts");
  bench_cmd->add_option("--seed", bench.seed, "Seed for the start points");
  bench_cmd->add_option("--eps", bench.eps, "Stopping tolerance");
  bench_cmd->add_option("--max-iters", bench.max_iters, "Iteration cap per run");
  bench_cmd->add_option("--pairs", bench.pairs, "Momentum pairs as \"a,b;a,b\"");
  bench_cmd->add_option("--out-dir", bench.out_dir, "Output directory");

  DeblurFlags deblur;
  auto* deblur_cmd = app.add_subcommand("deblur", "Wavelet l1 deblurring of a synthetic phantom");
  deblur_cmd->add_option("--size", deblur.size, "Image side (power of two)")->capture_default_str();
  deblur_cmd->add_option("--seed", deblur.seed, "Noise seed")->capture_default_str();
  deblur_cmd->add_option("--lambda", deblur.lambda, "l1 weight")->capture_default_str();
  deblur_cmd->add_option("--iters", deblur.iters, "Iterations per pair")->capture_default_str();
  deblur_cmd->add_option("--oracle-iters", deblur.oracle_iters, "Reference FISTA run length")
      ->capture_default_str();
  deblur_cmd->add_option("--pairs", deblur.pairs, "Momentum pairs as \"a,b;a,b\"");
  deblur_cmd->add_option("--out-dir", deblur.out_dir, "Output directory")->capture_default_str();
  deblur_cmd->add_flag("--no-images", deblur.no_images, "Skip PGM output");

  TableFlags table;
  auto* table_cmd = app.add_subcommand("momentum-table", "Print k,t,gamma as CSV");
  table_cmd->add_option("--a", table.a, "Momentum a (fractions allowed)")->capture_default_str();
  table_cmd->add_option("--b", table.b, "Momentum b (fractions allowed)")->capture_default_str();
  table_cmd->add_option("--k-max", table.k_max, "Last k")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*bench_cmd) return run_bench(bench);
    if (*deblur_cmd) return run_deblur(deblur);
    return run_table(table);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const apgm::SubproblemFailure& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
}
