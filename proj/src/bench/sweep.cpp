#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "apgm/bench/bench.hpp"
#include "apgm/diagnostics.hpp"
#include "apgm/rng.hpp"

namespace apgm::bench {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string pair_tag(const MomentumParams& p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g_%.6g", p.a(), p.b());
  return buf;
}

std::vector<std::vector<double>> sample_starts(const ProblemSpec& problem,
                                               std::size_t num_starts, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const auto lo = problem.init_lower();
  const auto hi = problem.init_upper();
  std::vector<std::vector<double>> starts(num_starts, std::vector<double>(problem.n()));
  for (auto& x : starts) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = rng.uniform(lo[j], hi[j]);
  }
  return starts;
}

namespace {

class CsvFile {
public:
  explicit CsvFile(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error("csv write failed");
  }

private:
  std::ofstream out_;
};

std::string fmt(std::size_t v) { return std::to_string(v); }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// Objective vectors on the analytic Pareto set, where one is known.
std::vector<std::vector<double>> analytic_front(TestProblem which) {
  std::vector<std::vector<double>> front;
  if (which == TestProblem::kJos1) {
    // x = 2t * 1 gives f1 = 4 t^2, f2 = 4 (1 - t)^2 for any n.
    constexpr int kSamples = 200;
    for (int s = 0; s <= kSamples; ++s) {
      const double t = static_cast<double>(s) / kSamples;
      front.push_back({4.0 * t * t, 4.0 * (1.0 - t) * (1.0 - t)});
    }
  }
  return front;
}

void write_pair_outputs(const BenchConfig& cfg, TestProblem which, const MomentumParams& p,
                        const std::vector<RunRecord>& records) {
  const auto tag = pair_tag(p);
  const std::size_t m = records.empty() ? 0 : records.front().initial_F.size();

  {
    CsvFile runs(cfg.out_dir / ("runs_" + tag + ".csv"));
    runs.row({"start", "termination", "iterations", "final_ell", "final_residual",
              "backtracks"});
    for (std::size_t s = 0; s < records.size(); ++s) {
      const auto& r = records[s];
      runs.row({fmt(s), to_string(r.terminated), fmt(r.iterations), format_real(r.final_ell),
                format_real(r.final_residual), fmt(r.backtracks)});
    }
  }

  {
    CsvFile pareto(cfg.out_dir / ("pareto_points_" + tag + ".csv"));
    std::vector<std::string> header{"start"};
    for (std::size_t i = 0; i < m; ++i) header.push_back("F" + std::to_string(i + 1));
    pareto.row(header);
    for (std::size_t s = 0; s < records.size(); ++s) {
      if (records[s].final_F.size() != m) continue;
      std::vector<std::string> cells{fmt(s)};
      for (const double v : records[s].final_F) cells.push_back(format_real(v));
      pareto.row(cells);
    }
  }

  // u0 lower bound against this pair's converged end points plus the known
  // front; the curve reports the worst run still active at each k.
  auto refs = analytic_front(which);
  for (const auto& r : records) {
    if (r.terminated == Termination::kConverged) refs.push_back(r.final_F);
  }
  CsvFile curve(cfg.out_dir / ("u0_curve_" + tag + ".csv"));
  curve.row({"k", "u0_lower"});
  if (refs.empty()) return;
  std::map<std::size_t, double> worst;
  for (const auto& r : records) {
    for (const auto& s : merit_curve(r, refs)) {
      auto [it, inserted] = worst.emplace(s.k, s.u0_value);
      if (!inserted) it->second = std::max(it->second, s.u0_value);
    }
  }
  for (const auto& [k, u0] : worst) curve.row({fmt(k), format_real(u0)});
}

}  // namespace

SweepSummary run_sweep(const BenchConfig& cfg, const PairObserver& observer) {
  cfg.validate();
  const TestProblem which = parse_problem_name(cfg.problem);
  const ProblemSpec problem = make_problem(which, cfg.n);
  std::filesystem::create_directories(cfg.out_dir);

  const auto starts = sample_starts(problem, cfg.num_starts, cfg.seed);
  {
    CsvFile out(cfg.out_dir / "starts.csv");
    std::vector<std::string> header{"start"};
    for (std::size_t j = 0; j < problem.n(); ++j) header.push_back("x" + std::to_string(j + 1));
    out.row(header);
    for (std::size_t s = 0; s < starts.size(); ++s) {
      std::vector<std::string> cells{fmt(s)};
      for (const double v : starts[s]) cells.push_back(format_real(v));
      out.row(cells);
    }
  }

  SweepSummary summary;
  summary.num_starts = cfg.num_starts;
  for (const auto& pair : cfg.pairs) {
    SolverConfig scfg;
    scfg.params = pair;
    scfg.eps = cfg.eps;
    scfg.max_iterations = cfg.max_iterations;
    scfg.history_stride = cfg.history_stride;

    const auto records = multistart(problem, starts, scfg);

    SweepRow row;
    row.a = pair.a();
    row.b = pair.b();
    std::vector<double> iters;
    double sum_iters = 0.0;
    for (const auto& r : records) {
      row.total_time_s += r.wall_time;
      iters.push_back(static_cast<double>(r.iterations));
      sum_iters += static_cast<double>(r.iterations);
      if (r.terminated == Termination::kConverged) ++row.converged_count;
      if (r.terminated == Termination::kSubproblemFailure) ++row.failure_count;
    }
    row.mean_iterations = sum_iters / static_cast<double>(records.size());
    row.median_iterations = median(iters);
    summary.rows.push_back(row);

    write_pair_outputs(cfg, which, pair, records);
    if (observer) observer(pair, records);
  }

  CsvFile out(cfg.out_dir / "summary.csv");
  out.row({"a", "b", "mean_iterations", "median_iterations", "converged_count", "num_starts",
           "total_time_s", "machine_dependent"});
  for (const auto& r : summary.rows) {
    out.row({format_real(r.a), format_real(r.b), format_real(r.mean_iterations),
             format_real(r.median_iterations), fmt(r.converged_count), fmt(cfg.num_starts),
             format_real(r.total_time_s), "total_time_s"});
  }
  return summary;
}

DeblurReport run_deblur(const DeblurConfig& cfg) {
  using namespace imaging;
  if (!kernels::is_power_of_two(cfg.size)) {
    throw ConfigError("invalid value for 'size': must be a power of two");
  }
  if (cfg.iterations == 0) throw ConfigError("invalid value for 'iters': must be >= 1");
  if (cfg.pairs.empty()) throw ConfigError("invalid value for 'pairs': empty list");
  if (!(cfg.lambda >= 0.0)) throw ConfigError("invalid value for 'lambda': must be >= 0");

  const Image truth = make_phantom(cfg.size);
  const BlurKernel kernel = make_gaussian_kernel(cfg.blur);
  const Image observed = add_gaussian_noise(blur_apply(kernel, truth), cfg.noise_sigma, cfg.seed);
  const DeblurProblem deblur = make_deblur_problem(observed, kernel, cfg.lambda);

  if (cfg.write_images) {
    std::filesystem::create_directories(cfg.out_dir);
    write_pgm(truth, (cfg.out_dir / "truth.pgm").string());
    write_pgm(observed, (cfg.out_dir / "observed.pgm").string());
  }

  DeblurReport report;
  report.lipschitz = deblur.lipschitz;
  report.observed_psnr = psnr(truth, observed);

  auto run = [&](const MomentumParams& p, std::size_t iterations) {
    SolverConfig scfg;
    scfg.params = p;
    scfg.use_known_L = true;
    scfg.eps = std::numeric_limits<double>::min();  // fixed iteration budget
    scfg.max_iterations = iterations;
    return solve(deblur.problem, deblur.x0, scfg);
  };
  auto reconstruct = [&](const std::vector<double>& coeffs) {
    return haar_synthesis(Image(cfg.size, cfg.size, coeffs));
  };

  double best = kInf;
  for (const auto& p : cfg.pairs) {
    const auto rec = run(p, cfg.iterations);
    if (rec.terminated == Termination::kSubproblemFailure) {
      throw SubproblemFailure("deblur run failed: " + rec.failure, 0.0);
    }
    DeblurRow row;
    row.a = p.a();
    row.b = p.b();
    row.time_s = rec.wall_time;
    row.iterations = rec.iterations;
    row.final_F = rec.final_F[0];
    const Image recon = reconstruct(rec.final_x);
    row.psnr = psnr(truth, recon);
    for (const auto& h : rec.history) {
      row.F_history.push_back(h.F[0]);
      best = std::min(best, h.F[0]);
    }
    if (cfg.write_images) {
      write_pgm(recon, (cfg.out_dir / ("recon_" + pair_tag(p) + ".pgm")).string());
    }
    report.rows.push_back(std::move(row));
  }

  if (cfg.oracle_iterations > 0) {
    // Longer FISTA run; only sharpens F_star.
    SolverConfig scfg;
    scfg.params = MomentumParams::fista();
    scfg.use_known_L = true;
    scfg.eps = std::numeric_limits<double>::min();
    scfg.max_iterations = cfg.oracle_iterations;
    const auto rec = solve(deblur.problem, deblur.x0, scfg);
    for (const auto& h : rec.history) {
      report.oracle_F_history.push_back(h.F[0]);
      best = std::min(best, h.F[0]);
    }
    report.oracle_psnr_history.push_back(psnr(truth, reconstruct(rec.final_x)));
  }
  report.F_star = best;

  std::filesystem::create_directories(cfg.out_dir);
  {
    CsvFile out(cfg.out_dir / "deblur_summary.csv");
    out.row({"a", "b", "iterations", "final_F", "psnr", "time_s", "machine_dependent"});
    for (const auto& r : report.rows) {
      out.row({format_real(r.a), format_real(r.b), fmt(r.iterations), format_real(r.final_F),
               format_real(r.psnr), format_real(r.time_s), "time_s"});
    }
  }
  {
    CsvFile out(cfg.out_dir / "deblur_u0.csv");
    out.row({"a", "b", "k", "u0"});
    for (const auto& r : report.rows) {
      for (std::size_t k = 0; k < r.F_history.size(); ++k) {
        out.row({format_real(r.a), format_real(r.b), fmt(k + 1),
                 format_real(r.F_history[k] - report.F_star)});
      }
    }
  }
  {
    CsvFile out(cfg.out_dir / "deblur_info.csv");
    out.row({"key", "value"});
    out.row({"lipschitz_spectral", format_real(report.lipschitz.spectral)});
    out.row({"lipschitz_power", format_real(report.lipschitz.power)});
    out.row({"observed_psnr", format_real(report.observed_psnr)});
    out.row({"F_star", format_real(report.F_star)});
    out.row({"ell", format_real(report.lipschitz.value())});
  }
  return report;
}

}  // namespace apgm::bench
