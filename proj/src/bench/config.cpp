#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "apgm/bench/bench.hpp"

namespace apgm::bench {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_plain_real(std::string_view text, std::string_view key) {
  const std::string buf(trim(text));
  if (buf.empty()) throw ConfigError("invalid value for '" + std::string(key) + "': empty");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError("invalid value for '" + std::string(key) + "': '" + buf + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view key) {
  const std::string buf(trim(text));
  if (buf.empty() || buf.front() == '-') {
    throw ConfigError("invalid value for '" + std::string(key) + "': '" + buf + "'");
  }
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(buf.c_str(), &end, 10);
  if (end != buf.c_str() + buf.size() || errno == ERANGE) {
    throw ConfigError("invalid value for '" + std::string(key) + "': '" + buf + "'");
  }
  return v;
}

}  // namespace

double parse_real(std::string_view text, std::string_view key) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_plain_real(text, key);
  const double num = parse_plain_real(text.substr(0, slash), key);
  const double den = parse_plain_real(text.substr(slash + 1), key);
  if (den == 0.0) throw ConfigError("invalid value for '" + std::string(key) + "': zero denominator");
  return num / den;
}

std::vector<MomentumParams> parse_pairs(std::string_view text) {
  std::vector<MomentumParams> pairs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find(';', pos);
    const auto item = trim(text.substr(pos, next == std::string_view::npos ? text.npos : next - pos));
    if (!item.empty()) {
      const auto comma = item.find(',');
      if (comma == std::string_view::npos) {
        throw ConfigError("invalid value for 'pairs': '" + std::string(item) +
                          "' is not an a,b tuple");
      }
      const double a = parse_real(item.substr(0, comma), "pairs");
      const double b = parse_real(item.substr(comma + 1), "pairs");
      if (!MomentumParams::is_valid(a, b)) {
        throw ConfigError("invalid value for 'pairs': (" + std::string(item) +
                          ") needs 0 <= a < 1 and a^2/4 <= b <= 1/4");
      }
      pairs.emplace_back(a, b);
    }
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (pairs.empty()) throw ConfigError("invalid value for 'pairs': empty list");
  return pairs;
}

void apply_setting(BenchConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "problem") {
    try {
      parse_problem_name(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("invalid value for 'problem': " + std::string(e.what()));
    }
    cfg.problem = std::string(value);
  } else if (key == "n") {
    cfg.n = parse_unsigned(value, key);
  } else if (key == "num_starts") {
    cfg.num_starts = parse_unsigned(value, key);
  } else if (key == "seed") {
    cfg.seed = parse_unsigned(value, key);
  } else if (key == "eps") {
    cfg.eps = parse_real(value, key);
  } else if (key == "max_iterations") {
    cfg.max_iterations = parse_unsigned(value, key);
  } else if (key == "out_dir") {
    if (value.empty()) throw ConfigError("invalid value for 'out_dir': empty");
    cfg.out_dir = std::string(value);
  } else if (key == "pairs") {
    cfg.pairs = parse_pairs(value);
  } else if (key == "history_stride") {
    cfg.history_stride = parse_unsigned(value, key);
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

void BenchConfig::validate() const {
  if (n == 0) throw ConfigError("invalid value for 'n': must be >= 1");
  if (num_starts == 0) throw ConfigError("invalid value for 'num_starts': must be >= 1");
  if (!(eps > 0.0)) throw ConfigError("invalid value for 'eps': must be > 0");
  if (history_stride == 0) throw ConfigError("invalid value for 'history_stride': must be >= 1");
  if (pairs.empty()) throw ConfigError("invalid value for 'pairs': empty list");
  try {
    parse_problem_name(problem);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("invalid value for 'problem': " + std::string(e.what()));
  }
}

BenchConfig parse_config(std::string_view text) {
  BenchConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing key");
    try {
      apply_setting(cfg, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

BenchConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace apgm::bench
