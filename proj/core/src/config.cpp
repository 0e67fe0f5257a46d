#include "decon/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "decon/error.hpp"

namespace decon {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ',' || s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ',' && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

class LineParser {
 public:
  explicit LineParser(std::size_t line) : line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line_) + ": " + what);
  }

  template <typename T>
  T number(std::string_view s) const {
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail("invalid number '" + std::string(s) + "'");
    return value;
  }

  template <typename T>
  std::vector<T> numbers(std::string_view s) const {
    std::vector<T> out;
    for (auto tok : split_list(s)) out.push_back(number<T>(tok));
    return out;
  }

 private:
  std::size_t line_;
};

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::string quad_scheme = "corner_average";
  int quad_points = 10, quad_samples = 100;
  std::uint64_t quad_seed = 0;
  std::size_t scheme_line = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const LineParser p(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) p.fail("expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    try {
      if (key == "scenario") {
        cfg.scenario = std::string(value);
        static const char* known[] = {"seg1d_poisson", "seg1d_bilaplace", "annulus2d_laplace",
                                      "annulus2d_poisson", "duplicated_mesh", "halfdisk", "custom"};
        if (std::find(std::begin(known), std::end(known), cfg.scenario) == std::end(known))
          p.fail("unknown scenario '" + cfg.scenario + "'");
      } else if (key == "coupling") {
        cfg.coupling = parse_coupling_mode(value);
      } else if (key == "bilaplace_coupling") {
        cfg.bilaplace_coupling = parse_bilaplace_coupling(value);
      } else if (key == "quadrature") {
        quad_scheme = std::string(value);
        scheme_line = line_no;
      } else if (key == "quadrature_points") {
        quad_points = p.number<int>(value);
      } else if (key == "quadrature_samples") {
        quad_samples = p.number<int>(value);
      } else if (key == "quadrature_seed") {
        quad_seed = p.number<std::uint64_t>(value);
      } else if (key == "resolutions") {
        cfg.resolutions = p.numbers<int>(value);
        if (cfg.resolutions.size() < 2) p.fail("resolutions needs at least two entries");
        for (std::size_t i = 0; i < cfg.resolutions.size(); ++i) {
          if (cfg.resolutions[i] <= 0) p.fail("resolutions must be positive");
          if (i && cfg.resolutions[i] <= cfg.resolutions[i - 1]) p.fail("resolutions must be strictly increasing");
        }
      } else if (key == "source") {
        cfg.source = p.number<double>(value);
        cfg.source_set = true;
      } else if (key == "dt") {
        cfg.dt = p.number<double>(value);
        if (cfg.dt < 0.0) p.fail("dt must be non-negative");
      } else if (key == "penalty_weights") {
        cfg.penalty_weights = p.numbers<double>(value);
        for (double w : cfg.penalty_weights)
          if (!(w > 0.0)) p.fail("penalty weights must be positive");
      } else if (key == "modes") {
        cfg.modes = p.number<int>(value);
        if (cfg.modes <= 0) p.fail("modes must be positive");
      } else if (key == "meshes") {
        cfg.meshes.clear();
        for (auto tok : split_list(value)) cfg.meshes.emplace_back(tok);
      } else if (key == "dirichlet_value") {
        cfg.dirichlet_value = p.number<double>(value);
      } else if (key == "dirichlet_gradient") {
        cfg.dirichlet_gradient = p.numbers<double>(value);
      } else if (key == "output") {
        cfg.output = std::string(value);
      } else {
        p.fail("unknown key '" + std::string(key) + "'");
      }
    } catch (const InvalidArgument& e) {
      p.fail(e.what());
    }
  }

  try {
    if (quad_scheme == "corner_average") {
      cfg.quadrature = QuadratureSpec::corner_average();
    } else if (quad_scheme == "barycenter") {
      cfg.quadrature = QuadratureSpec::barycenter();
    } else if (quad_scheme == "symmetric_fixed_order") {
      cfg.quadrature = QuadratureSpec::symmetric_fixed_order(quad_points);
    } else if (quad_scheme == "monte_carlo") {
      cfg.quadrature = QuadratureSpec::monte_carlo(quad_samples, quad_seed);
    } else {
      throw InvalidArgument("unknown quadrature '" + quad_scheme + "'");
    }
  } catch (const InvalidArgument& e) {
    LineParser(scheme_line).fail(e.what());
  }

  if (cfg.scenario == "custom" && cfg.meshes.empty()) throw ConfigError("scenario custom requires meshes");
  return cfg;
}

ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace decon
