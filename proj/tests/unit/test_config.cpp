#include <string>

#include <gtest/gtest.h>

#include "decon/config.hpp"
#include "decon/error.hpp"

using namespace decon;

TEST(ParseConfig, Defaults) {
  const auto cfg = parse_config("");
  EXPECT_EQ(cfg.scenario, "seg1d_poisson");
  EXPECT_EQ(cfg.coupling, CouplingMode::boundary_only);
  EXPECT_EQ(cfg.resolutions, (std::vector<int>{20, 40, 80, 160}));
  EXPECT_FALSE(cfg.source_set);
  EXPECT_TRUE(cfg.output.empty());
}

TEST(ParseConfig, AllKeys) {
  const auto cfg = parse_config(
      "# experiment\n"
      "scenario = custom\n"
      "coupling = boundary_only_thinned   # trailing comment\n"
      "bilaplace_coupling = value_only\n"
      "quadrature = monte_carlo\n"
      "quadrature_samples = 25\n"
      "quadrature_seed = 7\n"
      "resolutions = 3, 5 9\n"
      "source = -2.5\n"
      "dt = 0.01\n"
      "penalty_weights = 0.1 1 10\n"
      "modes = 4\n"
      "meshes = a.dmesh b.dmesh\n"
      "dirichlet_value = 1.5\n"
      "dirichlet_gradient = 1 0\n"
      "output = out.csv\n");
  EXPECT_EQ(cfg.scenario, "custom");
  EXPECT_EQ(cfg.coupling, CouplingMode::boundary_only_thinned);
  EXPECT_EQ(cfg.bilaplace_coupling, BilaplaceCoupling::value_only);
  EXPECT_EQ(cfg.quadrature.scheme, QuadratureSpec::Scheme::monte_carlo);
  EXPECT_EQ(cfg.quadrature.samples_per_element, 25);
  EXPECT_EQ(cfg.quadrature.seed, 7u);
  EXPECT_EQ(cfg.resolutions, (std::vector<int>{3, 5, 9}));
  EXPECT_DOUBLE_EQ(cfg.source, -2.5);
  EXPECT_TRUE(cfg.source_set);
  EXPECT_DOUBLE_EQ(cfg.dt, 0.01);
  EXPECT_EQ(cfg.penalty_weights, (std::vector<double>{0.1, 1, 10}));
  EXPECT_EQ(cfg.modes, 4);
  EXPECT_EQ(cfg.meshes, (std::vector<std::string>{"a.dmesh", "b.dmesh"}));
  EXPECT_DOUBLE_EQ(cfg.dirichlet_value, 1.5);
  EXPECT_EQ(cfg.dirichlet_gradient, (std::vector<double>{1, 0}));
  EXPECT_EQ(cfg.output, "out.csv");
}

TEST(ParseConfig, SymmetricQuadrature) {
  const auto cfg = parse_config("quadrature = symmetric_fixed_order\nquadrature_points = 4\n");
  EXPECT_EQ(cfg.quadrature.scheme, QuadratureSpec::Scheme::symmetric_fixed_order);
  EXPECT_EQ(cfg.quadrature.points, 4);
}

TEST(ParseConfig, ResolutionInvariant) {
  EXPECT_THROW(parse_config("resolutions = 40 20\n"), ConfigError);
  EXPECT_THROW(parse_config("resolutions = 20 20\n"), ConfigError);
  EXPECT_THROW(parse_config("resolutions = 20\n"), ConfigError);
}

TEST(ParseConfig, ErrorsNameTheLine) {
  try {
    parse_config("scenario = seg1d_poisson\n\nbogus = 1\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config("scenario = moon\n"), ConfigError);
  EXPECT_THROW(parse_config("coupling = loose\n"), ConfigError);
  EXPECT_THROW(parse_config("modes = many\n"), ConfigError);
  EXPECT_THROW(parse_config("quadrature = simpson\n"), ConfigError);
  EXPECT_THROW(parse_config("quadrature = symmetric_fixed_order\nquadrature_points = 3\n"), ConfigError);
  EXPECT_THROW(parse_config("no equals sign\n"), ConfigError);
  EXPECT_THROW(parse_config("scenario = custom\n"), ConfigError);
}

TEST(ReadConfigFile, MissingFile) {
  EXPECT_THROW(read_config_file("/nonexistent/decon.cfg"), ConfigError);
}
