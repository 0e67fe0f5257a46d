// decon: experiment driver for deconstructed-domain solves.
//
//   decon converge <config>     convergence table
//   decon probe <config>        locking probe
//   decon modes <config>        constrained eigenvalues
//   decon constraints <config>  coupling rows
//   decon solve <config>        solution values
//   decon penalty <config>      penalty-coupling error sweep
//
// Exit codes: 0 success, 1 config error, 2 solver failure.

#include <fstream>
#include <utility>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "decon/error.hpp"
#include "decon/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigFailure = 1;
constexpr int kSolverFailure = 2;

void emit(const decon::ExperimentConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw decon::ConfigError("cannot open output '" + cfg.output + "'");
  out << text;
}

template <class Rows>
bool all_ok(const Rows& rows) {
  for (const auto& r : rows)
    if (r.status != "ok") return false;
  return true;
}

int run(const std::string& command, const std::string& path) {
  const decon::ExperimentConfig cfg = decon::read_config_file(path);
  if (command == "converge") {
    auto rows = decon::run_convergence(cfg);
    emit(cfg, decon::convergence_csv(rows));
    return all_ok(rows) ? kOk : kSolverFailure;
  }
  if (command == "probe") {
    auto rows = decon::locking_probe(cfg);
    emit(cfg, decon::probe_csv(rows));
    return all_ok(rows) ? kOk : kSolverFailure;
  }
  if (command == "modes") {
    emit(cfg, decon::modes_csv(cfg));
  } else if (command == "constraints") {
    emit(cfg, decon::constraints_csv(cfg));
  } else if (command == "solve") {
    emit(cfg, decon::solution_csv(cfg));
  } else if (command == "penalty") {
    emit(cfg, decon::penalty_csv(cfg));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solvers on deconstructed (overlapping multi-mesh) domains"};
  app.require_subcommand(1);

  std::string config_path;
  const std::pair<const char*, const char*> commands[] = {
      {"converge", "L-infinity error and observed order per resolution"},
      {"probe", "overlap linear-fit residual and derivative jump per resolution"},
      {"modes", "smallest constrained eigenvalues at the finest resolution"},
      {"constraints", "coupling rows at the finest resolution"},
      {"solve", "solution values at the finest resolution"},
      {"penalty", "error of penalty coupling for each configured weight"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", config_path, "experiment config file")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, config_path);
  } catch (const decon::SolverError& e) {
    std::cerr << "decon: solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const decon::ConfigError& e) {
    std::cerr << "decon: config error: " << e.what() << '\n';
  } catch (const decon::ParseError& e) {
    std::cerr << "decon: mesh parse error: " << e.what() << '\n';
  } catch (const decon::Error& e) {
    std::cerr << "decon: " << e.what() << '\n';
  }
  return kConfigFailure;
}
