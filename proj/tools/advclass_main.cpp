// Command-line front end: solve / verify / sweep / scenario / fuzz.
// Exit codes: 0 success, 1 verification negative (verify), 2 input error,
// 3 model-assumption violation, 4 internal verification failure.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "advclass/errors.hpp"
#include "advclass/io.hpp"

namespace {

using namespace advclass;
using nlohmann::json;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot open output file: " + out_path);
  out << text;
}

std::vector<double> parse_grid(const std::string& range_spec,
                               const std::string& list_spec) {
  if (range_spec.empty() == list_spec.empty()) {
    throw InputError("provide exactly one of --grid lo:hi:step or --grid-list v1,v2,...");
  }
  std::vector<double> grid;
  if (!list_spec.empty()) {
    std::size_t start = 0;
    while (start <= list_spec.size()) {
      const std::size_t comma = list_spec.find(',', start);
      const std::string item = list_spec.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      try {
        grid.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw InputError("bad grid value: '" + item + "'");
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return grid;
  }
  const std::size_t c1 = range_spec.find(':');
  const std::size_t c2 = range_spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw InputError("--grid expects lo:hi:step");
  }
  double lo, hi, step;
  try {
    lo = std::stod(range_spec.substr(0, c1));
    hi = std::stod(range_spec.substr(c1 + 1, c2 - c1 - 1));
    step = std::stod(range_spec.substr(c2 + 1));
  } catch (const std::exception&) {
    throw InputError("--grid expects numeric lo:hi:step");
  }
  if (!(step > 0.0) || hi < lo) throw InputError("--grid needs step > 0 and hi >= lo");
  const auto count = static_cast<std::size_t>((hi - lo) / step + 1e-9) + 1;
  for (std::size_t i = 0; i < count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

int cmd_solve(const std::string& spec_path, double epsilon, double tol,
              const std::string& out_path) {
  const SpecInput input = load_spec_file(spec_path);
  const ReducedGame reduced = input.reduced();
  const EquilibriumSet eq = compute_all_ne(reduced, epsilon);
  const VerificationReport report = certify(reduced, eq, tol);
  emit(solve_document(input, reduced, eq, report).dump(2) + "\n", out_path);
  return report.passed ? 0 : 4;
}

int cmd_verify(const std::string& spec_path, const std::string& strategies_path,
               double tol, const std::string& out_path) {
  const SpecInput input = load_spec_file(spec_path);
  const ReducedGame reduced = input.reduced();
  std::ifstream in(strategies_path);
  if (!in) throw InputError("cannot open strategies file: " + strategies_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("strategies file: ") + e.what());
  }
  const StrategiesInput strategies = parse_strategies(doc, input, reduced);
  VerificationReport report;
  if (strategies.full_game) {
    const ClassifierMixture beta =
        thresholds_to_classifiers(*input.spec, reduced, strategies.beta);
    report = verify_ne(*input.spec, strategies.alpha_vectors, beta, tol);
  } else {
    report = verify_ne(reduced, strategies.alpha, strategies.beta, tol);
  }
  emit(report_to_json(report).dump(2) + "\n", out_path);
  return report.passed ? 0 : 1;
}

int cmd_sweep(const std::string& spec_path, const std::string& param_name,
              const std::string& grid_spec, const std::string& list_spec,
              double epsilon, bool as_json, const std::string& out_path) {
  const auto param = parse_sweep_parameter(param_name);
  if (!param) throw InputError("unknown sweep parameter: '" + param_name + "'");
  const SpecInput input = load_spec_file(spec_path);
  const ReducedGame base = input.reduced();
  const std::vector<double> grid = parse_grid(grid_spec, list_spec);
  const SweepResult result = sweep(base, *param, grid, epsilon);
  if (as_json) {
    emit(sweep_document(result, epsilon).dump(2) + "\n", out_path);
  } else {
    emit(sweep_csv(result), out_path);
  }
  return 0;
}

int cmd_scenario(const MultiFeatureParams& params, bool as_json,
                 const std::string& out_path) {
  const std::vector<ScenarioResult> rows = multi_feature_study(params);
  if (as_json) {
    emit(scenario_document(rows).dump(2) + "\n", out_path);
  } else {
    emit(scenario_csv(rows), out_path);
  }
  return 0;
}

int cmd_fuzz(std::uint64_t seed, std::size_t games, double tol,
             const std::string& out_path) {
  double max_value_gap = 0.0;
  double max_duality_gap = 0.0;
  double max_residual = 0.0;
  bool passed = true;
  for (std::size_t i = 0; i < games; ++i) {
    const ReducedGame g = random_reduced_game(seed + i);
    const EquilibriumSet eq = compute_all_ne(g);
    const GameMatrices m = build_matrices(g, eq.epsilon);
    const DefenderLpSolution lp = solve_defender_lp(m);
    const AttackerDualSolution dual = solve_attacker_dual(m);
    const VerificationReport rep = certify(g, eq, tol);
    max_value_gap = std::max(max_value_gap, std::abs(lp.value - eq.lp_value));
    max_duality_gap = std::max(max_duality_gap, std::abs(lp.value - dual.value));
    max_residual = std::max(
        max_residual, std::max(rep.attacker_residual, rep.defender_residual));
    passed = passed && rep.passed && std::abs(lp.value - eq.lp_value) <= 1e-7 &&
             std::abs(lp.value - dual.value) <= 1e-9;
  }
  json doc{{"tool", std::string(kToolVersion)},
           {"seed", seed},
           {"games", games},
           {"max_value_gap", max_value_gap},
           {"max_duality_gap", max_duality_gap},
           {"max_residual", max_residual},
           {"passed", passed}};
  emit(doc.dump(2) + "\n", out_path);
  return passed ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash equilibria of the adversarial classification game"};
  app.require_subcommand(1);

  std::string spec_path, strategies_path, out_path, param_name, grid_spec, list_spec;
  double epsilon = 1.0;
  double tol = 1e-9;
  bool as_json = false;
  std::uint64_t seed = 1;
  std::size_t games = 200;
  MultiFeatureParams scenario_params;

  auto* solve = app.add_subcommand("solve", "compute, classify, and verify all NE of a spec");
  solve->add_option("spec", spec_path, "spec file (JSON)")->required();
  solve->add_option("--epsilon", epsilon, "positive shift added to the cost matrix");
  solve->add_option("--tol", tol, "verification tolerance");
  solve->add_option("--out", out_path, "write the document here instead of stdout");
  solve->add_flag("--json", as_json, "force document output (already the default)");

  auto* verify = app.add_subcommand("verify", "check a strategy pair for equilibrium");
  verify->add_option("spec", spec_path, "spec file (JSON)")->required();
  verify->add_option("strategies", strategies_path, "strategies file (JSON)")->required();
  verify->add_option("--tol", tol, "verification tolerance");
  verify->add_option("--out", out_path, "write the report here instead of stdout");

  auto* sweep_cmd = app.add_subcommand("sweep", "solve across a parameter grid, emit CSV");
  sweep_cmd->add_option("spec", spec_path, "spec file (JSON)")->required();
  sweep_cmd->add_option("--param", param_name, "c_a | c_fa | c_d | p | theta0")->required();
  sweep_cmd->add_option("--grid", grid_spec, "lo:hi:step (inclusive)");
  sweep_cmd->add_option("--grid-list", list_spec, "comma-separated values");
  sweep_cmd->add_option("--epsilon", epsilon, "positive shift added to the cost matrix");
  sweep_cmd->add_option("--out", out_path, "write CSV here instead of stdout");
  sweep_cmd->add_flag("--json", as_json, "emit a JSON document instead of CSV");

  auto* scenario = app.add_subcommand("scenario", "the four two-feature study scenarios");
  scenario->add_option("--trials", scenario_params.trials, "feature-1 attack slots (N)");
  scenario->add_option("--c-a", scenario_params.reward_unit, "reward per attack");
  scenario->add_option("--c-low", scenario_params.low_bonus, "low inactive-pct bonus");
  scenario->add_option("--c-high", scenario_params.high_bonus, "high inactive-pct bonus");
  scenario->add_option("--p", scenario_params.p, "attacker prior");
  scenario->add_option("--theta0", scenario_params.theta0, "non-attacker hit rate");
  scenario->add_option("--theta-low", scenario_params.theta_low,
                       "non-attacker low inactive-pct probability");
  scenario->add_option("--c-d", scenario_params.c_d, "detection cost");
  scenario->add_option("--c-fa", scenario_params.c_fa, "false alarm cost");
  scenario->add_option("--out", out_path, "write CSV here instead of stdout");
  scenario->add_flag("--json", as_json, "emit a JSON document instead of CSV");

  auto* fuzz = app.add_subcommand("fuzz", "random games: solver vs LP oracle cross-check");
  fuzz->add_option("--seed", seed, "base RNG seed (game i uses seed+i)");
  fuzz->add_option("--games", games, "number of random games");
  fuzz->add_option("--tol", tol, "verification tolerance");
  fuzz->add_option("--out", out_path, "write the summary here instead of stdout");
  fuzz->add_flag("--json", as_json, "force document output (already the default)");

  try {
    app.parse(argc, argv);
    if (solve->parsed()) return cmd_solve(spec_path, epsilon, tol, out_path);
    if (verify->parsed()) return cmd_verify(spec_path, strategies_path, tol, out_path);
    if (sweep_cmd->parsed()) {
      return cmd_sweep(spec_path, param_name, grid_spec, list_spec, epsilon,
                       as_json, out_path);
    }
    if (scenario->parsed()) return cmd_scenario(scenario_params, as_json, out_path);
    if (fuzz->parsed()) return cmd_fuzz(seed, games, tol, out_path);
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  } catch (const advclass::ModelError& e) {
    std::cerr << "model assumption violated: " << e.what() << "\n";
    return 3;
  } catch (const advclass::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const advclass::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
