#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "advclass/experiments.hpp"
#include "advclass/oracle.hpp"

namespace advclass {

inline constexpr std::string_view kToolVersion = "advclass 1.0.0";

/// A parsed spec file: either an explicit vector list or the binomial
/// shorthand (exactly one of the two).
struct BinomialGameFile {
  BinomialNoiseSpec noise;
  double p = 0.0;
  double c_d = 0.0;
  double c_fa = 0.0;
};

struct SpecInput {
  std::optional<GameSpec> spec;
  std::optional<BinomialGameFile> binomial;
  nlohmann::json echo;

  bool has_vectors() const { return spec.has_value(); }
  ReducedGame reduced() const;
};

SpecInput parse_spec_json(const nlohmann::json& j);
SpecInput load_spec_file(const std::string& path);

/// Strategies document for `verify`: {"alpha": {...}, "beta": {...}}.
/// Alpha keys are vector ids (full-game check) or reward values (reduced
/// check); beta keys are threshold reward values plus "never".
struct StrategiesInput {
  std::vector<double> alpha;  // reduced levels; empty when full_game
  std::vector<double> beta;   // |V^R|+1 threshold weights
  bool full_game = false;
  MixedStrategy alpha_vectors;  // set when full_game
};

StrategiesInput parse_strategies(const nlohmann::json& j, const SpecInput& input,
                                 const ReducedGame& reduced);

/// Threshold columns as explicit classifiers over a spec's vectors.
ClassifierMixture thresholds_to_classifiers(const GameSpec& spec,
                                            const ReducedGame& reduced,
                                            std::span<const double> beta);

nlohmann::json strategy_to_json(const MixedStrategy& s);
nlohmann::json report_to_json(const VerificationReport& r);
nlohmann::json equilibrium_to_json(const ReducedGame& reduced,
                                   const EquilibriumSet& eq);
nlohmann::json solve_document(const SpecInput& input, const ReducedGame& reduced,
                              const EquilibriumSet& eq,
                              const VerificationReport& report);

std::string format_csv_double(double v);  // %.17g
std::string sweep_csv(const SweepResult& result);
nlohmann::json sweep_document(const SweepResult& result, double epsilon);
std::string scenario_csv(const std::vector<ScenarioResult>& rows);
nlohmann::json scenario_document(const std::vector<ScenarioResult>& rows);

}  // namespace advclass
