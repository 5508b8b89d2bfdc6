#include "advclass/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "advclass/errors.hpp"

namespace advclass {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) {
    throw InputError(std::string("field '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

std::optional<double> parse_double(std::string_view s) {
  double value = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

ReducedGame SpecInput::reduced() const {
  if (spec) return reduce(*spec);
  return binomial_game(binomial->noise, binomial->p, binomial->c_d,
                       binomial->c_fa);
}

SpecInput parse_spec_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("spec document must be a JSON object");
  const bool has_vectors = j.contains("vectors");
  const bool has_binomial = j.contains("binomial");
  if (has_vectors == has_binomial) {
    throw InputError("spec document must contain exactly one of 'vectors' or 'binomial'");
  }
  SpecInput out;
  out.echo = j;
  const double p = require_number(j, "p");
  const double c_d = require_number(j, "c_d");
  const double c_fa = require_number(j, "c_fa");

  if (has_binomial) {
    const json& b = j.at("binomial");
    if (!b.is_object()) throw InputError("'binomial' must be an object");
    BinomialGameFile file;
    const double trials = require_number(b, "N");
    if (trials < 1 || trials != std::floor(trials)) {
      throw InputError("binomial field 'N' must be a positive integer");
    }
    file.noise.trials = static_cast<int>(trials);
    file.noise.theta0 = require_number(b, "theta0");
    file.noise.reward_unit = require_number(b, "c_a");
    file.p = p;
    file.c_d = c_d;
    file.c_fa = c_fa;
    // Validate eagerly so parse errors surface before any solving.
    binomial_game(file.noise, p, c_d, c_fa);
    out.binomial = file;
    return out;
  }

  const json& vecs = j.at("vectors");
  if (!vecs.is_array() || vecs.empty()) {
    throw InputError("'vectors' must be a non-empty array");
  }
  std::vector<AttackVector> vectors;
  std::vector<double> reward;
  std::vector<double> noise;
  std::size_t pos = 0;
  for (const json& v : vecs) {
    if (!v.is_object()) {
      throw InputError("vectors[" + std::to_string(pos) + "] must be an object");
    }
    AttackVector av;
    if (!v.contains("id") || !v.at("id").is_string()) {
      throw InputError("vectors[" + std::to_string(pos) + "] needs a string 'id'");
    }
    av.id = v.at("id").get<std::string>();
    if (v.contains("features")) {
      if (!v.at("features").is_array()) {
        throw InputError("vector '" + av.id + "': 'features' must be an array of integers");
      }
      for (const json& f : v.at("features")) {
        if (!f.is_number_integer()) {
          throw InputError("vector '" + av.id + "': features must be integers");
        }
        av.features.push_back(f.get<int>());
      }
    } else {
      av.features = {static_cast<int>(pos)};  // positional default
    }
    vectors.push_back(std::move(av));
    reward.push_back(require_number(v, "reward"));
    noise.push_back(require_number(v, "noise"));
    ++pos;
  }
  out.spec = make_game_spec(std::move(vectors), std::move(reward),
                            std::move(noise), p, c_d, c_fa);
  return out;
}

SpecInput load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open spec file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("spec file " + path + ": " + e.what());
  }
  return parse_spec_json(j);
}

ClassifierMixture thresholds_to_classifiers(const GameSpec& spec,
                                            const ReducedGame& reduced,
                                            std::span<const double> beta) {
  if (beta.size() != reduced.size() + 1) {
    throw InputError("threshold strategy needs |V^R|+1 weights");
  }
  std::vector<Classifier> classifiers;
  std::vector<double> weights;
  for (std::size_t j = 0; j <= reduced.size(); ++j) {
    std::vector<std::string> ids;
    if (j < reduced.size()) {
      for (std::size_t i = 0; i < spec.size(); ++i) {
        if (reduced.level_of(spec.reward[i]) >= j) ids.push_back(spec.vectors[i].id);
      }
    }
    classifiers.push_back(make_classifier(std::move(ids)));
    weights.push_back(beta[j]);
  }
  return make_classifier_mixture(std::move(classifiers), std::move(weights));
}

StrategiesInput parse_strategies(const nlohmann::json& j, const SpecInput& input,
                                 const ReducedGame& reduced) {
  if (!j.is_object()) throw InputError("strategies document must be a JSON object");
  const json* alpha_obj = nullptr;
  if (j.contains("alpha_reduced")) alpha_obj = &j.at("alpha_reduced");
  else if (j.contains("alpha")) alpha_obj = &j.at("alpha");
  if (alpha_obj == nullptr || !alpha_obj->is_object()) {
    throw InputError("strategies document needs an 'alpha' (or 'alpha_reduced') object");
  }
  if (!j.contains("beta") || !j.at("beta").is_object()) {
    throw InputError("strategies document needs a 'beta' object");
  }

  StrategiesInput out;
  const std::size_t n = reduced.size();
  out.beta.assign(n + 1, 0.0);
  for (const auto& [key, value] : j.at("beta").items()) {
    if (!value.is_number()) throw InputError("beta['" + key + "'] must be a number");
    if (key == kNeverLabel) {
      out.beta[n] += value.get<double>();
      continue;
    }
    const auto r = parse_double(key);
    if (!r) throw InputError("beta key '" + key + "' is neither a reward value nor 'never'");
    out.beta[reduced.level_of(*r)] += value.get<double>();
  }
  check_probability_vector(out.beta, "beta");

  // Alpha keys: vector ids => full-game check; reward values => reduced check.
  bool all_ids = input.has_vectors();
  if (all_ids) {
    for (const auto& [key, value] : alpha_obj->items()) {
      (void)value;
      bool known = false;
      for (const auto& v : input.spec->vectors) {
        if (v.id == key) known = true;
      }
      if (!known) {
        all_ids = false;
        break;
      }
    }
  }
  if (all_ids && !j.contains("alpha_reduced")) {
    std::vector<std::string> labels;
    std::vector<double> weights;
    for (const auto& [key, value] : alpha_obj->items()) {
      if (!value.is_number()) throw InputError("alpha['" + key + "'] must be a number");
      labels.push_back(key);
      weights.push_back(value.get<double>());
    }
    out.full_game = true;
    out.alpha_vectors = make_mixed_strategy(std::move(labels), std::move(weights));
    return out;
  }

  out.alpha.assign(n, 0.0);
  for (const auto& [key, value] : alpha_obj->items()) {
    if (!value.is_number()) throw InputError("alpha['" + key + "'] must be a number");
    const auto r = parse_double(key);
    if (!r) throw InputError("alpha key '" + key + "' is not a reward value");
    out.alpha[reduced.level_of(*r)] += value.get<double>();
  }
  check_probability_vector(out.alpha, "alpha");
  return out;
}

nlohmann::json strategy_to_json(const MixedStrategy& s) {
  json out = json::object();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.weights[i] != 0.0) out[s.labels[i]] = s.weights[i];
  }
  return out;
}

nlohmann::json report_to_json(const VerificationReport& r) {
  return json{{"attacker_residual", r.attacker_residual},
              {"defender_residual", r.defender_residual},
              {"oracle_value_gap", r.oracle_value_gap},
              {"tol", r.tol},
              {"passed", r.passed}};
}

nlohmann::json equilibrium_to_json(const ReducedGame& reduced,
                                   const EquilibriumSet& eq) {
  json out;
  out["case"] = std::string(to_string(eq.case_tag));
  out["k"] = eq.k;
  out["epsilon"] = eq.epsilon;
  out["defender_value"] = eq.defender_value;
  out["attacker_payoff"] = json{{"lo", eq.attacker_lo}, {"hi", eq.attacker_hi}};
  json betas = json::array();
  for (const auto& b : eq.beta_vertices) {
    betas.push_back(strategy_to_json(threshold_strategy(reduced, b)));
  }
  out["beta_vertices"] = betas;
  json alphas = json::array();
  for (const auto& a : eq.alpha_vertices) {
    alphas.push_back(strategy_to_json(reward_strategy(reduced, a)));
  }
  out["alpha_vertices"] = alphas;
  try {
    const std::vector<double> pd =
        profile_from_thresholds(reduced, eq.beta_vertices.back());
    out["alpha_vectors"] =
        strategy_to_json(expand_alpha(reduced, eq.representative_alpha(), pd));
  } catch (const InputError&) {
    // Expansion fails only when the pair is not an equilibrium; the
    // verification block will say so.
  }
  return out;
}

nlohmann::json solve_document(const SpecInput& input, const ReducedGame& reduced,
                              const EquilibriumSet& eq,
                              const VerificationReport& report) {
  json out;
  out["tool"] = std::string(kToolVersion);
  out["input"] = input.echo;
  out["reduced"] = json{{"rewards", reduced.rewards}, {"noise", reduced.noise}};
  out["equilibrium"] = equilibrium_to_json(reduced, eq);
  out["verification"] = report_to_json(report);
  return out;
}

std::string format_csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "param,value,k,attacker_payoff_lo,attacker_payoff_hi,defender_payoff,verified\n";
  const std::string name{to_string(result.parameter)};
  for (const auto& row : result.rows) {
    out += name;
    out += ',';
    out += format_csv_double(row.value);
    if (row.ok) {
      out += ',' + std::to_string(row.k);
      out += ',' + format_csv_double(row.attacker_lo);
      out += ',' + format_csv_double(row.attacker_hi);
      out += ',' + format_csv_double(row.defender);
      out += row.verified ? ",true" : ",false";
    } else {
      out += ",,,,,error";
    }
    out += '\n';
  }
  return out;
}

nlohmann::json sweep_document(const SweepResult& result, double epsilon) {
  json rows = json::array();
  for (const auto& row : result.rows) {
    json r;
    r["value"] = row.value;
    if (row.ok) {
      r["k"] = row.k;
      r["attacker_payoff"] = json{{"lo", row.attacker_lo}, {"hi", row.attacker_hi}};
      r["defender_payoff"] = row.defender;
      r["verified"] = row.verified;
    } else {
      r["error"] = row.error;
    }
    rows.push_back(std::move(r));
  }
  return json{{"tool", std::string(kToolVersion)},
              {"param", std::string(to_string(result.parameter))},
              {"epsilon", epsilon},
              {"rows", rows}};
}

std::string scenario_csv(const std::vector<ScenarioResult>& rows) {
  std::string out = "scenario,defender_payoff,attacker_payoff\n";
  for (const auto& row : rows) {
    out += std::to_string(row.scenario);
    out += ',' + format_csv_double(row.defender_payoff);
    out += ',' + format_csv_double(row.attacker_payoff);
    out += '\n';
  }
  return out;
}

nlohmann::json scenario_document(const std::vector<ScenarioResult>& rows) {
  json arr = json::array();
  for (const auto& row : rows) {
    arr.push_back(json{{"scenario", row.scenario},
                       {"attacker", strategy_to_json(row.attacker)},
                       {"defender", strategy_to_json(row.defender)},
                       {"attacker_payoff", row.attacker_payoff},
                       {"defender_payoff", row.defender_payoff}});
  }
  return json{{"tool", std::string(kToolVersion)}, {"scenarios", arr}};
}

}  // namespace advclass
