#include "advclass/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "advclass/errors.hpp"

namespace advclass {

namespace {

bool same_level(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::size_t ReducedGame::level_of(double r, double rel_tol) const {
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    if (same_level(rewards[i], r, rel_tol)) return i;
  }
  throw InputError("no reward level matches " + reward_label(r));
}

ReducedGame reduce(const GameSpec& spec, double rel_tol) {
  std::vector<std::size_t> order(spec.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (spec.reward[a] != spec.reward[b]) return spec.reward[a] < spec.reward[b];
    return spec.vectors[a].id < spec.vectors[b].id;
  });

  ReducedGame out;
  out.p = spec.p;
  out.c_d = spec.c_d;
  out.c_fa = spec.c_fa;
  for (std::size_t idx : order) {
    if (out.rewards.empty() ||
        !same_level(out.rewards.back(), spec.reward[idx], rel_tol)) {
      out.rewards.push_back(spec.reward[idx]);
      out.noise.push_back(0.0);
      out.sources.emplace_back();
    }
    out.noise.back() += spec.noise[idx];
    out.sources.back().push_back({spec.vectors[idx].id, spec.noise[idx]});
  }
  return out;
}

std::vector<double> profile_from_thresholds(const ReducedGame& reduced,
                                            std::span<const double> beta) {
  const std::size_t n = reduced.size();
  if (beta.size() != n + 1) {
    throw InputError("threshold strategy needs |V^R|+1 weights");
  }
  std::vector<double> pd(n, 0.0);
  double cum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cum += beta[i];
    pd[i] = std::min(cum, 1.0);
  }
  return pd;
}

ClassifierMixture mixture_from_profile(const GameSpec& spec,
                                       std::span<const double> target) {
  if (target.size() != spec.size()) {
    throw InputError("detection profile must have one entry per attack vector");
  }
  for (double f : target) {
    if (!(f >= 0.0) || f > 1.0 || !std::isfinite(f)) {
      throw InputError("detection profile values must lie in [0,1]");
    }
  }
  std::vector<std::size_t> order(spec.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return target[a] < target[b]; });

  std::vector<Classifier> classifiers;
  std::vector<double> weights;
  double assigned = 0.0;  // running f value covered so far
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const double w = target[order[pos]] - assigned;
    if (w > 0.0) {
      std::vector<std::string> ids;
      for (std::size_t q = pos; q < order.size(); ++q) {
        ids.push_back(spec.vectors[order[q]].id);
      }
      classifiers.push_back(make_classifier(std::move(ids)));
      weights.push_back(w);
      assigned = target[order[pos]];
    }
  }
  const double remainder = 1.0 - assigned;
  if (remainder > 0.0 || classifiers.empty()) {
    classifiers.push_back(make_classifier({}));
    weights.push_back(std::max(remainder, 0.0));
  }
  return make_classifier_mixture(std::move(classifiers), std::move(weights));
}

MixedStrategy expand_alpha(const ReducedGame& reduced,
                           std::span<const double> alpha_r,
                           std::span<const double> pd_levels) {
  const std::size_t n = reduced.size();
  if (alpha_r.size() != n || pd_levels.size() != n) {
    throw InputError("expand_alpha: alpha and profile must be aligned with the reward levels");
  }
  check_probability_vector(alpha_r, "expand_alpha: alpha");
  const double pinned = reduced.false_alarm_factor() / reduced.c_d;

  std::vector<std::string> labels;
  std::vector<double> weights;
  for (std::size_t i = 0; i < n; ++i) {
    const bool boundary = pd_levels[i] <= kProbTol || pd_levels[i] >= 1.0 - kProbTol;
    if (boundary) {
      // Any split summing to the level mass is valid here; use the
      // P_N-proportional member for determinism and continuity with the
      // interior rule. A zero-noise level keeps everything on its first vector.
      const double level_noise = reduced.noise[i];
      double assigned = 0.0;
      for (std::size_t j = 0; j < reduced.sources[i].size(); ++j) {
        const auto& src = reduced.sources[i][j];
        double w;
        if (level_noise > 0.0) {
          w = alpha_r[i] * (src.noise / level_noise);
        } else {
          w = (j == 0) ? alpha_r[i] : 0.0;
        }
        labels.push_back(src.id);
        weights.push_back(w);
        assigned += w;
      }
      (void)assigned;
    } else {
      double level_sum = 0.0;
      for (const auto& src : reduced.sources[i]) {
        const double w = pinned * src.noise;
        labels.push_back(src.id);
        weights.push_back(w);
        level_sum += w;
      }
      if (std::abs(level_sum - alpha_r[i]) > 1e-10) {
        throw InputError(
            "expand_alpha: level " + reward_label(reduced.rewards[i]) +
            " has interior detection probability but mass " + std::to_string(alpha_r[i]) +
            " != pinned sum " + std::to_string(level_sum) +
            "; the input is not an equilibrium of the reduced game");
      }
    }
  }
  return make_mixed_strategy(std::move(labels), std::move(weights));
}

MixedStrategy reward_strategy(const ReducedGame& reduced,
                              std::span<const double> alpha) {
  if (alpha.size() != reduced.size()) {
    throw InputError("reward strategy needs |V^R| weights");
  }
  std::vector<std::string> labels;
  labels.reserve(alpha.size());
  for (double r : reduced.rewards) labels.push_back(reward_label(r));
  return make_mixed_strategy(std::move(labels),
                             std::vector<double>(alpha.begin(), alpha.end()));
}

MixedStrategy threshold_strategy(const ReducedGame& reduced,
                                 std::span<const double> beta) {
  if (beta.size() != reduced.size() + 1) {
    throw InputError("threshold strategy needs |V^R|+1 weights");
  }
  std::vector<std::string> labels;
  labels.reserve(beta.size());
  for (double r : reduced.rewards) labels.push_back(reward_label(r));
  labels.push_back(kNeverLabel);
  return make_mixed_strategy(std::move(labels),
                             std::vector<double>(beta.begin(), beta.end()));
}

}  // namespace advclass
