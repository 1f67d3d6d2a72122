#pragma once

#include "psyctl/mbti.hpp"
#include "psyctl/rational.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace psyctl::metrics {

// Pre- and post-control rate tables for one control run. Rates are percent
// rationals; opposite traits must sum to 100 within each table.
struct ControlContext {
  mbti::ControlTarget target;
  mbti::RateTable pre{};
  mbti::RateTable post{};
};

// TIE(x) = R_post(x) - R_pre(x). Signed percent.
Rational tie(const ControlContext& ctx, mbti::Trait x);

// 1 iff R_post(t) > 50% and TIE(t) > 0, both strict.
bool isr_indicator(const ControlContext& ctx, mbti::Trait t);

// Mean of isr_indicator over the targeted traits, as a percent. Each context
// must target a trait and is evaluated on its own target.
Rational isr(std::span<const ControlContext> contexts);

// Mean absolute TIE of the three non-target dimensions, measured on each
// dimension's fixed representative (E, S, T, J). Opposite traits fluctuate
// identically, so the representative choice does not matter.
Rational tse(const ControlContext& ctx);

// Mean TIE over the target personality's four traits.
Rational pie(const ControlContext& ctx);

// Mean over targeted personalities of the product of their four trait
// indicators, as a percent.
Rational pisr(std::span<const ControlContext> contexts);

// Mean of the target personality's four post-control trait rates.
Rational personality_index(const ControlContext& ctx);

// Aggregated view over a suite of contexts, keyed by each context's target.
struct MetricsReport {
  std::map<mbti::Trait, Rational> tie;
  std::map<mbti::Trait, bool> isr_indicator;
  std::optional<Rational> isr;
  std::map<mbti::Trait, Rational> tse;
  std::map<mbti::PersonalityType, Rational> pie;
  std::optional<Rational> pisr;
  std::map<mbti::PersonalityType, Rational> personality_index;
};

MetricsReport build_report(std::span<const ControlContext> contexts);

// Machine-readable serialization mirroring the TIE/ISR/PIE/PISR column shape,
// two-decimal percentages.
nlohmann::json to_json(const MetricsReport& report);

}  // namespace psyctl::metrics
