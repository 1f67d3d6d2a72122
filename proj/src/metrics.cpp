#include "psyctl/metrics.hpp"

#include "psyctl/errors.hpp"

namespace psyctl::metrics {

using mbti::Dimension;
using mbti::PersonalityType;
using mbti::Trait;

Rational tie(const ControlContext& ctx, Trait x) {
  return ctx.post[mbti::index(x)] - ctx.pre[mbti::index(x)];
}

bool isr_indicator(const ControlContext& ctx, Trait t) {
  return ctx.post[mbti::index(t)] > Rational(50) && tie(ctx, t) > Rational(0);
}

Rational isr(std::span<const ControlContext> contexts) {
  if (contexts.empty()) throw EmptySet("isr over zero contexts");
  long long induced = 0;
  for (const ControlContext& ctx : contexts) {
    const auto* target = std::get_if<Trait>(&ctx.target);
    if (target == nullptr) throw TargetNotTrait("isr context does not target a trait");
    if (isr_indicator(ctx, *target)) ++induced;
  }
  return Rational(induced * 100, static_cast<long long>(contexts.size()));
}

Rational tse(const ControlContext& ctx) {
  const auto* target = std::get_if<Trait>(&ctx.target);
  if (target == nullptr) throw TargetNotTrait("tse requires a trait target");
  const Dimension own = mbti::dimension_of(*target);
  Rational sum(0);
  long long others = 0;
  for (Dimension d : mbti::kAllDimensions) {
    if (d == own) continue;
    const Rational fluctuation = tie(ctx, mbti::representative(d));
    sum += fluctuation < Rational(0) ? -fluctuation : fluctuation;
    ++others;
  }
  return sum / others;
}

Rational pie(const ControlContext& ctx) {
  const auto* target = std::get_if<PersonalityType>(&ctx.target);
  if (target == nullptr) throw TargetNotPersonality("pie requires a personality target");
  Rational sum(0);
  for (Trait t : target->traits()) sum += tie(ctx, t);
  return sum / 4;
}

Rational pisr(std::span<const ControlContext> contexts) {
  if (contexts.empty()) throw EmptySet("pisr over zero contexts");
  long long induced = 0;
  for (const ControlContext& ctx : contexts) {
    const auto* target = std::get_if<PersonalityType>(&ctx.target);
    if (target == nullptr) {
      throw TargetNotPersonality("pisr context does not target a personality");
    }
    bool all_traits = true;
    for (Trait t : target->traits()) all_traits = all_traits && isr_indicator(ctx, t);
    if (all_traits) ++induced;
  }
  return Rational(induced * 100, static_cast<long long>(contexts.size()));
}

Rational personality_index(const ControlContext& ctx) {
  const auto* target = std::get_if<PersonalityType>(&ctx.target);
  if (target == nullptr) {
    throw TargetNotPersonality("personality_index requires a personality target");
  }
  Rational sum(0);
  for (Trait t : target->traits()) sum += ctx.post[mbti::index(t)];
  return sum / 4;
}

MetricsReport build_report(std::span<const ControlContext> contexts) {
  MetricsReport report;
  std::vector<ControlContext> trait_contexts;
  std::vector<ControlContext> personality_contexts;
  for (const ControlContext& ctx : contexts) {
    if (const auto* t = std::get_if<Trait>(&ctx.target)) {
      report.tie[*t] = tie(ctx, *t);
      report.isr_indicator[*t] = isr_indicator(ctx, *t);
      report.tse[*t] = tse(ctx);
      trait_contexts.push_back(ctx);
    } else {
      const auto& p = std::get<PersonalityType>(ctx.target);
      report.pie[p] = pie(ctx);
      report.personality_index[p] = personality_index(ctx);
      personality_contexts.push_back(ctx);
    }
  }
  if (!trait_contexts.empty()) report.isr = isr(trait_contexts);
  if (!personality_contexts.empty()) report.pisr = pisr(personality_contexts);
  return report;
}

nlohmann::json to_json(const MetricsReport& report) {
  nlohmann::json out;
  out["tie"] = nlohmann::json::object();
  for (const auto& [t, value] : report.tie) {
    out["tie"][std::string(1, mbti::letter(t))] = format_fixed(value, 2);
  }
  out["isr_indicator"] = nlohmann::json::object();
  for (const auto& [t, value] : report.isr_indicator) {
    out["isr_indicator"][std::string(1, mbti::letter(t))] = value ? 1 : 0;
  }
  if (report.isr) out["isr"] = format_fixed(*report.isr, 2);
  out["tse"] = nlohmann::json::object();
  for (const auto& [t, value] : report.tse) {
    out["tse"][std::string(1, mbti::letter(t))] = format_fixed(value, 2);
  }
  out["pie"] = nlohmann::json::object();
  for (const auto& [p, value] : report.pie) out["pie"][p.code()] = format_fixed(value, 2);
  if (report.pisr) out["pisr"] = format_fixed(*report.pisr, 2);
  out["personality_index"] = nlohmann::json::object();
  for (const auto& [p, value] : report.personality_index) {
    out["personality_index"][p.code()] = format_fixed(value, 2);
  }
  return out;
}

}  // namespace psyctl::metrics
