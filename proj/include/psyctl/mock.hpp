#pragma once

#include "psyctl/assessment.hpp"
#include "psyctl/client.hpp"
#include "psyctl/mbti.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace psyctl::client {

// Response style mix; proportions are weights and get normalized.
struct MockStyle {
  double bare_digit = 1.0;
  double verbose = 0.0;
  double refusal = 0.0;
};

// Deterministic fake respondent: agreement with an item's trait_of_a is
// sampled per bias, fully determined by (seed, item.id, variant).
struct MockPersona {
  std::map<mbti::Trait, double> bias;  // probability of agreeing with that trait's option
  std::uint64_t seed = 0;
  MockStyle style;
  double neutral_rate = 0.0;             // probability of answering 3 outright
  std::optional<int> constant_value;     // echo this digit for every item when set

  double bias_for(mbti::Trait t) const;
};

// Samples agreement per bias, maps it to a Likert value (agree -> {1,2},
// disagree -> {4,5}, neutral -> 3), and renders it through the style
// templates. Pure function of (persona, item.id, variant).
std::string mock_respond(const MockPersona& persona, const assess::AssessmentItem& item,
                         int variant);

enum class PersonaSensitivity { Ignore, Follow };

struct MockModelConfig {
  MockPersona persona;
  // Follow: shift bias toward whichever persona tag appears last in the
  // request (a prompt-followable model). Ignore: keep the intrinsic biases
  // regardless of injected prompts (a robustly trained model surrogate).
  PersonaSensitivity sensitivity = PersonaSensitivity::Follow;
  double follow_bias = 0.9;
};

// Serves assessment requests offline: recovers (item, variant) from the
// rendered prompt, detects persona tags in the materialized messages, and
// answers through MockPersona.
class MockAssessmentTransport : public Transport {
 public:
  MockAssessmentTransport(assess::Questionnaire questionnaire,
                          assess::EvaluationPromptSet prompts, MockModelConfig config);

  std::string complete(const SessionConfig& session,
                       const std::vector<Message>& messages) override;

  // Target of the last persona tag in the concatenated messages, if any.
  static std::optional<mbti::ControlTarget> detect_persona_target(
      const std::vector<Message>& messages);

 private:
  assess::Questionnaire questionnaire_;
  assess::EvaluationPromptSet prompts_;
  MockModelConfig config_;
};

// Serves data-forging prompts offline: emits numbered novel questions for
// question-generation requests and first-person trait-flavored responses for
// response requests.
class MockGeneratorTransport : public Transport {
 public:
  explicit MockGeneratorTransport(std::uint64_t seed, int duplicate_every = 0);

  std::string complete(const SessionConfig& session,
                       const std::vector<Message>& messages) override;

 private:
  std::uint64_t seed_;
  int duplicate_every_;
  std::array<std::atomic<std::uint64_t>, 4> serial_{};
};

}  // namespace psyctl::client
