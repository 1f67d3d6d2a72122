#pragma once

#include "psyctl/client.hpp"
#include "psyctl/mbti.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace psyctl::persona {

// Trait and dimension description blocks, shipped as data so new wordings
// need no rebuild.
struct TraitDescription {
  std::string dimension_description;
  std::string trait_description;
  std::string key_characteristics;
};

struct PersonaSpec {
  mbti::ControlTarget target;
  client::Placement placement = client::Placement::SystemPrompt;
  int variant_index = 0;
};

// Loaded from the persona description file: one block per trait letter plus
// five aligned paraphrase variants per role-play prompt component. Immutable
// after load; safe for concurrent reads.
class PersonaLibrary {
 public:
  static PersonaLibrary load(const std::filesystem::path& path);

  const TraitDescription& description(mbti::Trait t) const;

  // Task Description + Personality Description block(s) + Task Instruction,
  // assembled from the aligned paraphrase set `spec.variant_index`. A
  // personality target includes all four trait blocks in dimension order.
  std::string build_roleplay_prompt(const PersonaSpec& spec) const;

  int variant_count() const { return static_cast<int>(trait_task_instruction_.size()); }

 private:
  std::map<mbti::Trait, TraitDescription> traits_;
  std::vector<std::string> trait_task_description_;
  std::vector<std::string> trait_task_instruction_;
  std::vector<std::string> personality_task_description_;
  std::vector<std::string> personality_task_instruction_;
};

// Role instruction tag: "Extroverted(E)" for a trait, "Extroverted Intuition
// Feeling Judging(ENFJ)" for a personality.
std::string target_tag(const mbti::ControlTarget& target);

// Builds a session that injects `persona_prompt` at `placement` on every
// request to an endpoint already SFT-controlled for the same target. The
// claimed SFT provenance is recorded in `provenance`, not verified. An empty
// prompt yields a session identical to the bare endpoint.
client::SessionConfig compose_pisf(const std::string& persona_prompt, client::Placement placement,
                                   const client::EndpointConfig& endpoint,
                                   std::string provenance);

}  // namespace psyctl::persona
