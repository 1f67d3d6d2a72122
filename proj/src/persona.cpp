#include "psyctl/persona.hpp"

#include "psyctl/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace psyctl::persona {

using json = nlohmann::json;
using mbti::Dimension;
using mbti::Trait;

namespace {

std::vector<std::string> read_variant_list(const json& components, const std::string& key) {
  if (!components.contains(key) || !components[key].is_array()) {
    throw ParseError("persona description file: missing component array '" + key + "'");
  }
  std::vector<std::string> out;
  for (const auto& entry : components[key]) {
    if (!entry.is_string()) {
      throw ParseError("persona description file: component '" + key + "' has a non-string entry");
    }
    out.push_back(entry.get<std::string>());
  }
  if (out.size() != 5) {
    throw ValidationError("persona description file: component '" + key + "' must have exactly 5 variants, found " +
                          std::to_string(out.size()));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      if (out[i] == out[j]) {
        throw ValidationError("persona description file: component '" + key + "' variants " +
                              std::to_string(i) + " and " + std::to_string(j) + " are identical");
      }
    }
  }
  return out;
}

std::string replace_all(std::string text, const std::string& placeholder,
                        const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
  return text;
}

}  // namespace

PersonaLibrary PersonaLibrary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open persona description file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("persona description file " + path.string() + ": " + e.what());
  }

  PersonaLibrary lib;
  if (!doc.contains("traits") || !doc["traits"].is_object()) {
    throw ParseError("persona description file: missing 'traits' object");
  }
  for (const auto& [key, block] : doc["traits"].items()) {
    if (key.size() != 1) throw ParseError("persona description file: bad trait key '" + key + "'");
    const auto trait = mbti::trait_from_letter(key[0]);
    if (!trait) throw ParseError("persona description file: unknown trait letter '" + key + "'");
    TraitDescription desc;
    desc.dimension_description = block.value("dimension_description", "");
    desc.trait_description = block.value("trait_description", "");
    desc.key_characteristics = block.value("key_characteristics", "");
    if (desc.trait_description.empty()) {
      throw ValidationError("persona description file: trait '" + key +
                            "' has an empty trait_description");
    }
    lib.traits_[*trait] = std::move(desc);
  }

  if (!doc.contains("components") || !doc["components"].is_object()) {
    throw ParseError("persona description file: missing 'components' object");
  }
  const json& components = doc["components"];
  lib.trait_task_description_ = read_variant_list(components, "trait_task_description");
  lib.trait_task_instruction_ = read_variant_list(components, "trait_task_instruction");
  lib.personality_task_description_ = read_variant_list(components, "personality_task_description");
  lib.personality_task_instruction_ =
      read_variant_list(components, "personality_task_instruction");
  return lib;
}

const TraitDescription& PersonaLibrary::description(Trait t) const {
  const auto it = traits_.find(t);
  if (it == traits_.end()) {
    throw MissingDescription("no description block for trait " + std::string(1, mbti::letter(t)));
  }
  return it->second;
}

std::string target_tag(const mbti::ControlTarget& target) {
  if (const auto* t = std::get_if<Trait>(&target)) {
    return std::string(mbti::trait_word(*t)) + "(" + mbti::letter(*t) + ")";
  }
  const auto& p = std::get<mbti::PersonalityType>(target);
  std::string words;
  for (Trait t : p.traits()) {
    if (!words.empty()) words += ' ';
    words += mbti::trait_word(t);
  }
  return words + "(" + p.code() + ")";
}

std::string PersonaLibrary::build_roleplay_prompt(const PersonaSpec& spec) const {
  if (spec.variant_index < 0 || spec.variant_index >= variant_count()) {
    throw PreconditionError("variant_index out of range: " + std::to_string(spec.variant_index));
  }
  const bool is_trait = std::holds_alternative<Trait>(spec.target);
  const auto& task_description =
      is_trait ? trait_task_description_[static_cast<std::size_t>(spec.variant_index)]
               : personality_task_description_[static_cast<std::size_t>(spec.variant_index)];
  const auto& instruction_template =
      is_trait ? trait_task_instruction_[static_cast<std::size_t>(spec.variant_index)]
               : personality_task_instruction_[static_cast<std::size_t>(spec.variant_index)];

  std::ostringstream out;
  out << task_description << "\n\n";
  out << "Personality Description:\n";
  if (is_trait) {
    out << description(std::get<Trait>(spec.target)).trait_description << "\n";
  } else {
    for (Trait t : std::get<mbti::PersonalityType>(spec.target).traits()) {
      out << "**" << mbti::trait_name(t) << "**\n";
      out << description(t).trait_description << "\n";
    }
  }
  out << "\nInstructions:\n";
  out << replace_all(instruction_template, "{TARGET_TAG}", target_tag(spec.target));
  return out.str();
}

client::SessionConfig compose_pisf(const std::string& persona_prompt, client::Placement placement,
                                   const client::EndpointConfig& endpoint,
                                   std::string provenance) {
  if (!endpoint.supports_system_prompt && placement == client::Placement::SystemPrompt &&
      !persona_prompt.empty()) {
    throw PlacementUnsupported("endpoint " + endpoint.name +
                               " declares no system-message support");
  }
  client::SessionConfig session;
  session.endpoint = endpoint;
  session.provenance = std::move(provenance);
  if (!persona_prompt.empty()) {
    session.injections.push_back({placement, persona_prompt});
  }
  return session;
}

}  // namespace psyctl::persona
