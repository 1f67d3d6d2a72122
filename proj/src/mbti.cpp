#include "psyctl/mbti.hpp"

#include <cctype>

namespace psyctl::mbti {

std::optional<Trait> trait_from_letter(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'E': return Trait::E;
    case 'I': return Trait::I;
    case 'S': return Trait::S;
    case 'N': return Trait::N;
    case 'T': return Trait::T;
    case 'F': return Trait::F;
    case 'J': return Trait::J;
    case 'P': return Trait::P;
    default: return std::nullopt;
  }
}

std::string_view trait_name(Trait t) {
  constexpr std::array<std::string_view, 8> names = {
      "Extraversion", "Introversion", "Sensing", "Intuition",
      "Thinking",     "Feeling",      "Judging", "Perceiving"};
  return names[index(t)];
}

std::string_view trait_word(Trait t) {
  constexpr std::array<std::string_view, 8> words = {
      "Extroverted", "Introverted", "Sensing", "Intuition",
      "Thinking",    "Feeling",     "Judging", "Perceiving"};
  return words[index(t)];
}

std::string_view dimension_name(Dimension d) {
  constexpr std::array<std::string_view, 4> names = {"Attitude", "Perception", "Judgment",
                                                     "Lifestyle"};
  return names[index(d)];
}

PersonalityType PersonalityType::from_traits(const std::array<Trait, 4>& traits) {
  std::uint8_t bits = 0;
  for (Dimension d : kAllDimensions) {
    const Trait t = traits[index(d)];
    if (dimension_of(t) != d) {
      throw std::invalid_argument("trait " + std::string(1, letter(t)) +
                                  " does not belong to dimension slot");
    }
    if (t == traits_of(d).second) bits |= static_cast<std::uint8_t>(1u << index(d));
  }
  return PersonalityType(bits);
}

std::optional<PersonalityType> PersonalityType::parse(std::string_view code) {
  if (code.size() != 4) return std::nullopt;
  std::uint8_t bits = 0;
  for (Dimension d : kAllDimensions) {
    const auto t = trait_from_letter(code[index(d)]);
    if (!t || dimension_of(*t) != d) return std::nullopt;
    if (*t == traits_of(d).second) bits |= static_cast<std::uint8_t>(1u << index(d));
  }
  return PersonalityType(bits);
}

std::array<Trait, 4> PersonalityType::traits() const {
  std::array<Trait, 4> out{};
  for (Dimension d : kAllDimensions) out[index(d)] = trait_in(d);
  return out;
}

Trait PersonalityType::trait_in(Dimension d) const {
  const auto [first, second] = traits_of(d);
  return (bits_ & (1u << index(d))) ? second : first;
}

std::string PersonalityType::code() const {
  std::string out(4, '?');
  for (Dimension d : kAllDimensions) out[index(d)] = letter(trait_in(d));
  return out;
}

PersonalityType PersonalityType::reversed() const {
  return PersonalityType(static_cast<std::uint8_t>(bits_ ^ 0x0Fu));
}

const std::array<PersonalityType, 16>& PersonalityType::all() {
  static const std::array<PersonalityType, 16> types = [] {
    std::array<PersonalityType, 16> out{PersonalityType(0), PersonalityType(0), PersonalityType(0),
                                        PersonalityType(0), PersonalityType(0), PersonalityType(0),
                                        PersonalityType(0), PersonalityType(0), PersonalityType(0),
                                        PersonalityType(0), PersonalityType(0), PersonalityType(0),
                                        PersonalityType(0), PersonalityType(0), PersonalityType(0),
                                        PersonalityType(0)};
    for (std::uint8_t bits = 0; bits < 16; ++bits) out[bits] = PersonalityType(bits);
    return out;
  }();
  return types;
}

std::string target_code(const ControlTarget& target) {
  if (const auto* t = std::get_if<Trait>(&target)) return std::string(1, letter(*t));
  return std::get<PersonalityType>(target).code();
}

std::optional<ControlTarget> parse_target(std::string_view code) {
  if (code.size() == 1) {
    if (const auto t = trait_from_letter(code[0])) return ControlTarget(*t);
    return std::nullopt;
  }
  if (const auto p = PersonalityType::parse(code)) return ControlTarget(*p);
  return std::nullopt;
}

}  // namespace psyctl::mbti
