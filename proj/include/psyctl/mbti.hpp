#pragma once

#include "psyctl/rational.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace psyctl::mbti {

// The four dichotomous dimensions and their eight traits. Trait order pairs
// opposites: (E,I), (S,N), (T,F), (J,P).
enum class Trait : std::uint8_t { E = 0, I, S, N, T, F, J, P };
enum class Dimension : std::uint8_t { Attitude = 0, Perception, Judgment, Lifestyle };

inline constexpr std::array<Trait, 8> kAllTraits = {Trait::E, Trait::I, Trait::S, Trait::N,
                                                    Trait::T, Trait::F, Trait::J, Trait::P};
inline constexpr std::array<Dimension, 4> kAllDimensions = {
    Dimension::Attitude, Dimension::Perception, Dimension::Judgment, Dimension::Lifestyle};

constexpr std::size_t index(Trait t) { return static_cast<std::size_t>(t); }
constexpr std::size_t index(Dimension d) { return static_cast<std::size_t>(d); }

constexpr Dimension dimension_of(Trait t) { return static_cast<Dimension>(index(t) / 2); }

// First/second trait of a dimension; first is the fixed representative used
// by the TSE selection function (E, S, T, J).
constexpr std::pair<Trait, Trait> traits_of(Dimension d) {
  const auto base = static_cast<std::uint8_t>(index(d) * 2);
  return {static_cast<Trait>(base), static_cast<Trait>(base + 1)};
}

constexpr Trait representative(Dimension d) { return traits_of(d).first; }

constexpr Trait opposite(Trait t) { return static_cast<Trait>(index(t) ^ 1u); }

constexpr char letter(Trait t) {
  constexpr std::array<char, 8> letters = {'E', 'I', 'S', 'N', 'T', 'F', 'J', 'P'};
  return letters[index(t)];
}

std::optional<Trait> trait_from_letter(char c);

// Full name used in description headers: Extraversion, Introversion, ...
std::string_view trait_name(Trait t);

// Word form used in role instruction tags: Extroverted, Introverted,
// Sensing, Intuition, Thinking, Feeling, Judging, Perceiving.
std::string_view trait_word(Trait t);

std::string_view dimension_name(Dimension d);

// One trait per dimension; sixteen valid values.
class PersonalityType {
 public:
  static PersonalityType from_traits(const std::array<Trait, 4>& traits);
  static std::optional<PersonalityType> parse(std::string_view code);

  std::array<Trait, 4> traits() const;
  Trait trait_in(Dimension d) const;
  bool contains(Trait t) const { return trait_in(dimension_of(t)) == t; }
  std::string code() const;
  PersonalityType reversed() const;

  static const std::array<PersonalityType, 16>& all();

  auto operator<=>(const PersonalityType&) const = default;

 private:
  explicit PersonalityType(std::uint8_t bits) : bits_(bits) {}
  // Bit k set means dimension k holds its second trait (I/N/F/P).
  std::uint8_t bits_ = 0;
};

using ControlTarget = std::variant<Trait, PersonalityType>;

// "E" for a trait target, "ENTJ" for a personality target.
std::string target_code(const ControlTarget& target);
std::optional<ControlTarget> parse_target(std::string_view code);

// Per-trait percent rates, indexed by trait.
using RateTable = std::array<Rational, 8>;

}  // namespace psyctl::mbti
