#include "psyctl/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

namespace psyctl::extract {

namespace {

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

bool is_likert_digit(char c) { return c >= '1' && c <= '5'; }

// A digit counts only when it stands alone, not inside "25" or "2nd".
bool standalone_at(const std::string& text, std::size_t pos) {
  if (pos > 0 && std::isalnum(static_cast<unsigned char>(text[pos - 1]))) return false;
  if (pos + 1 < text.size() && std::isalnum(static_cast<unsigned char>(text[pos + 1]))) {
    return false;
  }
  return true;
}

// Responses often echo the prompt's "[1, 2, 3, 4, 5]" scale; blank the echo
// so its digits never count as candidates.
std::string blank_scale_echo(std::string text) {
  std::size_t search = 0;
  while (true) {
    const std::size_t start = text.find('1', search);
    if (start == std::size_t(std::string::npos)) break;
    std::size_t pos = start;
    char expected = '1';
    bool matched = true;
    while (expected <= '5') {
      if (pos >= text.size() || text[pos] != expected) {
        matched = false;
        break;
      }
      ++pos;
      if (expected == '5') break;
      while (pos < text.size() &&
             (text[pos] == ',' || text[pos] == ' ' || text[pos] == '[' || text[pos] == ']')) {
        ++pos;
      }
      ++expected;
    }
    if (matched) {
      for (std::size_t i = start; i < pos; ++i) {
        if (std::isdigit(static_cast<unsigned char>(text[i]))) text[i] = ' ';
      }
      search = pos;
    } else {
      search = start + 1;
    }
  }
  return text;
}

std::optional<int> first_standalone_digit_after(const std::string& text, std::size_t from) {
  for (std::size_t i = from; i < text.size(); ++i) {
    if (is_likert_digit(text[i]) && standalone_at(text, i)) return text[i] - '0';
  }
  return std::nullopt;
}

constexpr std::string_view kMarkers[] = {"answer", "choose", "select"};

// Markers can appear in echoed instructions as well as the model's own
// conclusion; the conclusion comes last, so the last marker that is followed
// by a digit wins.
std::optional<int> answer_marker_value(const std::string& lower_blanked) {
  std::optional<int> value;
  std::size_t best_pos = 0;
  for (std::string_view marker : kMarkers) {
    std::size_t pos = 0;
    while ((pos = lower_blanked.find(marker, pos)) != std::string::npos) {
      const auto digit = first_standalone_digit_after(lower_blanked, pos + marker.size());
      if (digit && (!value || pos >= best_pos)) {
        value = digit;
        best_pos = pos;
      }
      pos += marker.size();
    }
  }
  return value;
}

bool contains(const std::string& text, std::string_view needle) {
  return text.find(needle) != std::string::npos;
}

// Agreement phrases that name one option explicitly, for responses that echo
// both option labels.
bool names_option(const std::string& lower, char option) {
  const std::string opt = std::string("option ") + option;
  for (std::string_view verb : {"with ", "prefer ", "pick ", "choose ", "select ", "go with ",
                                "lean toward ", "lean towards "}) {
    if (contains(lower, std::string(verb) + opt)) return true;
  }
  if (contains(lower, opt + " is my") || contains(lower, opt + " describes me") ||
      contains(lower, opt + " suits me") || contains(lower, opt + " fits me")) {
    return true;
  }
  return false;
}

std::optional<int> option_letter_value(const std::string& lower_raw) {
  const std::string_view trimmed = trim(lower_raw);
  bool picked_a = false;
  bool picked_b = false;
  if (trimmed == "a" || trimmed == "a." || trimmed == "option a" || trimmed == "option a.") {
    picked_a = true;
  } else if (trimmed == "b" || trimmed == "b." || trimmed == "option b" ||
             trimmed == "option b.") {
    picked_b = true;
  } else {
    const bool has_a = contains(lower_raw, "option a");
    const bool has_b = contains(lower_raw, "option b");
    if (has_a && !has_b) {
      picked_a = true;
    } else if (has_b && !has_a) {
      picked_b = true;
    } else if (has_a && has_b) {
      const bool named_a = names_option(lower_raw, 'a');
      const bool named_b = names_option(lower_raw, 'b');
      if (named_a && !named_b) picked_a = true;
      if (named_b && !named_a) picked_b = true;
    }
  }
  const bool strongly = contains(lower_raw, "strongly");
  if (picked_a) return strongly ? 1 : 2;
  if (picked_b) return strongly ? 5 : 4;
  if (contains(lower_raw, "neutral")) return 3;
  return std::nullopt;
}

std::optional<int> unique_digit_value(const std::string& blanked) {
  std::set<int> distinct;
  for (std::size_t i = 0; i < blanked.size(); ++i) {
    if (is_likert_digit(blanked[i]) && standalone_at(blanked, i)) {
      distinct.insert(blanked[i] - '0');
    }
  }
  if (distinct.size() == 1) return *distinct.begin();
  return std::nullopt;
}

}  // namespace

std::string_view confidence_name(Confidence c) {
  switch (c) {
    case Confidence::Exact: return "exact";
    case Confidence::Inferred: return "inferred";
    case Confidence::Failed: return "failed";
  }
  return "failed";
}

ExtractionResult extract(std::string_view response) {
  const std::string_view trimmed = trim(response);
  if (trimmed.size() == 1 && is_likert_digit(trimmed[0])) {
    return {trimmed[0] - '0', "bare_digit", Confidence::Exact};
  }

  const std::string lower = to_lower(response);
  const std::string blanked = blank_scale_echo(lower);

  if (const auto value = answer_marker_value(blanked)) {
    return {*value, "answer_marker", Confidence::Exact};
  }
  if (const auto value = option_letter_value(lower)) {
    return {*value, "option_letter", Confidence::Inferred};
  }
  if (const auto value = unique_digit_value(blanked)) {
    return {*value, "unique_digit", Confidence::Inferred};
  }
  return {std::nullopt, "none", Confidence::Failed};
}

std::vector<std::pair<std::string, std::string>> rule_listing() {
  return {
      {"bare_digit", "entire trimmed response is a single digit 1-5"},
      {"answer_marker",
       "first digit 1-5 after the last answer/choose/select marker that is followed by one"},
      {"option_letter",
       "option A -> 1 if 'strongly' present else 2; option B -> 5/4; 'neutral' -> 3"},
      {"unique_digit", "exactly one distinct standalone digit 1-5 anywhere in the response"},
      {"delegated", "extractor endpoint restated the answer; reply parsed by the cascade"},
  };
}

ExtractionResult extract_delegated(const std::string& response, const client::ChatClient& chat,
                                   const client::EndpointConfig& extractor_endpoint) {
  const ExtractionResult direct = extract(response);
  if (direct.confidence != Confidence::Failed) {
    std::fprintf(stderr,
                 "[extract] contract violation: extract_delegated called on a rule-parseable "
                 "response (rule %s)\n",
                 direct.rule_id.c_str());
    return direct;
  }

  static constexpr std::string_view kInstruction =
      "The following text answers a five-point Likert question where 1 means strongly agreeing "
      "with option A, 2 agreeing with option A, 3 neutral, 4 agreeing with option B, and 5 "
      "strongly agreeing with option B. Reply with the single number the text settles on, or "
      "the word none if it settles on nothing.";

  client::SessionConfig session;
  session.endpoint = extractor_endpoint;
  try {
    const std::string reply = chat.chat(
        session, {{client::Role::User, std::string(kInstruction) + "\n\nText:\n" + response}});
    ExtractionResult parsed = extract(reply);
    if (parsed.confidence == Confidence::Failed) {
      return {std::nullopt, "delegated", Confidence::Failed};
    }
    return {parsed.value, "delegated", Confidence::Inferred};
  } catch (const Error&) {
    return {std::nullopt, "delegated", Confidence::Failed};
  }
}

}  // namespace psyctl::extract
