#pragma once

#include "psyctl/client.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace psyctl::extract {

enum class Confidence { Exact, Inferred, Failed };

std::string_view confidence_name(Confidence c);

// value is 1..5; nullopt means Abstain, and holds exactly when confidence is
// Failed. rule_id names the cascade rule that produced the value, or
// "delegated" / "none".
struct ExtractionResult {
  std::optional<int> value;
  std::string rule_id = "none";
  Confidence confidence = Confidence::Failed;
};

// Deterministic rule cascade over free-text responses, in order:
//   1. bare_digit    - the entire trimmed response is a digit 1-5
//   2. answer_marker - first digit 1-5 after "answer"/"choose"/"select"
//   3. option_letter - option A/B wording mapped per the scale semantics
//   4. unique_digit  - exactly one distinct digit 1-5 anywhere
// Failure is a value, not an error.
ExtractionResult extract(std::string_view response);

// Rule ids and one-line descriptions, for CLI audit.
std::vector<std::pair<std::string, std::string>> rule_listing();

// Fallback for responses the cascade failed on: asks the extractor endpoint
// to restate the answer, then re-runs the cascade on its reply. Calling this
// on a rule-parseable response is a contract violation; it is logged and the
// cascade result is returned unchanged.
ExtractionResult extract_delegated(const std::string& response, const client::ChatClient& chat,
                                   const client::EndpointConfig& extractor_endpoint);

}  // namespace psyctl::extract
