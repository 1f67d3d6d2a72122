#pragma once

#include "psyctl/client.hpp"
#include "psyctl/extraction.hpp"
#include "psyctl/mbti.hpp"
#include "psyctl/rational.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace psyctl::assess {

// One Likert item. Agreeing with option A (values 1-2) indicates trait_of_a;
// agreeing with option B indicates its opposite.
struct AssessmentItem {
  std::string id;
  std::string text;
  std::string option_a;
  std::string option_b;
  mbti::Dimension dimension = mbti::Dimension::Attitude;
  mbti::Trait trait_of_a = mbti::Trait::E;
};

class Questionnaire {
 public:
  // Strict mode turns the dimension-imbalance warning into an error.
  static Questionnaire load(const std::filesystem::path& path, bool strict = false);
  static Questionnaire from_items(std::vector<AssessmentItem> items, bool strict = false);

  const std::vector<AssessmentItem>& items() const { return items_; }
  const AssessmentItem* find(std::string_view id) const;
  std::array<int, 4> per_dimension_counts() const;
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::vector<AssessmentItem> items_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  std::vector<std::string> warnings_;
};

// Rendered assessment request, fixed component order: task instruction, task
// description, test instruction, item, postamble.
struct EvaluationPrompt {
  std::string task_instruction;
  std::string task_description;
  std::string test_instruction;
  std::string item_text;
  std::string item_postamble;
  int variant_index = 0;

  std::string render() const;
};

// Five aligned paraphrase variants per prompt component, loaded from the
// bundled variant file.
class EvaluationPromptSet {
 public:
  static EvaluationPromptSet load(const std::filesystem::path& path);

  EvaluationPrompt render_prompt(const AssessmentItem& item, int variant_index) const;
  int variant_count() const { return static_cast<int>(task_instruction_.size()); }
  const std::vector<std::string>& task_instruction_variants() const { return task_instruction_; }

 private:
  std::vector<std::string> task_instruction_;
  std::vector<std::string> task_description_;
  std::vector<std::string> test_instruction_;
  std::vector<std::string> item_postamble_;
};

// value is 1..5; nullopt means Abstain (extraction failure or refusal).
struct LikertAnswer {
  std::string item_id;
  std::optional<int> value;
  std::string raw_response;
};

// Scores of one dimension's two traits. points_first belongs to the
// dimension's first trait (E/S/T/J). For answer value a on an item whose
// option A carries trait t, t gains (5-a) points and opposite(t) gains (a-1),
// so points_first + points_second == 4 * answered.
struct DimensionScore {
  long long points_first = 0;
  long long points_second = 0;
  int answered = 0;
  int abstained = 0;

  bool degenerate() const { return answered == 0; }
  long long points(mbti::Trait t) const;
  // Percent rate; exactly 50 for each trait when degenerate.
  Rational rate(mbti::Trait t) const;
};

struct DimensionRates {
  std::array<DimensionScore, 4> dimensions;

  const DimensionScore& of(mbti::Dimension d) const { return dimensions[mbti::index(d)]; }
  Rational rate(mbti::Trait t) const { return of(mbti::dimension_of(t)).rate(t); }
  mbti::RateTable rates() const;
  std::array<bool, 4> degenerate_flags() const;
};

DimensionRates score_answers(const Questionnaire& questionnaire,
                             std::span<const LikertAnswer> answers);

struct ResponseRecord {
  std::string item_id;
  int variant = 0;
  std::string request;
  std::string raw_response;
  std::optional<int> value;
  std::string rule_id;
  std::string timestamp;
  bool endpoint_failed = false;
};

// Cross-variant aggregate: mean of per-variant rates over the variants where
// the dimension had answered items. Degenerate dimensions stay flagged.
struct AggregateRates {
  mbti::RateTable rates{};
  std::array<bool, 4> degenerate{};
};

struct AssessmentRun {
  std::string run_id;
  std::vector<ResponseRecord> responses;
  std::map<int, DimensionRates> per_variant;
  DimensionRates pooled;
  AggregateRates mean;
  bool partial = false;
};

AggregateRates mean_of_variants(const std::map<int, DimensionRates>& per_variant);

using Extractor = std::function<extract::ExtractionResult(const std::string&)>;

struct AdministerOptions {
  std::vector<int> variants = {0, 1, 2, 3, 4};
  int parallelism = 4;
  std::string run_id = "run";
  std::optional<std::filesystem::path> transcript_path;
  Extractor extractor;  // defaults to the rule cascade
};

// Issues one request per (item, variant), extracts Likert values, and
// aggregates per-variant and mean rates. Endpoint failures after bounded
// retries mark the run partial and leave those items Abstain; every raw
// response is persisted when a transcript path is set.
AssessmentRun administer(const client::ChatClient& chat, const client::SessionConfig& session,
                         const Questionnaire& questionnaire, const EvaluationPromptSet& prompts,
                         const AdministerOptions& options);

void write_transcript(const std::filesystem::path& path, const std::string& run_id,
                      std::span<const ResponseRecord> responses);

}  // namespace psyctl::assess
