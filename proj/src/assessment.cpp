#include "psyctl/assessment.hpp"

#include "psyctl/errors.hpp"
#include "psyctl/io.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace psyctl::assess {

using json = nlohmann::json;
using mbti::Dimension;
using mbti::Trait;

namespace {

std::vector<std::string> check_items(const std::vector<AssessmentItem>& items, bool strict) {
  if (items.empty()) throw ParseError("questionnaire has no items");
  std::set<std::string> seen_ids;
  for (const AssessmentItem& item : items) {
    if (item.id.empty()) throw ValidationError("item with empty id");
    if (!seen_ids.insert(item.id).second) {
      throw ValidationError("duplicate item id: " + item.id);
    }
    if (item.text.empty()) throw ValidationError("item " + item.id + ": empty text");
    if (item.option_a == item.option_b) {
      throw ValidationError("item " + item.id + ": options A and B are identical");
    }
    if (mbti::dimension_of(item.trait_of_a) != item.dimension) {
      throw ValidationError("item " + item.id + ": trait_of_a " +
                            std::string(1, mbti::letter(item.trait_of_a)) +
                            " does not belong to dimension " +
                            std::string(mbti::dimension_name(item.dimension)));
    }
  }
  std::array<int, 4> counts{};
  for (const AssessmentItem& item : items) ++counts[mbti::index(item.dimension)];
  std::vector<std::string> warnings;
  for (Dimension d : mbti::kAllDimensions) {
    if (counts[mbti::index(d)] != counts[0]) {
      std::string message = "dimension item counts are unbalanced:";
      for (Dimension dd : mbti::kAllDimensions) {
        message += " " + std::string(mbti::dimension_name(dd)) + "=" +
                   std::to_string(counts[mbti::index(dd)]);
      }
      if (strict) throw ValidationError(message);
      warnings.push_back(message);
      break;
    }
  }
  return warnings;
}

}  // namespace

Questionnaire Questionnaire::load(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open questionnaire: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("questionnaire " + path.string() + ": " + e.what());
  }
  const json& list = doc.is_array() ? doc : doc.value("items", json::array());
  if (!list.is_array() || list.empty()) {
    throw ParseError("questionnaire " + path.string() + ": no items");
  }
  std::vector<AssessmentItem> items;
  items.reserve(list.size());
  for (const json& record : list) {
    AssessmentItem item;
    item.id = record.value("id", "");
    item.text = record.value("text", "");
    item.option_a = record.value("option_a", "");
    item.option_b = record.value("option_b", "");
    const std::string polarity = record.value("trait_of_a", "");
    if (polarity.size() != 1) {
      throw ValidationError("item " + item.id + ": missing or malformed trait_of_a");
    }
    const auto trait = mbti::trait_from_letter(polarity[0]);
    if (!trait) throw ValidationError("item " + item.id + ": unknown trait " + polarity);
    item.trait_of_a = *trait;
    item.dimension = mbti::dimension_of(*trait);
    if (record.contains("dimension")) {
      const std::string name = record["dimension"].get<std::string>();
      bool matched = false;
      for (Dimension d : mbti::kAllDimensions) {
        if (name == mbti::dimension_name(d)) {
          item.dimension = d;
          matched = true;
        }
      }
      if (!matched) throw ValidationError("item " + item.id + ": unknown dimension " + name);
    }
    items.push_back(std::move(item));
  }
  return from_items(std::move(items), strict);
}

Questionnaire Questionnaire::from_items(std::vector<AssessmentItem> items, bool strict) {
  Questionnaire q;
  q.warnings_ = check_items(items, strict);
  q.items_ = std::move(items);
  for (std::size_t i = 0; i < q.items_.size(); ++i) q.by_id_[q.items_[i].id] = i;
  return q;
}

const AssessmentItem* Questionnaire::find(std::string_view id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &items_[it->second];
}

std::array<int, 4> Questionnaire::per_dimension_counts() const {
  std::array<int, 4> counts{};
  for (const AssessmentItem& item : items_) ++counts[mbti::index(item.dimension)];
  return counts;
}

std::string EvaluationPrompt::render() const {
  std::ostringstream out;
  out << task_instruction << '\n'
      << task_description << '\n'
      << test_instruction << '\n'
      << item_text << '\n'
      << item_postamble;
  return out.str();
}

EvaluationPromptSet EvaluationPromptSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open prompt variant file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("prompt variant file " + path.string() + ": " + e.what());
  }
  EvaluationPromptSet set;
  const auto read = [&](const char* key, std::vector<std::string>& into) {
    if (!doc.contains(key) || !doc[key].is_array()) {
      throw ParseError(std::string("prompt variant file: missing component '") + key + "'");
    }
    for (const json& entry : doc[key]) into.push_back(entry.get<std::string>());
    if (into.size() != 5) {
      throw ValidationError(std::string("prompt component '") + key +
                            "' must have exactly 5 variants");
    }
  };
  read("task_instruction", set.task_instruction_);
  read("task_description", set.task_description_);
  read("test_instruction", set.test_instruction_);
  read("item_postamble", set.item_postamble_);
  return set;
}

EvaluationPrompt EvaluationPromptSet::render_prompt(const AssessmentItem& item,
                                                    int variant_index) const {
  if (variant_index < 0 || variant_index >= variant_count()) {
    throw PreconditionError("variant_index out of range: " + std::to_string(variant_index));
  }
  const auto k = static_cast<std::size_t>(variant_index);
  EvaluationPrompt prompt;
  prompt.task_instruction = task_instruction_[k];
  prompt.task_description = task_description_[k];
  prompt.test_instruction = test_instruction_[k];
  prompt.item_text = item.text + ":\nOption A:" + item.option_a + " Option B:" + item.option_b;
  prompt.item_postamble = item_postamble_[k];
  prompt.variant_index = variant_index;
  return prompt;
}

long long DimensionScore::points(Trait t) const {
  const auto [first, second] = mbti::traits_of(mbti::dimension_of(t));
  return t == first ? points_first : points_second;
}

Rational DimensionScore::rate(Trait t) const {
  if (degenerate()) return Rational(50);
  const long long total = points_first + points_second;
  return Rational(points(t) * 100, total);
}

mbti::RateTable DimensionRates::rates() const {
  mbti::RateTable table{};
  for (Trait t : mbti::kAllTraits) table[mbti::index(t)] = rate(t);
  return table;
}

std::array<bool, 4> DimensionRates::degenerate_flags() const {
  std::array<bool, 4> flags{};
  for (Dimension d : mbti::kAllDimensions) flags[mbti::index(d)] = of(d).degenerate();
  return flags;
}

DimensionRates score_answers(const Questionnaire& questionnaire,
                             std::span<const LikertAnswer> answers) {
  DimensionRates result;
  std::set<std::string> answered_ids;
  for (const LikertAnswer& answer : answers) {
    const AssessmentItem* item = questionnaire.find(answer.item_id);
    if (item == nullptr) throw UnknownItem("answer references unknown item " + answer.item_id);
    if (!answered_ids.insert(answer.item_id).second) {
      throw DuplicateAnswer("multiple answers for item " + answer.item_id);
    }
    DimensionScore& score = result.dimensions[mbti::index(item->dimension)];
    if (!answer.value.has_value()) {
      ++score.abstained;
      continue;
    }
    const int a = *answer.value;
    if (a < 1 || a > 5) {
      throw ValidationError("answer for item " + answer.item_id + " out of range: " +
                            std::to_string(a));
    }
    const auto [first, second] = mbti::traits_of(item->dimension);
    const long long toward_a = 5 - a;
    const long long toward_b = a - 1;
    if (item->trait_of_a == first) {
      score.points_first += toward_a;
      score.points_second += toward_b;
    } else {
      score.points_first += toward_b;
      score.points_second += toward_a;
    }
    ++score.answered;
  }
  return result;
}

AggregateRates mean_of_variants(const std::map<int, DimensionRates>& per_variant) {
  AggregateRates out;
  for (Dimension d : mbti::kAllDimensions) {
    const auto [first, second] = mbti::traits_of(d);
    Rational sum(0);
    long long contributing = 0;
    for (const auto& [variant, rates] : per_variant) {
      if (rates.of(d).degenerate()) continue;
      sum += rates.of(d).rate(first);
      ++contributing;
    }
    if (contributing == 0) {
      out.degenerate[mbti::index(d)] = true;
      out.rates[mbti::index(first)] = Rational(50);
      out.rates[mbti::index(second)] = Rational(50);
    } else {
      const Rational mean = sum / contributing;
      out.rates[mbti::index(first)] = mean;
      out.rates[mbti::index(second)] = Rational(100) - mean;
    }
  }
  return out;
}

void write_transcript(const std::filesystem::path& path, const std::string& run_id,
                      std::span<const ResponseRecord> responses) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::app);
  if (!out) throw FormatError("cannot open transcript " + path.string());
  for (const ResponseRecord& record : responses) {
    json line = {
        {"run_id", run_id},
        {"item_id", record.item_id},
        {"variant", record.variant},
        {"request", record.request},
        {"raw_response", record.raw_response},
        {"extracted_value", record.value ? json(*record.value) : json(nullptr)},
        {"rule_id", record.rule_id},
        {"timestamp", record.timestamp},
    };
    if (record.endpoint_failed) line["endpoint_failed"] = true;
    out << line.dump() << '\n';
  }
}

AssessmentRun administer(const client::ChatClient& chat, const client::SessionConfig& session,
                         const Questionnaire& questionnaire, const EvaluationPromptSet& prompts,
                         const AdministerOptions& options) {
  for (int variant : options.variants) {
    if (variant < 0 || variant >= prompts.variant_count()) {
      throw PreconditionError("variant index out of range: " + std::to_string(variant));
    }
  }
  const Extractor extractor =
      options.extractor ? options.extractor
                        : [](const std::string& text) { return extract::extract(text); };

  struct Task {
    int variant;
    std::size_t item_index;
  };
  std::vector<Task> tasks;
  tasks.reserve(options.variants.size() * questionnaire.items().size());
  for (int variant : options.variants) {
    for (std::size_t i = 0; i < questionnaire.items().size(); ++i) tasks.push_back({variant, i});
  }

  AssessmentRun run;
  run.run_id = options.run_id;
  run.responses.resize(tasks.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> partial{false};
  std::mutex fatal_mutex;
  std::exception_ptr fatal;

  const auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      {
        std::lock_guard lock(fatal_mutex);
        if (fatal) return;
      }
      const Task task = tasks[k];
      const AssessmentItem& item = questionnaire.items()[task.item_index];
      ResponseRecord& record = run.responses[k];
      record.item_id = item.id;
      record.variant = task.variant;
      record.request = prompts.render_prompt(item, task.variant).render();
      record.timestamp = io::iso8601_utc_now();
      try {
        record.raw_response = chat.chat(session, {{client::Role::User, record.request}});
        const extract::ExtractionResult extracted = extractor(record.raw_response);
        record.value = extracted.value;
        record.rule_id = extracted.rule_id;
      } catch (const EndpointError&) {
        record.endpoint_failed = true;
        record.rule_id = "none";
        partial.store(true);
      } catch (const SchemaError&) {
        record.endpoint_failed = true;
        record.rule_id = "none";
        partial.store(true);
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        return;
      }
    }
  };

  const int thread_count =
      std::max(1, std::min<int>(options.parallelism, static_cast<int>(tasks.size())));
  if (thread_count == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(thread_count));
    for (int i = 0; i < thread_count; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);
  run.partial = partial.load();

  for (int variant : options.variants) {
    std::vector<LikertAnswer> answers;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      if (tasks[k].variant != variant) continue;
      const ResponseRecord& record = run.responses[k];
      answers.push_back({record.item_id, record.value, record.raw_response});
    }
    run.per_variant[variant] = score_answers(questionnaire, answers);
  }

  // Pooled scoring treats every (item, variant) response as its own answer;
  // summed from the per-variant tallies.
  DimensionRates pooled;
  for (const auto& [variant, rates] : run.per_variant) {
    for (Dimension d : mbti::kAllDimensions) {
      DimensionScore& into = pooled.dimensions[mbti::index(d)];
      const DimensionScore& from = rates.of(d);
      into.points_first += from.points_first;
      into.points_second += from.points_second;
      into.answered += from.answered;
      into.abstained += from.abstained;
    }
  }
  run.pooled = pooled;
  run.mean = mean_of_variants(run.per_variant);

  if (options.transcript_path) {
    write_transcript(*options.transcript_path, run.run_id, run.responses);
  }
  return run;
}

}  // namespace psyctl::assess
