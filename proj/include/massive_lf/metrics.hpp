// Copyright 2026 The massive-lf Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "massive_lf/converter.hpp"
#include "massive_lf/dataset.hpp"
#include "massive_lf/error.hpp"
#include "massive_lf/lf_model.hpp"
#include "massive_lf/parallel.hpp"
#include "massive_lf/utf8.hpp"

namespace massive_lf {

// Integer hit counts; fractions are derived so aggregation is exact and
// independent of example order.
struct Tally {
  std::size_t n = 0;
  std::size_t ia_correct = 0;
  std::size_t em_correct = 0;

  double ia() const { return n ? static_cast<double>(ia_correct) / static_cast<double>(n) : 0.0; }
  double em() const { return n ? static_cast<double>(em_correct) / static_cast<double>(n) : 0.0; }

  void add(bool ia_hit, bool em_hit) {
    ++n;
    ia_correct += ia_hit ? 1 : 0;
    em_correct += em_hit ? 1 : 0;
  }

  friend bool operator==(const Tally&, const Tally&) = default;
};

struct EvalReport {
  Tally overall;
  std::map<std::string, Tally> per_locale;
  // Keyed by gold intent; n is the support.
  std::map<std::string, Tally> per_intent;
  Tally localized;
  Tally translated_only;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// True iff the prediction parses and re-serializes to exactly `gold`.
// Unparseable predictions are misses, never errors.
inline bool exact_match(std::string_view prediction, const CanonicalText& gold) {
  try {
    return serialize_compact(parse_compact(prediction)) == gold;
  } catch (const Error&) {
    return false;
  }
}

// Intent label of the first whitespace/bracket-delimited token that starts
// with "IN:". Works on malformed bracketing; empty when there is none.
inline std::string extract_intent(std::string_view prediction) {
  const std::u32string text = utf8::decode_lossy(prediction);
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (utf8::is_space(text[pos]) || detail::is_bracket(text[pos]))) ++pos;
    const std::size_t begin = pos;
    while (pos < text.size() && !utf8::is_space(text[pos]) && !detail::is_bracket(text[pos])) ++pos;
    const std::u32string_view token = std::u32string_view(text).substr(begin, pos - begin);
    if (token.starts_with(U"IN:")) return detail::ascii_lower(utf8::encode(token.substr(3)));
  }
  return {};
}

inline bool intent_match(std::string_view prediction, std::string_view gold_intent) {
  const std::string predicted = extract_intent(prediction);
  return !predicted.empty() && predicted == detail::ascii_lower(std::string(gold_intent));
}

// Localized iff any slot was localized; slot-free examples are translated-only.
inline bool is_localized(const DatasetExample& example) {
  return std::any_of(example.slot_methods.begin(), example.slot_methods.end(),
                     [](const SlotMethodEntry& e) { return e.method == SlotMethod::kLocalization; });
}

struct LocalizationSplit {
  std::vector<DatasetExample> localized;
  std::vector<DatasetExample> translated_only;
};

inline LocalizationSplit split_by_localization(std::span<const DatasetExample> gold) {
  LocalizationSplit split;
  for (const auto& example : gold) {
    (is_localized(example) ? split.localized : split.translated_only).push_back(example);
  }
  return split;
}

inline std::vector<DatasetExample> filter_partition(std::span<const DatasetExample> gold, std::string_view partition) {
  std::vector<DatasetExample> out;
  for (const auto& example : gold) {
    if (example.partition == partition) out.push_back(example);
  }
  return out;
}

namespace detail {

inline std::string describe_keys(const std::vector<ExampleKey>& keys) {
  constexpr std::size_t kShown = 20;
  std::string out;
  for (std::size_t i = 0; i < keys.size() && i < kShown; ++i) {
    if (i) out += ", ";
    out += "(" + keys[i].first + ", " + keys[i].second + ")";
  }
  if (keys.size() > kShown) out += " and " + std::to_string(keys.size() - kShown) + " more";
  return out;
}

}  // namespace detail

// Scores one prediction per gold example. Throws DuplicatePrediction,
// UnknownPredictionId or MissingPrediction (listing the offending keys)
// unless predictions and gold cover exactly the same (id, locale) keys.
inline EvalReport evaluate(std::span<const PredictionRecord> predictions, std::span<const DatasetExample> gold,
                           unsigned threads = 1) {
  std::map<ExampleKey, std::size_t> gold_index;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold_index.emplace(ExampleKey{gold[i].id, gold[i].locale}, i).second) {
      throw Error(ErrorKind::kDuplicateKey, "gold example (" + gold[i].id + ", " + gold[i].locale + ") appears twice");
    }
  }
  std::map<ExampleKey, std::size_t> prediction_index;
  std::vector<ExampleKey> duplicates, unknown, missing;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    ExampleKey key{predictions[i].id, predictions[i].locale};
    if (!prediction_index.emplace(key, i).second) duplicates.push_back(key);
    if (!gold_index.contains(key)) unknown.push_back(std::move(key));
  }
  if (!duplicates.empty()) throw Error(ErrorKind::kDuplicatePrediction, detail::describe_keys(duplicates));
  if (!unknown.empty()) throw Error(ErrorKind::kUnknownPredictionId, detail::describe_keys(unknown));
  for (const auto& [key, idx] : gold_index) {
    if (!prediction_index.contains(key)) missing.push_back(key);
  }
  if (!missing.empty()) throw Error(ErrorKind::kMissingPrediction, detail::describe_keys(missing));

  struct Outcome {
    bool ia = false;
    bool em = false;
  };
  std::vector<Outcome> outcomes(gold.size());
  parallel_for(gold.size(), threads, [&](std::size_t i) {
    const DatasetExample& example = gold[i];
    const std::string& predicted = predictions[prediction_index.at({example.id, example.locale})].lf;
    const CanonicalText reference = to_compact(example);
    outcomes[i] = {intent_match(predicted, example.intent), exact_match(predicted, reference)};
  });

  EvalReport report;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto [ia, em] = outcomes[i];
    report.overall.add(ia, em);
    report.per_locale[gold[i].locale].add(ia, em);
    report.per_intent[detail::ascii_lower(gold[i].intent)].add(ia, em);
    (is_localized(gold[i]) ? report.localized : report.translated_only).add(ia, em);
  }
  return report;
}

struct IntentRow {
  std::string intent;
  double ia = 0.0;
  std::size_t support = 0;
};

// Per-intent IA, lowest first (ties by intent name).
inline std::vector<IntentRow> intents_by_accuracy(const EvalReport& report) {
  std::vector<IntentRow> rows;
  for (const auto& [intent, tally] : report.per_intent) rows.push_back({intent, tally.ia(), tally.n});
  std::stable_sort(rows.begin(), rows.end(), [](const IntentRow& a, const IntentRow& b) { return a.ia < b.ia; });
  return rows;
}

}  // namespace massive_lf
