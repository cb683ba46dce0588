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
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "massive_lf/dataset.hpp"
#include "massive_lf/error.hpp"
#include "massive_lf/language_config.hpp"
#include "massive_lf/lf_model.hpp"
#include "massive_lf/parallel.hpp"
#include "massive_lf/utf8.hpp"

// Translate-and-Fill post-processing. An external filler model receives a
// translated utterance plus the value-free signature of the English LF and
// proposes a full LF; the functions here put its slots into the target
// utterance's order and widen slot boundaries to whole words.
namespace massive_lf {

// A compact LF with all slot values removed: "[IN:ALARM_SET [SL:TIME ] [SL:DATE ] ]".
class Signature {
 public:
  Signature(std::string intent, std::vector<std::string> slot_names)
      : intent_(std::move(intent)), slot_names_(std::move(slot_names)) {}

  static Signature parse(std::string_view text) {
    const LogicalForm lf = detail::CompactParser(utf8::decode(text), /*signature=*/true).parse();
    std::vector<std::string> names;
    names.reserve(lf.slots.size());
    for (const auto& slot : lf.slots) names.push_back(slot.name);
    return Signature(lf.intent, std::move(names));
  }

  const std::string& intent() const { return intent_; }
  const std::vector<std::string>& slot_names() const { return slot_names_; }

  std::string text() const {
    std::string out = "[IN:" + detail::ascii_upper(intent_);
    for (const auto& name : slot_names_) out += " [SL:" + detail::ascii_upper(name) + " ]";
    out += " ]";
    return out;
  }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::string intent_;
  std::vector<std::string> slot_names_;
};

inline Signature make_signature(const LogicalForm& lf) {
  std::vector<std::string> names;
  names.reserve(lf.slots.size());
  for (const auto& slot : lf.slots) names.push_back(slot.name);
  return Signature(lf.intent, std::move(names));
}

inline Signature make_signature(const Signature& signature) { return signature; }

struct ReorderResult {
  LogicalForm lf;
  std::vector<std::string> unmatched;
};

// Locates each slot value (in list order) at its leftmost occurrence that
// does not overlap an occurrence already claimed by an earlier slot. A slot
// whose existing span is in range, holds exactly its value and overlaps no
// other kept span keeps that span and claims it before any search. Matched
// slots come first, stably sorted by start offset; unmatched slots follow
// in their original relative order without spans. Values are never edited.
inline ReorderResult reorder_slots(const LogicalForm& lf, std::string_view utterance) {
  const std::u32string text = utf8::decode(utterance);
  std::vector<Span> claimed;
  std::vector<std::optional<Span>> found(lf.slots.size());
  auto is_free = [&](const Span& candidate) {
    return std::none_of(claimed.begin(), claimed.end(), [&](const Span& s) { return s.overlaps(candidate); });
  };
  for (std::size_t i = 0; i < lf.slots.size(); ++i) {
    const auto& span = lf.slots[i].span;
    if (!span || span->start >= span->end || span->end > text.size()) continue;
    if (utf8::encode(std::u32string_view(text).substr(span->start, span->size())) != lf.slots[i].value) continue;
    if (!is_free(*span)) continue;
    found[i] = *span;
    claimed.push_back(*span);
  }
  for (std::size_t i = 0; i < lf.slots.size(); ++i) {
    if (found[i]) continue;
    const std::u32string value = utf8::decode(lf.slots[i].value);
    if (value.empty()) continue;
    for (std::size_t at = text.find(value); at != std::u32string::npos; at = text.find(value, at + 1)) {
      const Span candidate{at, at + value.size()};
      if (is_free(candidate)) {
        found[i] = candidate;
        claimed.push_back(candidate);
        break;
      }
    }
  }

  std::vector<std::size_t> matched;
  ReorderResult result;
  result.lf.intent = lf.intent;
  for (std::size_t i = 0; i < lf.slots.size(); ++i) {
    if (found[i]) matched.push_back(i);
  }
  std::stable_sort(matched.begin(), matched.end(),
                   [&](std::size_t a, std::size_t b) { return found[a]->start < found[b]->start; });
  for (std::size_t i : matched) {
    SlotSpan slot = lf.slots[i];
    slot.span = found[i];
    result.lf.slots.push_back(std::move(slot));
  }
  for (std::size_t i = 0; i < lf.slots.size(); ++i) {
    if (found[i]) continue;
    SlotSpan slot = lf.slots[i];
    slot.span.reset();
    result.lf.slots.push_back(std::move(slot));
    result.unmatched.push_back(lf.slots[i].name);
  }
  return result;
}

struct SnapResult {
  LogicalForm lf;
  // Slots dropped because widening left them fully inside an earlier slot.
  std::vector<std::string> collapsed;
};

// For whitespace-tokenized languages, widens every span to the smallest run
// of whole whitespace-delimited tokens containing it and rewrites the value
// from the utterance. When widening makes spans overlap, the later span
// starts where the earlier one ends; a span left empty is dropped and named
// in `collapsed`. Span-less slots pass through untouched.
inline SnapResult snap_boundaries(const LogicalForm& lf, std::string_view utterance, const LanguageConfig& cfg) {
  SnapResult result{lf, {}};
  if (!cfg.whitespace_tokenized) return result;
  const std::u32string text = utf8::decode(utterance);

  std::vector<std::size_t> spanned;
  for (std::size_t i = 0; i < lf.slots.size(); ++i) {
    const auto& span = lf.slots[i].span;
    if (!span) continue;
    if (span->start >= span->end || span->end > text.size()) {
      throw Error(ErrorKind::kSpanOutOfRange, "slot '" + lf.slots[i].name + "' span outside utterance");
    }
    Span widened = *span;
    while (widened.start > 0 && !utf8::is_space(text[widened.start - 1])) --widened.start;
    while (widened.end < text.size() && !utf8::is_space(text[widened.end])) ++widened.end;
    result.lf.slots[i].span = widened;
    spanned.push_back(i);
  }
  std::stable_sort(spanned.begin(), spanned.end(), [&](std::size_t a, std::size_t b) {
    return result.lf.slots[a].span->start < result.lf.slots[b].span->start;
  });

  std::vector<bool> dropped(lf.slots.size(), false);
  std::size_t frontier = 0;
  for (std::size_t i : spanned) {
    Span& span = *result.lf.slots[i].span;
    if (span.start < frontier) {
      span.start = std::min(frontier, span.end);
      while (span.start < span.end && utf8::is_space(text[span.start])) ++span.start;
    }
    if (span.start >= span.end) {
      dropped[i] = true;
      continue;
    }
    result.lf.slots[i].value = utf8::encode(std::u32string_view(text).substr(span.start, span.size()));
    frontier = std::max(frontier, span.end);
  }

  std::vector<SlotSpan> kept;
  for (std::size_t i = 0; i < result.lf.slots.size(); ++i) {
    if (dropped[i]) {
      result.collapsed.push_back(result.lf.slots[i].name);
    } else {
      kept.push_back(std::move(result.lf.slots[i]));
    }
  }
  result.lf.slots = std::move(kept);
  return result;
}

struct CanonicalizeResult {
  LogicalForm lf;
  std::vector<std::string> unmatched;
  std::vector<std::string> collapsed;
};

// reorder_slots followed by snap_boundaries.
inline CanonicalizeResult canonicalize(const LogicalForm& lf, std::string_view utterance, const LanguageConfig& cfg) {
  ReorderResult reordered = reorder_slots(lf, utterance);
  SnapResult snapped = snap_boundaries(reordered.lf, utterance, cfg);
  return {std::move(snapped.lf), std::move(reordered.unmatched), std::move(snapped.collapsed)};
}

struct SyntheticExample {
  DatasetExample example;
  std::string compact;
};

struct Rejection {
  std::string id;
  std::string target_locale;
  std::string reason;

  friend bool operator==(const Rejection&, const Rejection&) = default;
};

struct ProjectionResult {
  std::vector<SyntheticExample> examples;
  std::vector<Rejection> rejections;
};

namespace detail {

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Either a synthetic example or the reason it was rejected.
inline std::pair<std::optional<SyntheticExample>, std::string> project_pair(const TranslationRecord& translation,
                                                                            const FillerOutput& filler,
                                                                            const LanguageConfig& cfg) {
  LogicalForm parsed;
  try {
    parsed = parse_compact(filler.lf);
  } catch (const Error& e) {
    return {std::nullopt, std::string(to_string(ErrorKind::kUnparseablePrediction)) + ": " + e.what()};
  }
  try {
    CanonicalizeResult canon = canonicalize(parsed, translation.text, cfg);
    if (!canon.unmatched.empty()) return {std::nullopt, "UnmatchedSlots: " + join(canon.unmatched, ",")};
    if (!canon.collapsed.empty()) return {std::nullopt, "CollapsedSlots: " + join(canon.collapsed, ",")};
    SyntheticExample out;
    out.example.id = translation.id;
    out.example.locale = translation.target_locale;
    out.example.partition = "train";
    out.example.intent = canon.lf.intent;
    out.example.utt = translation.text;
    out.example.annot_utt = serialize_annot(canon.lf, translation.text);
    for (const auto& slot : canon.lf.slots) out.example.slot_methods.push_back({slot.name, SlotMethod::kTranslation});
    out.compact = serialize_compact(canon.lf).str();
    return {std::move(out), {}};
  } catch (const Error& e) {
    return {std::nullopt, e.what()};
  }
}

}  // namespace detail

// Joins translations with filler outputs on (id, target locale) and turns
// each pair into a canonical synthetic training example. Pairs that cannot
// be used are reported as rejections; both outputs are sorted by key.
// Throws on duplicate keys and on locales missing from `configs`.
inline ProjectionResult project_corpus(std::span<const TranslationRecord> translations,
                                       std::span<const FillerOutput> fillers, const LanguageConfigMap& configs,
                                       unsigned threads = 1) {
  std::map<ExampleKey, const TranslationRecord*> by_translation;
  for (const auto& t : translations) {
    if (!by_translation.emplace(ExampleKey{t.id, t.target_locale}, &t).second) {
      throw Error(ErrorKind::kDuplicateKey, "translation (" + t.id + ", " + t.target_locale + ") appears twice");
    }
  }
  std::map<ExampleKey, const FillerOutput*> by_filler;
  for (const auto& f : fillers) {
    if (!by_filler.emplace(ExampleKey{f.id, f.target_locale}, &f).second) {
      throw Error(ErrorKind::kDuplicateKey, "filler output (" + f.id + ", " + f.target_locale + ") appears twice");
    }
  }

  struct Job {
    ExampleKey key;
    const TranslationRecord* translation = nullptr;
    const FillerOutput* filler = nullptr;
  };
  std::vector<Job> jobs;
  for (const auto& [key, t] : by_translation) {
    const auto it = by_filler.find(key);
    jobs.push_back({key, t, it == by_filler.end() ? nullptr : it->second});
  }
  for (const auto& [key, f] : by_filler) {
    if (!by_translation.contains(key)) jobs.push_back({key, nullptr, f});
  }
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) { return a.key < b.key; });
  for (const auto& job : jobs) {
    if (job.translation && job.filler) configs.at(job.key.second);
  }

  std::vector<std::pair<std::optional<SyntheticExample>, std::string>> outcomes(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    if (!job.filler) {
      outcomes[i] = {std::nullopt, "MissingJoinKey: no filler output for translation"};
    } else if (!job.translation) {
      outcomes[i] = {std::nullopt, "MissingJoinKey: no translation for filler output"};
    } else {
      outcomes[i] = detail::project_pair(*job.translation, *job.filler, configs.at(job.key.second));
    }
  });

  ProjectionResult result;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (outcomes[i].first) {
      result.examples.push_back(std::move(*outcomes[i].first));
    } else {
      result.rejections.push_back({jobs[i].key.first, jobs[i].key.second, std::move(outcomes[i].second)});
    }
  }
  return result;
}

}  // namespace massive_lf
