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
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "massive_lf/error.hpp"
#include "massive_lf/utf8.hpp"

// Flat intent/slot logical forms in two textual encodings:
//
//   compact:  [IN:ALARM_SET [SL:TIME nueve de la mañana ] [SL:DATE viernes ] ]
//   inline:   despiértame a las [time : nueve de la mañana] el [date : viernes]
//
// Labels are held lowercase and uppercased only when writing the compact
// form. Exactly one IN: root is accepted; nested intents are rejected.
namespace massive_lf {

// Half-open range [start, end) in Unicode scalar positions.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool overlaps(const Span& other) const { return start < other.end && other.start < end; }
  bool contains(const Span& other) const { return start <= other.start && other.end <= end; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct SlotSpan {
  std::string name;
  std::string value;
  std::optional<Span> span;

  friend bool operator==(const SlotSpan&, const SlotSpan&) = default;
};

struct LogicalForm {
  std::string intent;
  std::vector<SlotSpan> slots;

  friend bool operator==(const LogicalForm&, const LogicalForm&) = default;
};

// Equality of intent and (name, value) sequence, ignoring spans.
inline bool same_structure(const LogicalForm& a, const LogicalForm& b) {
  if (a.intent != b.intent || a.slots.size() != b.slots.size()) return false;
  for (std::size_t i = 0; i < a.slots.size(); ++i) {
    if (a.slots[i].name != b.slots[i].name || a.slots[i].value != b.slots[i].value) return false;
  }
  return true;
}

inline LogicalForm without_spans(LogicalForm lf) {
  for (auto& slot : lf.slots) slot.span.reset();
  return lf;
}

// Canonical compact serialization; the comparison key for exact match.
class CanonicalText {
 public:
  const std::string& str() const { return text_; }
  friend bool operator==(const CanonicalText&, const CanonicalText&) = default;

 private:
  explicit CanonicalText(std::string text) : text_(std::move(text)) {}
  friend CanonicalText serialize_compact(const LogicalForm& lf);

  std::string text_;
};

struct AnnotatedUtterance {
  std::string utterance;
  LogicalForm lf;

  friend bool operator==(const AnnotatedUtterance&, const AnnotatedUtterance&) = default;
};

namespace detail {

inline bool is_bracket(char32_t c) { return c == U'[' || c == U']'; }

inline std::string ascii_lower(std::string s) {
  for (auto& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

inline std::string ascii_upper(std::string s) {
  for (auto& c : s) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return s;
}

inline bool valid_label(std::string_view label) {
  if (label.empty()) return false;
  const auto cps = utf8::decode(label);
  return std::none_of(cps.begin(), cps.end(),
                      [](char32_t c) { return utf8::is_space(c) || is_bracket(c) || c == U':'; });
}

inline void validate_value(const SlotSpan& slot) {
  if (slot.value.empty()) {
    throw Error(ErrorKind::kEmptySlotValue, "slot '" + slot.name + "' has an empty value");
  }
  const auto cps = utf8::decode(slot.value);
  if (utf8::has_outer_space(cps)) {
    throw Error(ErrorKind::kInvariantViolation,
                "slot '" + slot.name + "' value has leading or trailing whitespace");
  }
  if (std::any_of(cps.begin(), cps.end(), is_bracket)) {
    throw Error(ErrorKind::kUnexpectedBracket,
                "slot '" + slot.name + "' value contains a bracket: " + slot.value);
  }
}

class CompactParser {
 public:
  // In signature mode every slot must be value-free ("[SL:TIME ]").
  CompactParser(std::u32string text, bool signature) : text_(std::move(text)), signature_(signature) {}

  LogicalForm parse() {
    check_balance();
    skip_space();
    if (!consume(U"[IN:")) {
      throw Error(ErrorKind::kMissingIntentRoot, "expected '[IN:' at position " + std::to_string(pos_));
    }
    LogicalForm lf;
    lf.intent = read_label("intent");
    for (;;) {
      skip_space();
      if (at_end()) throw Error(ErrorKind::kUnbalancedBrackets, "intent is never closed");
      const char32_t c = text_[pos_];
      if (c == U']') {
        ++pos_;
        break;
      }
      if (c != U'[') {
        throw Error(ErrorKind::kUnexpectedText, "text outside a slot at position " + std::to_string(pos_));
      }
      if (looking_at(U"[IN:")) {
        throw Error(ErrorKind::kNestedIntent, "nested intent at position " + std::to_string(pos_));
      }
      if (!consume(U"[SL:")) {
        throw Error(ErrorKind::kUnexpectedBracket, "expected '[SL:' at position " + std::to_string(pos_));
      }
      lf.slots.push_back(read_slot());
    }
    skip_space();
    if (!at_end()) {
      throw Error(ErrorKind::kUnexpectedText, "content after the closing bracket at position " +
                                                  std::to_string(pos_));
    }
    return lf;
  }

 private:
  void check_balance() const {
    const auto open = std::count(text_.begin(), text_.end(), U'[');
    const auto close = std::count(text_.begin(), text_.end(), U']');
    if (open != close) {
      throw Error(ErrorKind::kUnbalancedBrackets, std::to_string(open) + " '[' vs " +
                                                      std::to_string(close) + " ']'");
    }
  }

  bool at_end() const { return pos_ >= text_.size(); }

  void skip_space() {
    while (!at_end() && utf8::is_space(text_[pos_])) ++pos_;
  }

  bool looking_at(std::u32string_view token) const {
    return std::u32string_view(text_).substr(pos_).starts_with(token);
  }

  bool consume(std::u32string_view token) {
    if (!looking_at(token)) return false;
    pos_ += token.size();
    return true;
  }

  std::string read_label(const char* what) {
    const std::size_t begin = pos_;
    while (!at_end() && !utf8::is_space(text_[pos_]) && !is_bracket(text_[pos_])) ++pos_;
    if (pos_ == begin) {
      throw Error(ErrorKind::kMalformedLabel,
                  std::string("empty ") + what + " label at position " + std::to_string(begin));
    }
    const auto label = std::u32string_view(text_).substr(begin, pos_ - begin);
    if (label.find(U':') != std::u32string_view::npos) {
      throw Error(ErrorKind::kMalformedLabel,
                  std::string(what) + " label contains ':' at position " + std::to_string(begin));
    }
    return ascii_lower(utf8::encode(label));
  }

  SlotSpan read_slot() {
    SlotSpan slot;
    slot.name = read_label("slot");
    const std::size_t begin = pos_;
    while (!at_end() && text_[pos_] != U']') {
      if (text_[pos_] == U'[') {
        if (looking_at(U"[IN:")) {
          throw Error(ErrorKind::kNestedIntent, "nested intent at position " + std::to_string(pos_));
        }
        throw Error(ErrorKind::kUnexpectedBracket,
                    "'[' inside the value of slot '" + slot.name + "'");
      }
      ++pos_;
    }
    if (at_end()) throw Error(ErrorKind::kUnbalancedBrackets, "slot '" + slot.name + "' is never closed");
    const auto value = utf8::trim(std::u32string_view(text_).substr(begin, pos_ - begin));
    ++pos_;  // ']'
    if (signature_) {
      if (!value.empty()) {
        throw Error(ErrorKind::kUnexpectedText, "signature slot '" + slot.name + "' carries a value");
      }
      return slot;
    }
    if (value.empty()) {
      throw Error(ErrorKind::kEmptySlotValue, "slot '" + slot.name + "' has no value");
    }
    slot.value = utf8::encode(value);
    return slot;
  }

  std::u32string text_;
  bool signature_ = false;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Throws Error if `lf` breaks a LogicalForm or SlotSpan invariant. Spans, when
// present on every slot, must be pairwise disjoint.
inline void validate(const LogicalForm& lf) {
  if (!detail::valid_label(lf.intent)) {
    throw Error(ErrorKind::kMalformedLabel, "invalid intent label '" + lf.intent + "'");
  }
  for (const auto& slot : lf.slots) {
    if (!detail::valid_label(slot.name)) {
      throw Error(ErrorKind::kMalformedLabel, "invalid slot label '" + slot.name + "'");
    }
    detail::validate_value(slot);
  }
  const bool all_spans =
      std::all_of(lf.slots.begin(), lf.slots.end(), [](const SlotSpan& s) { return s.span.has_value(); });
  if (!all_spans) return;
  for (std::size_t i = 0; i < lf.slots.size(); ++i) {
    for (std::size_t j = i + 1; j < lf.slots.size(); ++j) {
      if (lf.slots[i].span->overlaps(*lf.slots[j].span)) {
        throw Error(ErrorKind::kOverlappingSpans,
                    "slots '" + lf.slots[i].name + "' and '" + lf.slots[j].name + "' overlap");
      }
    }
  }
}

// Accepts any text; returns a span-less LogicalForm or throws a typed Error.
inline LogicalForm parse_compact(std::string_view text) {
  return detail::CompactParser(utf8::decode(text), /*signature=*/false).parse();
}

inline CanonicalText serialize_compact(const LogicalForm& lf) {
  validate(lf);
  std::string out = "[IN:" + detail::ascii_upper(lf.intent);
  for (const auto& slot : lf.slots) {
    out += " [SL:";
    out += detail::ascii_upper(slot.name);
    out += ' ';
    out += slot.value;
    out += " ]";
  }
  out += " ]";
  return CanonicalText(std::move(out));
}

// Parses and re-serializes; throws on unparseable text.
inline CanonicalText canonical_form(std::string_view text) { return serialize_compact(parse_compact(text)); }

// Strips "[name : value]" wrappers. Slots receive spans into the recovered
// utterance, in textual order. Whitespace inside the brackets around the
// value is syntax and does not reach the utterance.
inline AnnotatedUtterance parse_annot(std::string_view annot_utt, std::string_view intent) {
  const std::u32string text = utf8::decode(annot_utt);
  AnnotatedUtterance result;
  result.lf.intent = detail::ascii_lower(std::string(intent));
  if (!detail::valid_label(result.lf.intent)) {
    throw Error(ErrorKind::kMalformedLabel, "invalid intent label '" + std::string(intent) + "'");
  }
  std::u32string utterance;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t c = text[pos];
    if (c == U']') {
      throw Error(ErrorKind::kMalformedAnnotation, "unmatched ']' at position " + std::to_string(pos));
    }
    if (c != U'[') {
      utterance.push_back(c);
      ++pos;
      continue;
    }
    const std::size_t close = text.find(U']', pos + 1);
    const std::size_t next_open = text.find(U'[', pos + 1);
    if (close == std::u32string::npos || next_open < close) {
      throw Error(ErrorKind::kMalformedAnnotation, "unclosed '[' at position " + std::to_string(pos));
    }
    const std::u32string_view inner = std::u32string_view(text).substr(pos + 1, close - pos - 1);
    const std::size_t colon = inner.find(U':');
    if (colon == std::u32string_view::npos) {
      throw Error(ErrorKind::kMalformedAnnotation,
                  "missing ' : ' separator in annotation at position " + std::to_string(pos));
    }
    const auto name = utf8::trim(inner.substr(0, colon));
    if (name.empty() || std::any_of(name.begin(), name.end(), utf8::is_space)) {
      throw Error(ErrorKind::kMalformedAnnotation, "bad slot name in annotation at position " +
                                                       std::to_string(pos));
    }
    const auto value = utf8::trim(inner.substr(colon + 1));
    SlotSpan slot;
    slot.name = detail::ascii_lower(utf8::encode(name));
    if (value.empty()) {
      throw Error(ErrorKind::kEmptySlotValue, "slot '" + slot.name + "' has an empty value");
    }
    slot.value = utf8::encode(value);
    slot.span = Span{utterance.size(), utterance.size() + value.size()};
    utterance.append(value);
    result.lf.slots.push_back(std::move(slot));
    pos = close + 1;
  }
  result.utterance = utf8::encode(utterance);
  return result;
}

// Inverse of parse_annot: wraps every span of `lf` as "[name : value]".
inline std::string serialize_annot(const LogicalForm& lf, std::string_view utterance) {
  const std::u32string text = utf8::decode(utterance);
  if (std::any_of(text.begin(), text.end(), detail::is_bracket)) {
    throw Error(ErrorKind::kMalformedAnnotation, "utterance contains a bracket and cannot be annotated");
  }
  std::vector<std::size_t> order(lf.slots.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (const auto& slot : lf.slots) {
    if (!detail::valid_label(slot.name)) {
      throw Error(ErrorKind::kMalformedLabel, "invalid slot label '" + slot.name + "'");
    }
    if (!slot.span) throw Error(ErrorKind::kMissingSpan, "slot '" + slot.name + "' has no span");
    const Span& s = *slot.span;
    if (s.start >= s.end || s.end > text.size()) {
      throw Error(ErrorKind::kSpanOutOfRange, "slot '" + slot.name + "' span [" + std::to_string(s.start) +
                                                  "," + std::to_string(s.end) + ") outside utterance of length " +
                                                  std::to_string(text.size()));
    }
    if (utf8::encode(std::u32string_view(text).substr(s.start, s.size())) != slot.value) {
      throw Error(ErrorKind::kSpanValueMismatch, "slot '" + slot.name + "' span does not cover '" +
                                                     slot.value + "'");
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lf.slots[a].span->start < lf.slots[b].span->start;
  });
  std::string out;
  std::size_t cursor = 0;
  for (std::size_t idx : order) {
    const auto& slot = lf.slots[idx];
    if (slot.span->start < cursor) {
      throw Error(ErrorKind::kOverlappingSpans, "slot '" + slot.name + "' overlaps a previous slot");
    }
    out += utf8::encode(std::u32string_view(text).substr(cursor, slot.span->start - cursor));
    out += '[';
    out += slot.name;
    out += " : ";
    out += slot.value;
    out += ']';
    cursor = slot.span->end;
  }
  out += utf8::encode(std::u32string_view(text).substr(cursor));
  return out;
}

}  // namespace massive_lf
