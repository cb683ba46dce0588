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

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "massive_lf/dataset.hpp"
#include "massive_lf/error.hpp"
#include "massive_lf/metrics.hpp"
#include "massive_lf/parallel.hpp"

// Verbatim comparison of machine translations against gold human
// translations, restricted to examples that were translated but not
// localized.
namespace massive_lf {

enum class NormalizationForm { kNFC, kNFD, kNFKC, kNFKD };

inline std::optional<NormalizationForm> parse_normalization_form(std::string_view s) {
  if (s == "NFC") return NormalizationForm::kNFC;
  if (s == "NFD") return NormalizationForm::kNFD;
  if (s == "NFKC") return NormalizationForm::kNFKC;
  if (s == "NFKD") return NormalizationForm::kNFKD;
  return std::nullopt;
}

namespace detail {

inline const icu::Normalizer2& normalizer(NormalizationForm form) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = nullptr;
  switch (form) {
    case NormalizationForm::kNFC: n = icu::Normalizer2::getNFCInstance(status); break;
    case NormalizationForm::kNFD: n = icu::Normalizer2::getNFDInstance(status); break;
    case NormalizationForm::kNFKC: n = icu::Normalizer2::getNFKCInstance(status); break;
    case NormalizationForm::kNFKD: n = icu::Normalizer2::getNFKDInstance(status); break;
  }
  if (U_FAILURE(status) || n == nullptr) {
    throw Error(ErrorKind::kInvariantViolation, std::string("ICU normalizer unavailable: ") + u_errorName(status));
  }
  return *n;
}

inline icu::UnicodeString drop_space_and_punct(const icu::UnicodeString& s) {
  icu::UnicodeString out;
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    if (!u_isUWhiteSpace(c) && !u_ispunct(c)) out.append(c);
    i = s.moveIndex32(i, 1);
  }
  return out;
}

}  // namespace detail

// Unicode normalization (NFKC by default), then removal of every White_Space
// character and every character in a P* general category. Case is kept.
// Repeated until stable, since deleting punctuation can expose combining
// sequences that normalize further.
inline std::string normalize_for_match(std::string_view text, NormalizationForm form = NormalizationForm::kNFKC) {
  const icu::Normalizer2& n = detail::normalizer(form);
  icu::UnicodeString current =
      icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  for (int round = 0; round < 4; ++round) {
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString next = detail::drop_space_and_punct(n.normalize(current, status));
    if (U_FAILURE(status)) {
      throw Error(ErrorKind::kInvariantViolation, std::string("normalization failed: ") + u_errorName(status));
    }
    const bool stable = next == current;
    current = std::move(next);
    if (stable) break;
  }
  std::string out;
  current.toUTF8String(out);
  return out;
}

struct LocaleMatch {
  std::size_t matches = 0;
  std::size_t candidates = 0;

  double pct() const {
    return candidates ? 100.0 * static_cast<double>(matches) / static_cast<double>(candidates) : 0.0;
  }
  friend bool operator==(const LocaleMatch&, const LocaleMatch&) = default;
};

// Unweighted means of per-locale percentages. Empty groups have no value.
struct MatchAggregates {
  std::optional<double> all;
  std::optional<double> non_indic;
  std::optional<double> indic;
};

struct MatchReport {
  std::map<std::string, LocaleMatch> per_locale;
  MatchAggregates aggregates;
  // Candidates with no machine translation; counted as non-matches.
  std::vector<ExampleKey> missing;
};

inline const std::set<std::string>& default_indic_locales() {
  static const std::set<std::string> kIndic = {"kn_IN", "te_IN", "bn_BD", "ta_IN", "hi_IN", "ml_IN"};
  return kIndic;
}

inline MatchAggregates aggregate_matches(const std::map<std::string, LocaleMatch>& per_locale,
                                         const std::set<std::string>& indic_locales) {
  auto mean = [&](auto&& keep) -> std::optional<double> {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& [locale, m] : per_locale) {
      if (m.candidates == 0 || !keep(locale)) continue;
      sum += m.pct();
      ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  };
  return {mean([](const std::string&) { return true; }),
          mean([&](const std::string& l) { return !indic_locales.contains(l); }),
          mean([&](const std::string& l) { return indic_locales.contains(l); })};
}

inline constexpr std::string_view kNmtSourceLocale = "en_US";

// Candidates are gold translated-only examples outside the source locale.
// `nmt` is keyed by (id, target_locale).
inline MatchReport match_report(std::span<const TranslationRecord> nmt, std::span<const DatasetExample> gold,
                                const std::set<std::string>& indic_locales,
                                NormalizationForm form = NormalizationForm::kNFKC, unsigned threads = 1) {
  std::map<ExampleKey, const TranslationRecord*> by_key;
  for (const auto& t : nmt) {
    if (!by_key.emplace(ExampleKey{t.id, t.target_locale}, &t).second) {
      throw Error(ErrorKind::kDuplicateKey, "NMT translation (" + t.id + ", " + t.target_locale + ") appears twice");
    }
  }
  std::vector<const DatasetExample*> candidates;
  for (const auto& example : gold) {
    if (example.locale != kNmtSourceLocale && !is_localized(example)) candidates.push_back(&example);
  }

  enum class Outcome : unsigned char { kMiss, kMatch, kMissing };
  std::vector<Outcome> outcomes(candidates.size(), Outcome::kMiss);
  parallel_for(candidates.size(), threads, [&](std::size_t i) {
    const DatasetExample& example = *candidates[i];
    const auto it = by_key.find({example.id, example.locale});
    if (it == by_key.end()) {
      outcomes[i] = Outcome::kMissing;
    } else if (normalize_for_match(it->second->text, form) == normalize_for_match(example.utt, form)) {
      outcomes[i] = Outcome::kMatch;
    }
  });

  MatchReport report;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto& m = report.per_locale[candidates[i]->locale];
    ++m.candidates;
    if (outcomes[i] == Outcome::kMatch) ++m.matches;
    if (outcomes[i] == Outcome::kMissing) report.missing.push_back({candidates[i]->id, candidates[i]->locale});
  }
  report.aggregates = aggregate_matches(report.per_locale, indic_locales);
  return report;
}

namespace detail {

inline std::string one_decimal(std::optional<double> v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *v);
  return buf;
}

}  // namespace detail

// locale, %, #matches, #candidates; highest match rate first, then a
// three-row footer with the aggregates.
inline std::string render_match_tsv(const MatchReport& report) {
  std::vector<std::pair<std::string, LocaleMatch>> rows(report.per_locale.begin(), report.per_locale.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second.pct() > b.second.pct(); });
  std::string out = "locale\tmatch_pct\tmatches\tcandidates\n";
  for (const auto& [locale, m] : rows) {
    out += locale + "\t" + detail::one_decimal(m.pct()) + "\t" + std::to_string(m.matches) + "\t" +
           std::to_string(m.candidates) + "\n";
  }
  out += "all_languages\t" + detail::one_decimal(report.aggregates.all) + "\t\t\n";
  out += "all_but_indic\t" + detail::one_decimal(report.aggregates.non_indic) + "\t\t\n";
  out += "indic\t" + detail::one_decimal(report.aggregates.indic) + "\t\t\n";
  return out;
}

}  // namespace massive_lf
