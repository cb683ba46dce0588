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

#include "massive_lf/translation_match.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "massive_lf/dataset_io.hpp"

namespace massive_lf {
namespace {

DatasetExample Gold(std::string id, std::string locale, std::string utt, bool localized = false) {
  DatasetExample ex;
  ex.id = std::move(id);
  ex.locale = std::move(locale);
  ex.partition = "train";
  ex.intent = "x";
  ex.utt = utt;
  ex.annot_utt = std::move(utt);
  if (localized) {
    ex.annot_utt = "[s : " + ex.utt + "]";
    ex.slot_methods = {{"s", SlotMethod::kLocalization}};
  }
  return ex;
}

TEST(NormalizeForMatch, DropsPunctuationAndSpaces) {
  EXPECT_EQ(normalize_for_match("¿Qué hora es?"), "Quéhoraes");
  EXPECT_EQ(normalize_for_match(""), "");
  EXPECT_EQ(normalize_for_match("a b　c"), "abc");
  EXPECT_EQ(normalize_for_match("「東京」、です。"), "東京です");
}

TEST(NormalizeForMatch, KeepsCase) { EXPECT_NE(normalize_for_match("Hola"), normalize_for_match("hola")); }

TEST(NormalizeForMatch, CompatibilityFolding) {
  EXPECT_EQ(normalize_for_match("ｆｕｌｌ"), "full");
  EXPECT_EQ(normalize_for_match("é"), "é");
  EXPECT_EQ(normalize_for_match("é", NormalizationForm::kNFD), "é");
}

TEST(NormalizeForMatch, Idempotent) {
  for (const char* s : {"¿Qué hora es?", "ｆｕｌｌ ｗｉｄｔｈ！", "a-́b", "ಬೆಳಿಗ್ಗೆ 7 ಗಂಟೆಗೆ", "x.̈y"}) {
    const std::string once = normalize_for_match(s);
    EXPECT_EQ(normalize_for_match(once), once) << s;
  }
}

TEST(MatchReport, CandidatesAreTranslatedOnlyNonSource) {
  const std::vector<DatasetExample> gold = {
      Gold("1", "en_US", "wake me up"),
      Gold("1", "es_ES", "despiértame"),
      Gold("2", "es_ES", "pon jazz", true),
      Gold("3", "es_ES", "¿qué hora es?"),
  };
  const std::vector<TranslationRecord> nmt = {
      {"1", "en_US", "es_ES", "Despiértame"},
      {"2", "en_US", "es_ES", "pon jazz"},
      {"3", "en_US", "es_ES", "qué hora es"},
  };
  const MatchReport r = match_report(nmt, gold, default_indic_locales());
  ASSERT_EQ(r.per_locale.size(), 1u);
  EXPECT_EQ(r.per_locale.at("es_ES"), (LocaleMatch{1, 2}));
  EXPECT_DOUBLE_EQ(*r.aggregates.all, 50.0);
  EXPECT_DOUBLE_EQ(*r.aggregates.non_indic, 50.0);
  EXPECT_FALSE(r.aggregates.indic.has_value());
  EXPECT_TRUE(r.missing.empty());
}

TEST(MatchReport, IdenticalTextsMatchEverywhere) {
  std::vector<DatasetExample> gold;
  std::vector<TranslationRecord> nmt;
  for (const char* locale : {"de_DE", "hi_IN", "ja_JP"}) {
    for (int i = 0; i < 5; ++i) {
      gold.push_back(Gold(std::to_string(i), locale, "text " + std::to_string(i)));
      nmt.push_back({std::to_string(i), "en_US", locale, "text " + std::to_string(i)});
    }
  }
  const MatchReport r = match_report(nmt, gold, default_indic_locales(), NormalizationForm::kNFKC, 3);
  for (const auto& [locale, m] : r.per_locale) EXPECT_EQ(m.pct(), 100.0) << locale;
  EXPECT_EQ(*r.aggregates.all, 100.0);
  EXPECT_EQ(*r.aggregates.indic, 100.0);
}

TEST(MatchReport, MissingTranslationCountsAsMiss) {
  const std::vector<DatasetExample> gold = {Gold("1", "fr_FR", "a"), Gold("2", "fr_FR", "b")};
  const std::vector<TranslationRecord> nmt = {{"1", "en_US", "fr_FR", "a"}};
  const MatchReport r = match_report(nmt, gold, default_indic_locales());
  EXPECT_EQ(r.per_locale.at("fr_FR"), (LocaleMatch{1, 2}));
  ASSERT_EQ(r.missing.size(), 1u);
  EXPECT_EQ(r.missing[0], (ExampleKey{"2", "fr_FR"}));
}

TEST(MatchReport, FixingATranslationNeverLowersTheRate) {
  const std::vector<DatasetExample> gold = {Gold("1", "fr_FR", "a"), Gold("2", "fr_FR", "b"), Gold("3", "fr_FR", "c")};
  std::vector<TranslationRecord> nmt = {{"1", "en_US", "fr_FR", "x"}, {"2", "en_US", "fr_FR", "y"},
                                        {"3", "en_US", "fr_FR", "z"}};
  double last = match_report(nmt, gold, {}).per_locale.at("fr_FR").pct();
  for (std::size_t i = 0; i < nmt.size(); ++i) {
    nmt[i].text = gold[i].utt;
    const double now = match_report(nmt, gold, {}).per_locale.at("fr_FR").pct();
    EXPECT_GE(now, last);
    last = now;
  }
  EXPECT_EQ(last, 100.0);
}

TEST(MatchReport, DuplicateTranslationIsFatal) {
  const std::vector<TranslationRecord> nmt = {{"1", "en_US", "fr_FR", "a"}, {"1", "en_US", "fr_FR", "b"}};
  EXPECT_THROW(match_report(nmt, std::vector<DatasetExample>{}, {}), Error);
}

TEST(MatchReport, KannadaCountsGiveExpectedRate) {
  // 6524 of 9497 candidates match.
  std::vector<DatasetExample> gold;
  std::vector<TranslationRecord> nmt;
  for (int i = 0; i < 9497; ++i) {
    const std::string id = std::to_string(i);
    gold.push_back(Gold(id, "kn_IN", "ವಾಕ್ಯ " + id));
    nmt.push_back({id, "en_US", "kn_IN", i < 6524 ? "ವಾಕ್ಯ " + id + "." : "ಬೇರೆ " + id});
  }
  const MatchReport r = match_report(nmt, gold, default_indic_locales());
  EXPECT_EQ(r.per_locale.at("kn_IN"), (LocaleMatch{6524, 9497}));
  EXPECT_NEAR(r.per_locale.at("kn_IN").pct(), 68.7, 0.05);
  const std::string expected_head = "locale\tmatch_pct\tmatches\tcandidates\nkn_IN\t68.7\t6524\t9497\n";
  EXPECT_EQ(render_match_tsv(r).substr(0, expected_head.size()), expected_head);
}

struct TableRow {
  std::string locale;
  double pct;
  LocaleMatch counts;
};

std::vector<TableRow> ReadTable() {
  std::ifstream in(std::filesystem::path(MASSIVE_LF_TEST_DATA) / "nmt_match_counts.tsv");
  std::vector<TableRow> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    TableRow row;
    fields >> row.locale >> row.pct >> row.counts.matches >> row.counts.candidates;
    rows.push_back(row);
  }
  return rows;
}

TEST(Aggregates, ReferenceCountsReproduce) {
  const auto rows = ReadTable();
  ASSERT_EQ(rows.size(), 50u);
  std::map<std::string, LocaleMatch> per_locale;
  for (const auto& row : rows) {
    EXPECT_NEAR(row.counts.pct(), row.pct, 0.05) << row.locale;
    per_locale[row.locale] = row.counts;
  }
  const MatchAggregates agg = aggregate_matches(per_locale, default_indic_locales());
  EXPECT_NEAR(*agg.all, 21.3, 0.05);
  EXPECT_NEAR(*agg.non_indic, 17.3, 0.05);
  EXPECT_NEAR(*agg.indic, 50.8, 0.05);

  // Unweighted mean, computed directly.
  double indic_sum = 0.0;
  for (const char* l : {"kn_IN", "te_IN", "bn_BD", "ta_IN", "hi_IN", "ml_IN"}) indic_sum += per_locale.at(l).pct();
  EXPECT_NEAR(*agg.indic, indic_sum / 6.0, 1e-12);
}

TEST(RenderMatchTsv, FooterWithEmptyGroups) {
  MatchReport r;
  r.per_locale["fr_FR"] = {1, 4};
  r.aggregates = aggregate_matches(r.per_locale, default_indic_locales());
  EXPECT_EQ(render_match_tsv(r),
            "locale\tmatch_pct\tmatches\tcandidates\n"
            "fr_FR\t25.0\t1\t4\n"
            "all_languages\t25.0\t\t\n"
            "all_but_indic\t25.0\t\t\n"
            "indic\tNA\t\t\n");
}

}  // namespace
}  // namespace massive_lf
