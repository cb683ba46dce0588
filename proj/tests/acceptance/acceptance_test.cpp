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

// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>

#include "massive_lf/massive_lf.hpp"
#include "support/properties.hpp"

namespace {

using namespace massive_lf;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int g_failed = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << what << " (" << detail << ")" << std::endl;
  if (!ok) ++g_failed;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Runs `body`, turning any exception into a failure description.
template <typename Body>
void criterion(int id, const std::string& what, Body&& body) {
  try {
    std::string detail;
    const bool ok = body(detail);
    report(id, ok, what, detail);
  } catch (const std::exception& e) {
    report(id, false, what, std::string("exception: ") + e.what());
  }
}

bool fixture_round_trip(std::string& detail) {
  const auto start = Clock::now();
  const auto gold = load_massive(fs::path(MASSIVE_LF_TEST_DATA) / "massive_fixture.jsonl");
  std::size_t ok = 0;
  std::set<std::string> locales;
  for (const auto& ex : gold) {
    locales.insert(ex.locale);
    if (from_compact(to_compact(ex).str(), ex.utt) == ex.annot_utt) ++ok;
  }
  const double elapsed = seconds_since(start);
  const bool scripts = locales.contains("zh_CN") && locales.contains("ja_JP") && locales.contains("th_TH");
  detail = std::to_string(ok) + "/" + std::to_string(gold.size()) + " records, " + std::to_string(locales.size()) +
           " locales, " + fmt(elapsed, 3) + " s";
  return gold.size() >= 200 && locales.size() >= 10 && scripts && ok == gold.size() && elapsed < 1.0;
}

bool spanish_conversion(std::string& detail) {
  DatasetExample ex;
  ex.id = "1";
  ex.locale = "es_ES";
  ex.partition = "train";
  ex.intent = "alarm_set";
  ex.utt = "despiértame a las nueve de la mañana el viernes";
  ex.annot_utt = "despiértame a las [time : nueve de la mañana] el [date : viernes]";
  const std::string expected = "[IN:ALARM_SET [SL:TIME nueve de la mañana ] [SL:DATE viernes ] ]";
  const std::string compact = to_compact(ex).str();
  const std::string back = from_compact(compact, ex.utt);
  detail = compact;
  return compact == expected && back == ex.annot_utt;
}

bool taf_worked_example(std::string& detail) {
  const std::string utt = "despiértame a las nueve el viernes";
  const LanguageConfig cfg = default_language_config().at("es_ES");
  const LogicalForm filler = parse_compact("[IN:ALARM_SET [SL:DATE el vier ] [SL:TIME nueve ] ]");

  const ReorderResult reordered = reorder_slots(filler, utt);
  const bool order_ok = reordered.lf.slots.size() == 2 && reordered.lf.slots[0].name == "time" &&
                        reordered.lf.slots[1].name == "date" && reordered.unmatched.empty();

  // Snapping alone on the bare "vier" slot.
  LogicalForm vier{"alarm_set", {{"date", "vier", Span{27, 31}}}};
  const SnapResult snapped = snap_boundaries(vier, utt, cfg);
  const bool snap_ok = serialize_compact(snapped.lf).str() == "[IN:ALARM_SET [SL:DATE viernes ] ]";

  const CanonicalizeResult once = canonicalize(filler, utt, cfg);
  const CanonicalizeResult twice = canonicalize(once.lf, utt, cfg);
  const std::string out = serialize_compact(once.lf).str();
  detail = out;
  return order_ok && snap_ok && out == "[IN:ALARM_SET [SL:TIME nueve ] [SL:DATE el viernes ] ]" &&
         twice.lf == once.lf && once.collapsed.empty();
}

struct TableRow {
  std::string locale;
  double pct = 0.0;
  LocaleMatch counts;
};

std::vector<TableRow> read_table() {
  std::ifstream in(fs::path(MASSIVE_LF_TEST_DATA) / "nmt_match_counts.tsv");
  if (!in) throw Error(ErrorKind::kIo, "cannot read nmt_match_counts.tsv");
  std::vector<TableRow> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    TableRow row;
    fields >> row.locale >> row.pct >> row.counts.matches >> row.counts.candidates;
    rows.push_back(row);
  }
  return rows;
}

bool translation_match(std::string& detail) {
  const auto start = Clock::now();
  const auto rows = read_table();
  std::map<std::string, LocaleMatch> per_locale;
  std::size_t within = 0;
  for (const auto& row : rows) {
    per_locale[row.locale] = row.counts;
    if (std::abs(row.counts.pct() - row.pct) <= 0.05) ++within;
  }
  const MatchAggregates agg = aggregate_matches(per_locale, default_indic_locales());
  const double elapsed = seconds_since(start);
  const bool aggs = agg.all && agg.non_indic && agg.indic && std::abs(*agg.all - 21.3) <= 0.1 &&
                    std::abs(*agg.non_indic - 17.3) <= 0.1 && std::abs(*agg.indic - 50.8) <= 0.1;

  // Record level for two locales: build gold and NMT files that realize the
  // counts and push them through match_report.
  std::vector<DatasetExample> gold;
  std::vector<TranslationRecord> nmt;
  for (const char* locale : {"kn_IN", "pt_PT"}) {
    const LocaleMatch& target = per_locale.at(locale);
    for (std::size_t i = 0; i < target.candidates; ++i) {
      DatasetExample ex;
      ex.id = std::to_string(i);
      ex.locale = locale;
      ex.partition = "train";
      ex.intent = "x";
      ex.utt = ex.annot_utt = "¡Frase número " + ex.id + "!";
      // Matches differ from gold only in spacing and punctuation.
      nmt.push_back({ex.id, "en_US", locale, i < target.matches ? "Frase  número " + ex.id : "Otra frase " + ex.id});
      gold.push_back(std::move(ex));
    }
  }
  const MatchReport records = match_report(nmt, gold, default_indic_locales());
  const bool record_level = records.per_locale.at("kn_IN") == per_locale.at("kn_IN") &&
                            records.per_locale.at("pt_PT") == per_locale.at("pt_PT");

  detail = std::to_string(within) + "/" + std::to_string(rows.size()) + " rows within 0.05; all=" + fmt(*agg.all) +
           " non_indic=" + fmt(*agg.non_indic) + " indic=" + fmt(*agg.indic) + "; " + fmt(elapsed, 3) +
           " s; record-level kn_IN/pt_PT " + (record_level ? "ok" : "MISMATCH");
  return rows.size() == 50 && within == rows.size() && aggs && elapsed < 1.0 && record_level;
}

// Planted-error fixture for the metrics.
enum class Plant { kCorrect, kSpacing, kIntentSwap, kSlotReorder, kValueCorruption, kMalformed };

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// Compact text assembled by hand, independent of the serializer.
std::string hand_compact(const std::string& intent, const std::vector<std::pair<std::string, std::string>>& slots) {
  std::string out = "[IN:" + upper(intent);
  for (const auto& [name, value] : slots) out += " [SL:" + upper(name) + " " + value + " ]";
  return out + " ]";
}

// Normalizes whitespace around brackets and labels only; slot values keep
// their interior spacing.
std::string normalize_structure(const std::string& s) {
  static const std::regex kBeforeOpen(R"(\s*\[)"), kAfterLabel(R"(\[(IN|SL):([^\s\[\]]+)\s+)"),
      kBeforeClose(R"(\s*\])"), kAfterClose(R"(\]\s*)");
  std::string out = std::regex_replace(s, kBeforeOpen, " [");
  out = std::regex_replace(out, kAfterLabel, "[$1:$2 ");
  out = std::regex_replace(out, kBeforeClose, " ]");
  out = std::regex_replace(out, kAfterClose, "]");
  const auto first = out.find_first_not_of(' ');
  if (first == std::string::npos) return {};
  return out.substr(first);
}

std::string oracle_intent(const std::string& text) {
  static const std::regex kIntent(R"((?:^|[\s\[\]])IN:([^\s\[\]]+))");
  std::smatch m;
  if (!std::regex_search(text, m, kIntent)) return {};
  std::string label = m[1];
  for (char& c : label) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return label;
}

bool metric_correctness(std::string& detail) {
  testgen::Rng rng(2022);
  std::vector<DatasetExample> gold;
  std::vector<PredictionRecord> preds;
  std::size_t oracle_ia = 0, oracle_em = 0, planted_ia = 0, planted_em = 0, implication_failures = 0;
  std::map<Plant, std::size_t> planted;
  while (gold.size() < 1000) {
    const auto a = testgen::annotated(rng, true);
    std::vector<std::pair<std::string, std::string>> slots;
    for (const auto& s : a.lf.slots) slots.emplace_back(s.name, s.value);

    Plant plant = static_cast<Plant>(testgen::uniform(rng, 0, 5));
    if (plant == Plant::kSlotReorder && slots.size() < 2) plant = Plant::kCorrect;
    if (plant == Plant::kValueCorruption && slots.empty()) plant = Plant::kSpacing;

    const std::string truth = hand_compact(a.lf.intent, slots);
    std::string pred;
    bool expect_ia = true, expect_em = false;
    switch (plant) {
      case Plant::kCorrect: pred = truth; expect_em = true; break;
      case Plant::kSpacing: {
        auto gap = [&] { return std::string(testgen::uniform(rng, 1, 3), ' '); };
        pred = gap() + "[IN:" + upper(a.lf.intent) + gap();
        for (const auto& [name, value] : slots) pred += "[SL:" + upper(name) + gap() + value + gap() + "]" + gap();
        pred += "]";
        expect_em = true;
        break;
      }
      case Plant::kIntentSwap: pred = hand_compact(a.lf.intent + "_other", slots); expect_ia = false; break;
      case Plant::kSlotReorder: {
        auto swapped = slots;
        std::swap(swapped[0], swapped[1]);
        pred = hand_compact(a.lf.intent, swapped);
        break;
      }
      case Plant::kValueCorruption: {
        auto corrupted = slots;
        corrupted[testgen::uniform(rng, 0, slots.size() - 1)].second += "x";
        pred = hand_compact(a.lf.intent, corrupted);
        break;
      }
      case Plant::kMalformed: pred = truth.substr(0, truth.size() - 1); break;
    }
    ++planted[plant];

    DatasetExample ex;
    ex.id = std::to_string(gold.size());
    ex.locale = gold.size() % 2 ? "es_ES" : "th_TH";
    ex.partition = "test";
    ex.intent = a.lf.intent;
    ex.utt = a.utt;
    ex.annot_utt = a.annot;

    const bool o_em = normalize_structure(pred) == normalize_structure(truth);
    const bool o_ia = oracle_intent(pred) == ex.intent;
    oracle_em += o_em;
    oracle_ia += o_ia;
    planted_em += expect_em;
    planted_ia += expect_ia;
    if (exact_match(pred, to_compact(ex)) && !intent_match(pred, ex.intent)) ++implication_failures;

    preds.push_back({ex.id, ex.locale, pred});
    gold.push_back(std::move(ex));
  }
  const EvalReport r = evaluate(preds, gold);
  detail = "n=" + std::to_string(r.overall.n) + " IA " + std::to_string(r.overall.ia_correct) + " vs oracle " +
           std::to_string(oracle_ia) + ", EM " + std::to_string(r.overall.em_correct) + " vs oracle " +
           std::to_string(oracle_em) + ", planted types " + std::to_string(planted.size()) +
           ", EM=>IA violations " + std::to_string(implication_failures);
  return r.overall.n == 1000 && r.overall.ia_correct == oracle_ia && r.overall.em_correct == oracle_em &&
         oracle_ia == planted_ia && oracle_em == planted_em && planted.size() == 6 && implication_failures == 0;
}

bool transfer_analysis(std::string& detail) {
  testgen::Rng rng(51);
  std::uniform_real_distribution<double> cell(0.0, 1.0);
  double worst = 0.0;
  bool duality = true;
  for (std::size_t k : {std::size_t{5}, kMassiveLocales.size()}) {
    std::vector<std::string> langs(kMassiveLocales.begin(), kMassiveLocales.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<double> cells(k * k);
    for (double& v : cells) v = cell(rng);
    const TransferMatrix m(langs, cells);
    std::map<std::string, double> rows, cols;
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        rows[langs[r]] += cells[r * k + c];
        cols[langs[c]] += cells[r * k + c];
      }
    }
    for (const auto& s : donor_scores(m)) worst = std::max(worst, std::abs(s.score - rows.at(s.locale)));
    for (const auto& s : receiver_scores(m)) worst = std::max(worst, std::abs(s.score - cols.at(s.locale)));
    duality = duality && donor_scores(m) == receiver_scores(m.transpose()) &&
              receiver_scores(m) == donor_scores(m.transpose());
  }
  const std::size_t n = kMassiveLocales.size();
  std::vector<double> identity(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) identity[i * n + i] = 1.0;
  // List the languages in reverse so the ranking has to sort them.
  std::vector<std::string> langs(kMassiveLocales.rbegin(), kMassiveLocales.rend());
  const TransferMatrix id(langs, identity);
  std::vector<std::string> sorted = langs;
  std::sort(sorted.begin(), sorted.end());
  bool lexicographic = true;
  const auto donors = donor_scores(id), receivers = receiver_scores(id);
  for (std::size_t i = 0; i < n; ++i) {
    lexicographic = lexicographic && donors[i].locale == sorted[i] && receivers[i].locale == sorted[i];
  }
  detail = "max |score - brute force| = " + std::to_string(worst) + ", duality " + (duality ? "exact" : "broken") +
           ", identity ranking " + (lexicographic ? "lexicographic" : "out of order");
  return worst <= 1e-12 && duality && lexicographic;
}

bool property_suites(std::string& detail) {
  std::size_t passed = 0, min_cases = SIZE_MAX;
  std::string failures;
  const auto all = testprop::all_properties();
  for (const auto& property : all) {
    const auto r = property();
    min_cases = std::min(min_cases, r.cases);
    if (r.ok()) {
      ++passed;
    } else {
      failures += "; " + r.name + ": " + std::to_string(r.failures) + " failure(s) in " + std::to_string(r.cases) +
                  " case(s) " + r.first_failure;
    }
  }
  detail = std::to_string(passed) + "/" + std::to_string(all.size()) + " properties, min " +
           std::to_string(min_cases) + " cases each" + failures;
  return passed == all.size() && min_cases >= testprop::kCases;
}

bool scope_statement(std::string& detail) {
  // Model accuracy numbers need fine-tuned large models; the toolkit instead
  // scores prediction files produced elsewhere. Check that this is stated in
  // the README and that the file-based path works.
  std::ifstream in(fs::path(MASSIVE_LF_SOURCE_DIR) / "README.md");
  std::stringstream ss;
  ss << in.rdbuf();
  const bool stated = ss.str().find("Not reproduced here") != std::string::npos;
  std::istringstream preds(R"({"id": "1", "locale": "es_ES", "lf": "[IN:GREET ]"})");
  std::vector<DatasetExample> gold(1);
  gold[0].id = "1";
  gold[0].locale = "es_ES";
  gold[0].partition = "test";
  gold[0].intent = "greet";
  gold[0].utt = gold[0].annot_utt = "hola";
  const EvalReport r = evaluate(load_predictions(preds, "inline"), gold);
  detail = std::string("model accuracy tables, transfer heatmap values and intent accuracy tables require "
                       "fine-tuning large pretrained models and are out of scope; external prediction files "
                       "are scored instead; README statement ") +
           (stated ? "present" : "missing");
  return stated && r.overall.em() == 1.0;
}

}  // namespace

int main() {
  criterion(1, "fixture corpus round trip annot_utt -> compact -> annot_utt", fixture_round_trip);
  criterion(2, "Spanish alarm example converts and inverts exactly", spanish_conversion);
  criterion(3, "Translate-and-Fill example: snap, reorder, idempotent canonicalize", taf_worked_example);
  criterion(4, "NMT match table and aggregates reproduce", translation_match);
  criterion(5, "IA/EM equal a brute-force oracle on 1000 planted-error examples", metric_correctness);
  criterion(6, "transfer scores equal brute-force sums; duality; identity ranking", transfer_analysis);
  criterion(7, "property suites with at least 1000 cases each", property_suites);
  criterion(8, "scope: model accuracy results are not reproduced at desk scale", scope_statement);
  return g_failed == 0 ? 0 : 1;
}
