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

// massive-lf: file-level front end for the logical-form toolkit.
//
// Exit status: 0 success, 1 validation error, 2 I/O error.

#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "massive_lf/massive_lf.hpp"

namespace fs = std::filesystem;
using namespace massive_lf;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

void warn(const std::string& message) { std::cerr << "warning: " << message << "\n"; }

LoadOptions load_options() { return LoadOptions{warn}; }

// Tabs, newlines and backslashes are escaped so every pair stays on one line.
std::string tsv_field(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out;
}

nlohmann::ordered_json reject_json(const std::string& id, const std::string& locale_field, const std::string& locale,
                                   const std::string& reason) {
  nlohmann::ordered_json j;
  j["id"] = id;
  j[locale_field] = locale;
  j["reason"] = reason;
  return j;
}

std::map<ExampleKey, const DatasetExample*> index_gold(const std::vector<DatasetExample>& gold) {
  std::map<ExampleKey, const DatasetExample*> index;
  for (const auto& ex : gold) {
    if (!index.emplace(ExampleKey{ex.id, ex.locale}, &ex).second) {
      throw Error(ErrorKind::kDuplicateKey, "gold example (" + ex.id + ", " + ex.locale + ") appears twice");
    }
  }
  return index;
}

struct Options {
  unsigned threads = default_thread_count();

  std::string input, output, rejects, predictions, gold, translations, filler, lang_config, report, format;
  std::string partition = "test";
  std::string match_partition = "train";
  std::string reports_dir, rankings, nmt, norm_form = "NFKC";
  std::string indic = "kn_IN,te_IN,bn_BD,ta_IN,hi_IN,ml_IN";
  bool per_intent = false;
  bool split_localization = false;
  bool exclude_self = false;
};

int run_convert(const Options& o) {
  const auto gold = load_massive(o.input, load_options());
  std::string out = "id\tlocale\tutt\tlf\n";
  for (const auto& ex : gold) {
    out += tsv_field(ex.id) + "\t" + tsv_field(ex.locale) + "\t" + tsv_field(ex.utt) + "\t" +
           tsv_field(to_compact(ex).str()) + "\n";
  }
  atomic_write(o.output, out);
  std::cerr << "converted " << gold.size() << " example(s)\n";
  return 0;
}

int run_invert(const Options& o) {
  const auto gold = load_massive(o.gold, load_options());
  const auto predictions = load_predictions(fs::path(o.predictions));
  const auto index = index_gold(gold);
  std::string out, rejects;
  std::size_t failures = 0;
  for (const auto& p : predictions) {
    const auto it = index.find({p.id, p.locale});
    std::string reason;
    if (it == index.end()) {
      reason = std::string(to_string(ErrorKind::kUnknownPredictionId)) + ": no gold utterance";
    } else {
      try {
        nlohmann::ordered_json j;
        j["id"] = p.id;
        j["locale"] = p.locale;
        j["annot_utt"] = from_compact(p.lf, it->second->utt);
        out += jsonl_line(j);
        continue;
      } catch (const Error& e) {
        reason = e.what();
      }
    }
    ++failures;
    rejects += jsonl_line(reject_json(p.id, "locale", p.locale, reason));
  }
  atomic_write(o.output, out);
  if (!o.rejects.empty()) atomic_write(o.rejects, rejects);
  std::cerr << "inverted " << predictions.size() - failures << " prediction(s), " << failures << " failure(s)\n";
  return 0;
}

int run_signature(const Options& o) {
  const auto gold = load_massive(o.input, load_options());
  std::string out;
  for (const auto& ex : gold) {
    nlohmann::ordered_json j;
    j["id"] = ex.id;
    j["locale"] = ex.locale;
    j["utt"] = ex.utt;
    j["signature"] = make_signature(parse_annot(ex.annot_utt, ex.intent).lf).text();
    out += jsonl_line(j);
  }
  atomic_write(o.output, out);
  return 0;
}

LanguageConfigMap language_config(const Options& o) {
  if (o.lang_config.empty()) return default_language_config();
  return load_language_config(o.lang_config);
}

int run_canonicalize(const Options& o) {
  const auto translations = load_translations(fs::path(o.translations));
  const auto fillers = load_filler_outputs(fs::path(o.filler));
  const auto result = project_corpus(translations, fillers, language_config(o), o.threads);
  std::string out, rejects;
  for (const auto& s : result.examples) {
    auto j = to_json(s.example);
    j["lf"] = s.compact;
    out += jsonl_line(j);
  }
  for (const auto& r : result.rejections) {
    rejects += jsonl_line(reject_json(r.id, "target_locale", r.target_locale, r.reason));
  }
  atomic_write(o.output, out);
  atomic_write(o.rejects, rejects);
  std::cerr << "emitted " << result.examples.size() << " synthetic example(s), " << result.rejections.size()
            << " rejection(s)\n";
  return 0;
}

ReportFormat report_format(const Options& o) {
  std::string f = o.format;
  if (f.empty()) {
    const auto ext = fs::path(o.report).extension().string();
    f = ext == ".tsv" ? "tsv" : ext == ".txt" ? "text" : "json";
  }
  if (f == "json") return ReportFormat::kJson;
  if (f == "tsv") return ReportFormat::kTsv;
  if (f == "text") return ReportFormat::kText;
  throw Error(ErrorKind::kInvariantViolation, "unknown report format '" + f + "'");
}

int run_evaluate(const Options& o) {
  const auto all_gold = load_massive(o.gold, load_options());
  const auto gold = filter_partition(all_gold, o.partition);
  const auto predictions = load_predictions(fs::path(o.predictions));
  const auto report = evaluate(predictions, gold, o.threads);
  const ReportOptions sections{o.per_intent, o.split_localization};
  if (!o.report.empty()) write_report(report, o.report, report_format(o), sections);
  std::cout << report_to_text(report, sections);
  return 0;
}

int run_transfer_map(const Options& o) {
  std::map<std::string, EvalReport> reports;
  if (!fs::is_directory(o.reports_dir)) throw Error(ErrorKind::kIo, o.reports_dir + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.reports_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    reports.emplace(normalize_locale(path.stem().string()), read_report_json(path));
  }
  const TransferMatrix m = build_matrix(reports);
  atomic_write(o.output, render_heatmap_data(m));
  if (!o.rankings.empty()) {
    atomic_write(o.rankings, render_rankings(donor_scores(m, o.exclude_self), receiver_scores(m, o.exclude_self)));
  }
  std::cerr << "transfer matrix over " << m.size() << " language(s)\n";
  return 0;
}

int run_nmt_match(const Options& o) {
  const auto form = parse_normalization_form(o.norm_form);
  if (!form) throw Error(ErrorKind::kInvariantViolation, "unknown normalization form '" + o.norm_form + "'");
  std::set<std::string> indic;
  for (auto& locale : detail::split(o.indic, ',')) {
    if (!locale.empty()) indic.insert(normalize_locale(locale));
  }
  const auto all_gold = load_massive(o.gold, load_options());
  const auto gold = filter_partition(all_gold, o.match_partition);
  const auto nmt = load_translations(fs::path(o.nmt));
  const auto report = match_report(nmt, gold, indic, *form, o.threads);
  if (report.per_locale.contains("pt_PT")) {
    warn("pt_PT gold is compared as-is; NMT output is usually pt_BR, which lowers its match rate");
  }
  if (!report.missing.empty()) {
    warn(std::to_string(report.missing.size()) + " candidate(s) have no NMT translation (" +
         std::string(to_string(ErrorKind::kMissingNmtTranslation)) + "); counted as non-matches");
  }
  atomic_write(o.output, render_match_tsv(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"massive-lf: logical-form conversion, Translate-and-Fill post-processing and evaluation"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  auto* convert = app.add_subcommand("convert", "Emit (id, locale, utt, compact LF) training pairs as TSV");
  convert->add_option("--input", o.input, "MASSIVE JSONL")->required();
  convert->add_option("--output", o.output, "Output TSV")->required();

  auto* invert = app.add_subcommand("invert", "Map predicted compact LFs back to inline annotations");
  invert->add_option("--predictions", o.predictions, "Prediction JSONL {id, locale, lf}")->required();
  invert->add_option("--gold", o.gold, "MASSIVE JSONL providing utterances")->required();
  invert->add_option("--output", o.output, "Output JSONL {id, locale, annot_utt}")->required();
  invert->add_option("--rejects", o.rejects, "Failures as JSONL {id, locale, reason}");

  auto* signature = app.add_subcommand("signature", "Emit value-free LF signatures for a filler model");
  signature->add_option("--input", o.input, "MASSIVE JSONL")->required();
  signature->add_option("--output", o.output, "Output JSONL {id, locale, utt, signature}")->required();

  auto* canon = app.add_subcommand("canonicalize", "Build synthetic training data from translations and filler outputs");
  canon->add_option("--translations", o.translations, "Translation JSONL {id, source_locale, target_locale, text}")->required();
  canon->add_option("--filler", o.filler, "Filler output JSONL {id, target_locale, lf}")->required();
  canon->add_option("--lang-config", o.lang_config, "Language config JSON (default: built-in 51-locale table)")
      ->envname("MASSIVE_LF_LANG_CONFIG");
  canon->add_option("--output", o.output, "Synthetic MASSIVE-style JSONL")->required();
  canon->add_option("--rejects", o.rejects, "Rejections JSONL {id, target_locale, reason}")->required();

  auto* eval = app.add_subcommand("evaluate", "Intent accuracy and exact match of predictions against gold");
  eval->add_option("--predictions", o.predictions, "Prediction JSONL {id, locale, lf}")->required();
  eval->add_option("--gold", o.gold, "MASSIVE JSONL")->required();
  eval->add_option("--partition", o.partition, "Gold partition to evaluate")
      ->capture_default_str()
      ->check(CLI::IsMember({"train", "dev", "test"}));
  eval->add_option("--report", o.report, "Report file");
  eval->add_option("--format", o.format, "json, tsv or text (default: from the report extension)")
      ->check(CLI::IsMember({"json", "tsv", "text"}));
  eval->add_flag("--per-intent", o.per_intent, "Include per-intent accuracy, lowest first");
  eval->add_flag("--split-localization", o.split_localization, "Include localized vs translated-only EM");

  auto* transfer = app.add_subcommand("transfer-map", "Donor x receiver EM matrix and rankings");
  transfer->add_option("--reports", o.reports_dir, "Directory of <donor_locale>.json evaluation reports")
      ->required();
  transfer->add_option("--output", o.output, "Matrix CSV")->required();
  transfer->add_option("--rankings", o.rankings, "Rankings TSV (role, rank, locale, score)");
  transfer->add_flag("--exclude-self", o.exclude_self, "Leave the diagonal out of the sums");

  auto* nmt = app.add_subcommand("nmt-match", "Verbatim match of NMT output against gold translations");
  nmt->add_option("--nmt", o.nmt, "Translation JSONL {id, source_locale, target_locale, text}")->required();
  nmt->add_option("--gold", o.gold, "MASSIVE JSONL")->required();
  nmt->add_option("--indic-locales", o.indic, "Comma-separated locales of the Indic group")->capture_default_str();
  nmt->add_option("--partition", o.match_partition, "Gold partition to compare")
      ->capture_default_str()
      ->check(CLI::IsMember({"train", "dev", "test"}));
  nmt->add_option("--norm-form", o.norm_form, "Unicode normalization form")
      ->capture_default_str()
      ->check(CLI::IsMember({"NFC", "NFD", "NFKC", "NFKD"}));
  nmt->add_option("--output", o.output, "Match TSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*convert) return run_convert(o);
    if (*invert) return run_invert(o);
    if (*signature) return run_signature(o);
    if (*canon) return run_canonicalize(o);
    if (*eval) return run_evaluate(o);
    if (*transfer) return run_transfer_map(o);
    if (*nmt) return run_nmt_match(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::kIo ? kExitIo : kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}
