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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "massive_lf/dataset.hpp"
#include "massive_lf/error.hpp"
#include "massive_lf/language_config.hpp"
#include "massive_lf/lf_model.hpp"
#include "massive_lf/metrics.hpp"
#include "massive_lf/taf_pipeline.hpp"

// On-disk formats. Everything is UTF-8 JSONL with LF line endings; every
// record either loads or produces an error naming its line.
namespace massive_lf {

using WarningSink = std::function<void(const std::string&)>;

struct LoadOptions {
  WarningSink warn;
};

namespace io_detail {

inline void warn(const LoadOptions& options, const std::string& message) {
  if (options.warn) options.warn(message);
}

inline std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

inline std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string() + " for reading");
  return in;
}

// Calls fn(record, line_number) for every non-blank line.
template <typename Fn>
void for_each_jsonl(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kMalformedJsonLine, where(source, line_no) + ": " + e.what());
    }
    if (!record.is_object()) {
      throw Error(ErrorKind::kMalformedJsonLine, where(source, line_no) + ": record is not a JSON object");
    }
    fn(record, line_no);
  }
  if (in.bad()) throw Error(ErrorKind::kIo, "read failure in " + source);
}

inline std::string get_string(const nlohmann::json& record, const char* field, const std::string& at) {
  const auto it = record.find(field);
  if (it == record.end()) throw Error(ErrorKind::kMalformedJsonLine, at + ": missing field '" + field + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw Error(ErrorKind::kMalformedJsonLine, at + ": field '" + field + "' must be a string");
}

inline std::vector<SlotMethodEntry> read_slot_methods(const nlohmann::json& field, const std::string& at) {
  std::vector<SlotMethodEntry> out;
  auto push = [&](const nlohmann::json& slot, const nlohmann::json& method) {
    if (!slot.is_string() || !method.is_string()) {
      throw Error(ErrorKind::kMalformedJsonLine, at + ": slot_method entries must be strings");
    }
    const auto parsed = parse_slot_method(method.get<std::string>());
    if (!parsed) {
      throw Error(ErrorKind::kMalformedJsonLine, at + ": unknown slot method '" + method.get<std::string>() + "'");
    }
    out.push_back({detail::ascii_lower(slot.get<std::string>()), *parsed});
  };
  if (field.is_array()) {
    // [{"slot": "time", "method": "translation"}, ...]
    for (const auto& entry : field) {
      if (!entry.is_object() || !entry.contains("slot") || !entry.contains("method")) {
        throw Error(ErrorKind::kMalformedJsonLine, at + ": slot_method entries need 'slot' and 'method'");
      }
      push(entry["slot"], entry["method"]);
    }
  } else if (field.is_object() && field.contains("slot") && field.contains("method")) {
    // {"slot": [...], "method": [...]}
    const auto& slots = field["slot"];
    const auto& methods = field["method"];
    if (!slots.is_array() || !methods.is_array() || slots.size() != methods.size()) {
      throw Error(ErrorKind::kMalformedJsonLine, at + ": slot_method lists must be parallel arrays");
    }
    for (std::size_t i = 0; i < slots.size(); ++i) push(slots[i], methods[i]);
  } else {
    throw Error(ErrorKind::kMalformedJsonLine, at + ": unrecognized slot_method layout");
  }
  return out;
}

}  // namespace io_detail

// Parses and validates one MASSIVE record. `at` names the line for errors.
// Returns false in `has_slot_methods` when the record carries no metadata.
inline DatasetExample parse_massive_record(const nlohmann::json& record, const std::string& at,
                                           bool* has_slot_methods = nullptr) {
  using io_detail::get_string;
  DatasetExample ex;
  ex.id = get_string(record, "id", at);
  ex.locale = normalize_locale(get_string(record, "locale", at));
  ex.partition = get_string(record, "partition", at);
  ex.intent = detail::ascii_lower(get_string(record, "intent", at));
  ex.utt = get_string(record, "utt", at);
  ex.annot_utt = get_string(record, "annot_utt", at);
  if (const auto it = record.find("scenario"); it != record.end() && it->is_string()) {
    ex.scenario = it->get<std::string>();
  }
  const auto methods = record.find("slot_method");
  if (has_slot_methods) *has_slot_methods = methods != record.end() && !methods->is_null();
  if (methods != record.end() && !methods->is_null()) ex.slot_methods = io_detail::read_slot_methods(*methods, at);

  if (ex.partition != "train" && ex.partition != "dev" && ex.partition != "test") {
    throw Error(ErrorKind::kInvariantViolation, at + ": unknown partition '" + ex.partition + "'");
  }
  AnnotatedUtterance parsed;
  try {
    parsed = parse_annot(ex.annot_utt, ex.intent);
  } catch (const Error& e) {
    throw Error(ErrorKind::kInvariantViolation, at + ": annot_utt does not parse: " + e.what());
  }
  if (parsed.utterance != ex.utt) {
    throw Error(ErrorKind::kInvariantViolation,
                at + ": annot_utt recovers '" + parsed.utterance + "' but utt is '" + ex.utt + "'");
  }
  std::set<std::string> names;
  for (const auto& slot : parsed.lf.slots) names.insert(slot.name);
  for (const auto& entry : ex.slot_methods) {
    if (!names.contains(entry.slot)) {
      throw Error(ErrorKind::kInvariantViolation, at + ": slot_method names unknown slot '" + entry.slot + "'");
    }
  }
  return ex;
}

inline std::vector<DatasetExample> load_massive(std::istream& in, const std::string& source,
                                                const LoadOptions& options = {}) {
  std::vector<DatasetExample> out;
  std::size_t without_methods = 0;
  std::set<std::string> unknown_locales;
  io_detail::for_each_jsonl(in, source, [&](const nlohmann::json& record, std::size_t line) {
    bool has_methods = false;
    out.push_back(parse_massive_record(record, io_detail::where(source, line), &has_methods));
    if (!has_methods) ++without_methods;
    if (!is_known_locale(out.back().locale)) unknown_locales.insert(out.back().locale);
  });
  if (without_methods) {
    io_detail::warn(options, source + ": " + std::to_string(without_methods) +
                                 " record(s) lack slot_method metadata; treated as translated-only");
  }
  for (const auto& locale : unknown_locales) {
    io_detail::warn(options, source + ": locale '" + locale + "' is not one of the 51 MASSIVE locales");
  }
  return out;
}

inline std::vector<DatasetExample> load_massive(const std::filesystem::path& path, const LoadOptions& options = {}) {
  auto in = io_detail::open_for_read(path);
  return load_massive(in, path.string(), options);
}

// {"id", "locale", "lf"}; (id, locale) must be unique.
inline std::vector<PredictionRecord> load_predictions(std::istream& in, const std::string& source) {
  std::vector<PredictionRecord> out;
  std::set<ExampleKey> seen;
  io_detail::for_each_jsonl(in, source, [&](const nlohmann::json& record, std::size_t line) {
    const auto at = io_detail::where(source, line);
    PredictionRecord p{io_detail::get_string(record, "id", at),
                       normalize_locale(io_detail::get_string(record, "locale", at)),
                       io_detail::get_string(record, "lf", at)};
    if (!seen.insert({p.id, p.locale}).second) {
      throw Error(ErrorKind::kDuplicateKey, at + ": prediction (" + p.id + ", " + p.locale + ") appears twice");
    }
    out.push_back(std::move(p));
  });
  return out;
}

inline std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
  auto in = io_detail::open_for_read(path);
  return load_predictions(in, path.string());
}

// {"id", "source_locale", "target_locale", "text"}
inline std::vector<TranslationRecord> load_translations(std::istream& in, const std::string& source) {
  std::vector<TranslationRecord> out;
  io_detail::for_each_jsonl(in, source, [&](const nlohmann::json& record, std::size_t line) {
    const auto at = io_detail::where(source, line);
    out.push_back({io_detail::get_string(record, "id", at),
                   normalize_locale(io_detail::get_string(record, "source_locale", at)),
                   normalize_locale(io_detail::get_string(record, "target_locale", at)),
                   io_detail::get_string(record, "text", at)});
  });
  return out;
}

inline std::vector<TranslationRecord> load_translations(const std::filesystem::path& path) {
  auto in = io_detail::open_for_read(path);
  return load_translations(in, path.string());
}

// {"id", "target_locale", "lf"}
inline std::vector<FillerOutput> load_filler_outputs(std::istream& in, const std::string& source) {
  std::vector<FillerOutput> out;
  io_detail::for_each_jsonl(in, source, [&](const nlohmann::json& record, std::size_t line) {
    const auto at = io_detail::where(source, line);
    out.push_back({io_detail::get_string(record, "id", at),
                   normalize_locale(io_detail::get_string(record, "target_locale", at)),
                   io_detail::get_string(record, "lf", at)});
  });
  return out;
}

inline std::vector<FillerOutput> load_filler_outputs(const std::filesystem::path& path) {
  auto in = io_detail::open_for_read(path);
  return load_filler_outputs(in, path.string());
}

inline LanguageConfigMap load_language_config(const std::filesystem::path& path) {
  auto in = io_detail::open_for_read(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kMalformedFile, path.string() + ": " + e.what());
  }
  try {
    return LanguageConfigMap::from_json(j);
  } catch (const Error& e) {
    rethrow_with_context(e, path.string());
  }
}

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial file.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorKind::kIo, "write failure on " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(ErrorKind::kIo, "cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  auto in = io_detail::open_for_read(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::ordered_json to_json(const DatasetExample& ex) {
  nlohmann::ordered_json j;
  j["id"] = ex.id;
  j["locale"] = ex.locale;
  j["partition"] = ex.partition;
  if (ex.scenario) j["scenario"] = *ex.scenario;
  j["intent"] = ex.intent;
  j["utt"] = ex.utt;
  j["annot_utt"] = ex.annot_utt;
  auto methods = nlohmann::ordered_json::array();
  for (const auto& m : ex.slot_methods) methods.push_back({{"slot", m.slot}, {"method", to_string(m.method)}});
  j["slot_method"] = std::move(methods);
  return j;
}

inline std::string jsonl_line(const nlohmann::ordered_json& j) { return j.dump() + "\n"; }

// ---------------------------------------------------------------------------
// Evaluation reports.

enum class ReportFormat { kJson, kTsv, kText };

struct ReportOptions {
  bool per_intent = true;
  bool split = true;
};

namespace io_detail {

inline nlohmann::ordered_json tally_json(const Tally& t) {
  return {{"n", t.n}, {"ia", t.ia()}, {"em", t.em()}, {"ia_correct", t.ia_correct}, {"em_correct", t.em_correct}};
}

inline Tally tally_from_json(const nlohmann::json& j, const char* n_field = "n") {
  try {
    Tally t{j.at(n_field).get<std::size_t>(), j.at("ia_correct").get<std::size_t>(),
            j.at("em_correct").get<std::size_t>()};
    if (t.ia_correct > t.n || t.em_correct > t.n) {
      throw Error(ErrorKind::kMalformedFile, "report counts exceed their totals");
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kMalformedFile, std::string("report entry: ") + e.what());
  }
}

inline std::string fixed(double v, int digits) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

}  // namespace io_detail

inline nlohmann::ordered_json report_to_json(const EvalReport& report, const ReportOptions& options = {}) {
  nlohmann::ordered_json j;
  j["overall"] = io_detail::tally_json(report.overall);
  auto& per_locale = j["per_locale"] = nlohmann::ordered_json::object();
  for (const auto& [locale, t] : report.per_locale) per_locale[locale] = io_detail::tally_json(t);
  if (options.per_intent) {
    auto& per_intent = j["per_intent"] = nlohmann::ordered_json::object();
    for (const auto& [intent, t] : report.per_intent) {
      per_intent[intent] = {{"ia", t.ia()},
                            {"support", t.n},
                            {"ia_correct", t.ia_correct},
                            {"em", t.em()},
                            {"em_correct", t.em_correct}};
    }
  }
  if (options.split) {
    j["split"] = {{"em_localized", report.localized.em()},
                  {"n_localized", report.localized.n},
                  {"em_translated_only", report.translated_only.em()},
                  {"n_translated_only", report.translated_only.n},
                  {"localized", io_detail::tally_json(report.localized)},
                  {"translated_only", io_detail::tally_json(report.translated_only)}};
  }
  return j;
}

// Reads what report_to_json writes. Fractions are recomputed from counts.
inline EvalReport report_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("overall") || !j.contains("per_locale")) {
    throw Error(ErrorKind::kMalformedFile, "evaluation report needs 'overall' and 'per_locale'");
  }
  EvalReport r;
  r.overall = io_detail::tally_from_json(j["overall"]);
  for (const auto& [locale, t] : j["per_locale"].items()) r.per_locale[locale] = io_detail::tally_from_json(t);
  if (j.contains("per_intent")) {
    for (const auto& [intent, t] : j["per_intent"].items()) {
      r.per_intent[intent] = io_detail::tally_from_json(t, "support");
    }
  }
  if (j.contains("split")) {
    r.localized = io_detail::tally_from_json(j["split"].at("localized"));
    r.translated_only = io_detail::tally_from_json(j["split"].at("translated_only"));
  }
  return r;
}

inline EvalReport read_report_json(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kMalformedFile, path.string() + ": " + e.what());
  }
  try {
    return report_from_json(j);
  } catch (const Error& e) {
    rethrow_with_context(e, path.string());
  }
}

// Header, one row per locale, "overall" footer.
inline std::string report_to_tsv(const EvalReport& report) {
  std::string out = "locale\tn\tia\tem\n";
  auto row = [&](const std::string& name, const Tally& t) {
    out += name + "\t" + std::to_string(t.n) + "\t" + io_detail::fixed(t.ia(), 4) + "\t" +
           io_detail::fixed(t.em(), 4) + "\n";
  };
  for (const auto& [locale, t] : report.per_locale) row(locale, t);
  row("overall", report.overall);
  return out;
}

// Aligned columns for people. The per-intent table is sorted by ascending
// accuracy so the weakest intents come first.
inline std::string report_to_text(const EvalReport& report, const ReportOptions& options = {}) {
  std::ostringstream ss;
  auto pct = [](double v) { return io_detail::fixed(100.0 * v, 2); };
  std::size_t width = 8;
  for (const auto& [locale, t] : report.per_locale) width = std::max(width, locale.size());
  ss << std::left << std::setw(static_cast<int>(width)) << "locale" << std::right << std::setw(8) << "n"
     << std::setw(9) << "IA" << std::setw(9) << "EM" << "\n";
  auto row = [&](const std::string& name, const Tally& t) {
    ss << std::left << std::setw(static_cast<int>(width)) << name << std::right << std::setw(8) << t.n
       << std::setw(9) << pct(t.ia()) << std::setw(9) << pct(t.em()) << "\n";
  };
  for (const auto& [locale, t] : report.per_locale) row(locale, t);
  row("overall", report.overall);
  if (options.per_intent) {
    std::size_t iw = 6;
    for (const auto& [intent, t] : report.per_intent) iw = std::max(iw, intent.size());
    ss << "\n" << std::left << std::setw(static_cast<int>(iw)) << "intent" << std::right << std::setw(9) << "IA"
       << std::setw(9) << "support" << "\n";
    for (const auto& r : intents_by_accuracy(report)) {
      std::string label = detail::ascii_upper(r.intent);
      ss << std::left << std::setw(static_cast<int>(iw)) << label << std::right << std::setw(9) << pct(r.ia)
         << std::setw(9) << r.support << "\n";
    }
  }
  if (options.split) {
    ss << "\nEM localized:        " << pct(report.localized.em()) << " (n=" << report.localized.n << ")\n"
       << "EM translated only:  " << pct(report.translated_only.em()) << " (n=" << report.translated_only.n
       << ")\n";
  }
  return ss.str();
}

inline void write_report(const EvalReport& report, const std::filesystem::path& path, ReportFormat format,
                         const ReportOptions& options = {}) {
  switch (format) {
    case ReportFormat::kJson: atomic_write(path, report_to_json(report, options).dump(2) + "\n"); return;
    case ReportFormat::kTsv: atomic_write(path, report_to_tsv(report)); return;
    case ReportFormat::kText: atomic_write(path, report_to_text(report, options)); return;
  }
}

}  // namespace massive_lf
