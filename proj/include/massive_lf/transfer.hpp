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
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "massive_lf/error.hpp"
#include "massive_lf/metrics.hpp"

// Cross-lingual transfer: row = fine-tuning (donor) language, column =
// evaluation (receiver) language, cell = exact-match accuracy.
namespace massive_lf {

class TransferMatrix {
 public:
  TransferMatrix() = default;

  // `cells` is row-major, languages.size()^2 entries, each in [0, 1].
  TransferMatrix(std::vector<std::string> languages, std::vector<double> cells)
      : languages_(std::move(languages)), cells_(std::move(cells)) {
    if (cells_.size() != languages_.size() * languages_.size()) {
      throw Error(ErrorKind::kInvariantViolation, "transfer matrix must be square over its language list");
    }
    for (double v : cells_) {
      if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::kInvariantViolation, "transfer cell outside [0, 1]");
    }
  }

  const std::vector<std::string>& languages() const { return languages_; }
  std::size_t size() const { return languages_.size(); }
  double at(std::size_t donor, std::size_t receiver) const { return cells_[donor * size() + receiver]; }
  const std::vector<double>& cells() const { return cells_; }

  TransferMatrix transpose() const {
    std::vector<double> t(cells_.size());
    for (std::size_t r = 0; r < size(); ++r) {
      for (std::size_t c = 0; c < size(); ++c) t[c * size() + r] = at(r, c);
    }
    return TransferMatrix(languages_, std::move(t));
  }

  friend bool operator==(const TransferMatrix&, const TransferMatrix&) = default;

 private:
  std::vector<std::string> languages_;
  std::vector<double> cells_;
};

// cell(d, r) = reports[d].per_locale[r].em. Every report must cover exactly
// the set of donor languages.
inline TransferMatrix build_matrix(const std::map<std::string, EvalReport>& reports) {
  std::set<std::string> donors;
  for (const auto& [donor, report] : reports) donors.insert(donor);
  for (const auto& [donor, report] : reports) {
    std::set<std::string> covered;
    for (const auto& [locale, tally] : report.per_locale) covered.insert(locale);
    if (covered == donors) continue;
    std::vector<std::string> diff;
    std::set_symmetric_difference(donors.begin(), donors.end(), covered.begin(), covered.end(),
                                  std::back_inserter(diff));
    std::string listed;
    for (const auto& l : diff) listed += (listed.empty() ? "" : ", ") + l;
    throw Error(ErrorKind::kInconsistentLanguageSets, "report for donor " + donor + " differs on: " + listed);
  }
  std::vector<std::string> languages(donors.begin(), donors.end());
  std::vector<double> cells;
  cells.reserve(languages.size() * languages.size());
  for (const auto& donor : languages) {
    const auto& per_locale = reports.at(donor).per_locale;
    for (const auto& receiver : languages) cells.push_back(per_locale.at(receiver).em());
  }
  return TransferMatrix(std::move(languages), std::move(cells));
}

struct LanguageScore {
  std::string locale;
  double score = 0.0;

  friend bool operator==(const LanguageScore&, const LanguageScore&) = default;
};

namespace detail {

inline std::vector<LanguageScore> ranked_row_sums(const TransferMatrix& m, bool exclude_self) {
  std::vector<LanguageScore> scores;
  for (std::size_t r = 0; r < m.size(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < m.size(); ++c) {
      if (exclude_self && r == c) continue;
      sum += m.at(r, c);
    }
    scores.push_back({m.languages()[r], sum});
  }
  std::sort(scores.begin(), scores.end(), [](const LanguageScore& a, const LanguageScore& b) {
    return a.score != b.score ? a.score > b.score : a.locale < b.locale;
  });
  return scores;
}

}  // namespace detail

// How much each fine-tuning language helps all others: row sums, best first.
inline std::vector<LanguageScore> donor_scores(const TransferMatrix& m, bool exclude_self = false) {
  return detail::ranked_row_sums(m, exclude_self);
}

// How much each evaluation language gains from all donors: column sums.
inline std::vector<LanguageScore> receiver_scores(const TransferMatrix& m, bool exclude_self = false) {
  return detail::ranked_row_sums(m.transpose(), exclude_self);
}

namespace detail {

inline std::string format_shortest(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::kMalformedFile, context + ": not a number '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t at = line.find(sep, begin);
    out.emplace_back(line.substr(begin, at == std::string_view::npos ? std::string_view::npos : at - begin));
    if (at == std::string_view::npos) return out;
    begin = at + 1;
  }
}

}  // namespace detail

inline constexpr std::string_view kMatrixCorner = "donor/receiver";

// CSV: header row and first column hold locale codes; cells use the shortest
// decimal text that reads back to the same double.
inline std::string render_heatmap_data(const TransferMatrix& m) {
  std::string out(kMatrixCorner);
  for (const auto& l : m.languages()) out += "," + l;
  out += "\n";
  for (std::size_t r = 0; r < m.size(); ++r) {
    out += m.languages()[r];
    for (std::size_t c = 0; c < m.size(); ++c) out += "," + detail::format_shortest(m.at(r, c));
    out += "\n";
  }
  return out;
}

inline TransferMatrix parse_heatmap_data(std::string_view csv) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(csv)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw Error(ErrorKind::kMalformedFile, "empty matrix CSV");
  auto header = detail::split(lines[0], ',');
  if (header.empty() || header[0] != kMatrixCorner) {
    throw Error(ErrorKind::kMalformedFile, "matrix CSV header must start with " + std::string(kMatrixCorner));
  }
  std::vector<std::string> languages(header.begin() + 1, header.end());
  if (lines.size() != languages.size() + 1) throw Error(ErrorKind::kMalformedFile, "matrix CSV is not square");
  std::vector<double> cells;
  for (std::size_t r = 0; r < languages.size(); ++r) {
    auto fields = detail::split(lines[r + 1], ',');
    if (fields.size() != languages.size() + 1 || fields[0] != languages[r]) {
      throw Error(ErrorKind::kMalformedFile, "matrix CSV row " + std::to_string(r + 2) + " is malformed");
    }
    for (std::size_t c = 1; c < fields.size(); ++c) {
      cells.push_back(detail::parse_double(fields[c], "matrix CSV row " + std::to_string(r + 2)));
    }
  }
  return TransferMatrix(std::move(languages), std::move(cells));
}

// TSV with columns role, rank, locale, score; donors then receivers.
inline std::string render_rankings(const std::vector<LanguageScore>& donors,
                                   const std::vector<LanguageScore>& receivers) {
  std::string out = "role\trank\tlocale\tscore\n";
  auto emit = [&](std::string_view role, const std::vector<LanguageScore>& scores) {
    for (std::size_t i = 0; i < scores.size(); ++i) {
      out += std::string(role) + "\t" + std::to_string(i + 1) + "\t" + scores[i].locale + "\t" +
             detail::format_shortest(scores[i].score) + "\n";
    }
  };
  emit("donor", donors);
  emit("receiver", receivers);
  return out;
}

}  // namespace massive_lf
