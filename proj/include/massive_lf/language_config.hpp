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
#include <array>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"
#include "massive_lf/dataset.hpp"
#include "massive_lf/error.hpp"

namespace massive_lf {

struct LanguageConfig {
  std::string locale;
  bool whitespace_tokenized = true;

  friend bool operator==(const LanguageConfig&, const LanguageConfig&) = default;
};

// Locale -> tokenization settings. Lookups of unlisted locales fail; there
// is no implicit default.
class LanguageConfigMap {
 public:
  LanguageConfigMap() = default;

  void set(LanguageConfig cfg) {
    auto locale = cfg.locale;
    entries_[locale] = std::move(cfg);
  }

  const LanguageConfig& at(const std::string& locale) const {
    const auto it = entries_.find(locale);
    if (it == entries_.end()) {
      throw Error(ErrorKind::kUnknownLocale, "no language config entry for locale '" + locale + "'");
    }
    return it->second;
  }

  bool contains(const std::string& locale) const { return entries_.contains(locale); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, LanguageConfig>& entries() const { return entries_; }

  // [{"locale": "af_ZA", "whitespace_tokenized": true}, ...]
  static LanguageConfigMap from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw Error(ErrorKind::kMalformedFile, "language config must be a JSON array");
    LanguageConfigMap map;
    for (const auto& entry : j) {
      if (!entry.is_object() || !entry.contains("locale") || !entry["locale"].is_string() ||
          !entry.contains("whitespace_tokenized") || !entry["whitespace_tokenized"].is_boolean()) {
        throw Error(ErrorKind::kMalformedFile,
                    "language config entries need string 'locale' and boolean 'whitespace_tokenized'");
      }
      const auto locale = normalize_locale(entry["locale"].get<std::string>());
      if (map.contains(locale)) {
        throw Error(ErrorKind::kDuplicateKey, "locale '" + locale + "' listed twice in language config");
      }
      map.set({locale, entry["whitespace_tokenized"].get<bool>()});
    }
    return map;
  }

  nlohmann::ordered_json to_json() const {
    auto j = nlohmann::ordered_json::array();
    for (const auto& [locale, cfg] : entries_) {
      j.push_back({{"locale", locale}, {"whitespace_tokenized", cfg.whitespace_tokenized}});
    }
    return j;
  }

 private:
  std::map<std::string, LanguageConfig> entries_;
};

inline constexpr std::array<std::string_view, 6> kUnsegmentedLocales = {
    "zh_CN", "zh_TW", "ja_JP", "th_TH", "km_KH", "my_MM",
};

// All 51 MASSIVE locales; scripts written without spaces between words are
// marked as not whitespace-tokenized.
inline LanguageConfigMap default_language_config() {
  LanguageConfigMap map;
  for (auto locale : kMassiveLocales) {
    const bool unsegmented =
        std::find(kUnsegmentedLocales.begin(), kUnsegmentedLocales.end(), locale) != kUnsegmentedLocales.end();
    map.set({std::string(locale), !unsegmented});
  }
  return map;
}

}  // namespace massive_lf
