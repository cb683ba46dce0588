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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace massive_lf {

enum class SlotMethod { kTranslation, kLocalization, kUnchanged };

constexpr std::string_view to_string(SlotMethod m) {
  switch (m) {
    case SlotMethod::kTranslation: return "translation";
    case SlotMethod::kLocalization: return "localization";
    case SlotMethod::kUnchanged: return "unchanged";
  }
  return "translation";
}

inline std::optional<SlotMethod> parse_slot_method(std::string_view s) {
  if (s == "translation") return SlotMethod::kTranslation;
  if (s == "localization") return SlotMethod::kLocalization;
  if (s == "unchanged") return SlotMethod::kUnchanged;
  return std::nullopt;
}

struct SlotMethodEntry {
  std::string slot;
  SlotMethod method = SlotMethod::kTranslation;

  friend bool operator==(const SlotMethodEntry&, const SlotMethodEntry&) = default;
};

// One MASSIVE record.
struct DatasetExample {
  std::string id;
  std::string locale;
  std::string partition;
  std::string intent;
  std::string utt;
  std::string annot_utt;
  std::vector<SlotMethodEntry> slot_methods;
  std::optional<std::string> scenario;

  friend bool operator==(const DatasetExample&, const DatasetExample&) = default;
};

struct PredictionRecord {
  std::string id;
  std::string locale;
  std::string lf;

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

// One released machine translation of an English training utterance.
struct TranslationRecord {
  std::string id;
  std::string source_locale;
  std::string target_locale;
  std::string text;
};

struct FillerOutput {
  std::string id;
  std::string target_locale;
  std::string lf;
};

using ExampleKey = std::pair<std::string, std::string>;  // (id, locale)

// The 51 MASSIVE locales.
inline constexpr std::array<std::string_view, 51> kMassiveLocales = {
    "af_ZA", "am_ET", "ar_SA", "az_AZ", "bn_BD", "cy_GB", "da_DK", "de_DE", "el_GR", "en_US", "es_ES",
    "fa_IR", "fi_FI", "fr_FR", "he_IL", "hi_IN", "hu_HU", "hy_AM", "id_ID", "is_IS", "it_IT", "ja_JP",
    "jv_ID", "ka_GE", "km_KH", "kn_IN", "ko_KR", "lv_LV", "ml_IN", "mn_MN", "ms_MY", "my_MM", "nb_NO",
    "nl_NL", "pl_PL", "pt_PT", "ro_RO", "ru_RU", "sl_SL", "sq_AL", "sv_SE", "sw_KE", "ta_IN", "te_IN",
    "th_TH", "tl_PH", "tr_TR", "ur_PK", "vi_VN", "zh_CN", "zh_TW",
};

inline bool is_known_locale(std::string_view locale) {
  return std::find(kMassiveLocales.begin(), kMassiveLocales.end(), locale) != kMassiveLocales.end();
}

// MASSIVE files spell locales "af-ZA"; everything here uses "af_ZA".
inline std::string normalize_locale(std::string locale) {
  std::replace(locale.begin(), locale.end(), '-', '_');
  return locale;
}

}  // namespace massive_lf
