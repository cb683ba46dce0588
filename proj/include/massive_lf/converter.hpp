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

#include <string>
#include <string_view>

#include "massive_lf/dataset.hpp"
#include "massive_lf/error.hpp"
#include "massive_lf/lf_model.hpp"
#include "massive_lf/utf8.hpp"

namespace massive_lf {

// Compact training target for a MASSIVE record.
inline CanonicalText to_compact(const DatasetExample& example) {
  try {
    return serialize_compact(parse_annot(example.annot_utt, example.intent).lf);
  } catch (const Error& e) {
    rethrow_with_context(e, "example " + example.id + " (" + example.locale + ")");
  }
}

// Gives every slot the span of the leftmost occurrence of its value at or
// after the end of the previous slot's match. Matching is exact: no case or
// diacritic folding.
inline LogicalForm locate_slots_in_order(LogicalForm lf, std::string_view utterance) {
  const std::u32string text = utf8::decode(utterance);
  std::size_t cursor = 0;
  for (auto& slot : lf.slots) {
    const std::u32string value = utf8::decode(slot.value);
    const std::size_t at = text.find(value, cursor);
    if (at == std::u32string::npos) {
      throw Error(ErrorKind::kSlotValueNotFound,
                  "slot '" + slot.name + "' value '" + slot.value + "' not found in utterance");
    }
    slot.span = Span{at, at + value.size()};
    cursor = at + value.size();
  }
  return lf;
}

// Turns a raw model output back into an inline-annotated utterance.
inline std::string from_compact(std::string_view prediction, std::string_view utterance) {
  LogicalForm lf;
  try {
    lf = parse_compact(prediction);
  } catch (const Error& e) {
    throw Error(ErrorKind::kUnparseablePrediction, std::string(e.what()));
  }
  return serialize_annot(locate_slots_in_order(std::move(lf), utterance), utterance);
}

}  // namespace massive_lf
