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

#include "massive_lf/converter.hpp"
#include "massive_lf/dataset.hpp"
#include "massive_lf/dataset_io.hpp"
#include "massive_lf/error.hpp"
#include "massive_lf/language_config.hpp"
#include "massive_lf/lf_model.hpp"
#include "massive_lf/metrics.hpp"
#include "massive_lf/taf_pipeline.hpp"
#include "massive_lf/transfer.hpp"
#include "massive_lf/translation_match.hpp"
