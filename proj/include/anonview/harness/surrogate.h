// Copyright 2026 The anonview Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Synthetic census-style relation with the attribute structure of the UCI
// Adults extract (missing values dropped): nine attributes, skewed
// categorical marginals and a few correlations, for runs where the real file
// is not available.

#ifndef ANONVIEW_HARNESS_SURROGATE_H_
#define ANONVIEW_HARNESS_SURROGATE_H_

#include <cstdint>
#include <string>

#include "absl/status/statusor.h"
#include "anonview/core_model.h"

namespace anonview::harness {

inline constexpr uint64_t kAdultsRows = 30162;

// Schema declaration accepted by ParseSchemaDecl.
std::string AdultsSchemaDecl();

// Exactly n distinct tuples (n >= 72) in which every value of every
// attribute occurs, so the active domain sizes are 72, 7, 16, 7, 14, 5, 2,
// 41, 2 and m = 648023040.
absl::StatusOr<Relation> MakeAdultsSurrogate(uint64_t seed,
                                             uint64_t n = kAdultsRows);

}  // namespace anonview::harness

#endif  // ANONVIEW_HARNESS_SURROGATE_H_
