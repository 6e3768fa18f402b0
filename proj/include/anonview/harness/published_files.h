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

// On-disk form of a published view: view.csv (the tuples of V in a seeded
// random order), domain.json (the per-attribute active domains) and
// params.json (alpha, beta, seed, planner inputs and the expected size).

#ifndef ANONVIEW_HARNESS_PUBLISHED_FILES_H_
#define ANONVIEW_HARNESS_PUBLISHED_FILES_H_

#include <cstdint>
#include <optional>
#include <string>

#include "absl/status/statusor.h"
#include "anonview/anonymizer.h"
#include "anonview/core_model.h"

namespace anonview::harness {

inline constexpr char kViewFile[] = "view.csv";
inline constexpr char kDomainFile[] = "domain.json";
inline constexpr char kParamsFile[] = "params.json";

struct PlannerInputs {
  double k = 0.0;
  double gamma = 0.0;
  BetaPolicy policy = BetaPolicy::kMinimalBeta;
  double d = 0.0;
  double r = 0.0;
  double failure_prob = 0.05;
};

struct PublishMetadata {
  uint64_t n = 0;
  std::optional<PlannerInputs> planner;
};

std::string DomainToJson(const DomainDescriptor& domain);
absl::StatusOr<DomainDescriptor> DomainFromJson(std::string_view text);

std::string ParamsToJson(const PublishedView& view,
                         const PublishMetadata& metadata);

// View rows in schema order, shuffled with the view's seed so that row
// position says nothing about where a tuple came from.
std::string ViewToCsv(const PublishedView& view);

absl::Status WritePublishedView(const std::string& dir,
                                const PublishedView& view,
                                const PublishMetadata& metadata);

struct LoadedView {
  PublishedView view;
  PublishMetadata metadata;
};

absl::StatusOr<LoadedView> ReadPublishedView(const std::string& dir);

}  // namespace anonview::harness

#endif  // ANONVIEW_HARNESS_PUBLISHED_FILES_H_
