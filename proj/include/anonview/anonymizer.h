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

// The insert-remove mechanism: keep each true tuple with probability alpha,
// add each other domain tuple with probability beta, publish (D, V, alpha,
// beta). Also the parameter planner and the privacy/utility condition
// checkers.

#ifndef ANONVIEW_ANONYMIZER_H_
#define ANONVIEW_ANONYMIZER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "anonview/core_model.h"

namespace anonview {

// Adversary prior bound d and posterior bound gamma. When `k` is set, d was
// derived as k * n / m.
struct PrivacyBudget {
  double d = 0.0;
  double gamma = 0.0;
  std::optional<double> k;

  static absl::StatusOr<PrivacyBudget> FromMultiplier(double k, uint64_t n,
                                                      uint64_t m, double gamma);
  absl::Status Validate() const;
};

struct MechanismParams {
  double alpha = 1.0;  // retention probability
  double beta = 0.0;   // insertion probability

  absl::Status Validate() const;
  friend bool operator==(const MechanismParams&,
                         const MechanismParams&) = default;
};

// Utility constant r and the failure probability of the accuracy guarantee.
struct UtilityBudget {
  double r = 0.0;
  double failure_prob = 0.05;

  absl::Status Validate() const;
};

// Outcome of a condition check. `violated` names the first failing
// inequality; it is empty on a pass.
struct Verdict {
  bool pass = false;
  std::string violated;
  std::vector<std::string> warnings;
};

// alpha <= 1 - d/gamma, beta >= (d/gamma) * ((1-gamma)/(1-d)) * alpha, and
// beta <= alpha. Errors when the budget does not have 0 < d < gamma < 1.
absl::StatusOr<Verdict> CheckPrivacyParams(const MechanismParams& params,
                                           const PrivacyBudget& budget);

// alpha >= 1/2 and beta <= (r/4) * (n/m).
absl::StatusOr<Verdict> CheckUtilityParams(const MechanismParams& params,
                                           uint64_t n, uint64_t m,
                                           const UtilityBudget& budget);

enum class BetaPolicy {
  kMinimalBeta,  // smallest beta the privacy condition allows
  kSimpleBeta,   // beta = d / gamma
};

absl::StatusOr<BetaPolicy> ParseBetaPolicy(std::string_view name);
std::string_view BetaPolicyName(BetaPolicy policy);

struct ParameterPlan {
  MechanismParams params;
  PrivacyBudget privacy;
  UtilityBudget utility;
};

// alpha = 1/2 with beta per `policy`, for d = k*n/m; r = 4k/gamma. Requires
// d < gamma/2.
absl::StatusOr<ParameterPlan> PlanParameters(uint64_t n, uint64_t m, double k,
                                             double gamma, BetaPolicy policy,
                                             double failure_prob = 0.05);

// The released artifact. `view` holds the sorted domain codes of V; `seed`
// is kept for reproducibility and is not part of the public files.
struct PublishedView {
  DomainDescriptor domain;
  std::vector<DomainIndex> view;
  MechanismParams params;
  uint64_t seed = 0;

  size_t size() const { return view.size(); }
  absl::StatusOr<Relation> ViewRelation() const {
    return domain.DecodeRelation(view);
  }
};

// Mechanism on domain codes. `instance` must be sorted, unique, and inside
// [0, m). Returns the sorted view codes.
absl::StatusOr<std::vector<DomainIndex>> AnonymizeCodes(
    std::span<const DomainIndex> instance, uint64_t m,
    std::span<const uint64_t> attribute_sizes, const MechanismParams& params,
    uint64_t seed);

absl::StatusOr<PublishedView> Anonymize(const Relation& instance,
                                        const DomainDescriptor& domain,
                                        const MechanismParams& params,
                                        uint64_t seed);

// n * alpha + (m - n) * beta.
double ExpectedViewSize(uint64_t n, uint64_t m, const MechanismParams& params);

// 1/2 + k/gamma: |V|/|I| under the planner's simple-beta choice as m/n grows.
double ViewSizeRatio(double k, double gamma);

}  // namespace anonview

#endif  // ANONVIEW_ANONYMIZER_H_
