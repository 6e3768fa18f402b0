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

// Counting-query estimation from a published view:
//   EST(Q, V) = (|Q ∩ V| - beta * |Q|) / (alpha - beta)
// and the accuracy radius rho * sqrt(n) that it misses with probability at
// most failure_prob when alpha >= 1/2 and beta <= (r/4)(n/m).

#ifndef ANONVIEW_ESTIMATOR_H_
#define ANONVIEW_ESTIMATOR_H_

#include <cstdint>
#include <optional>

#include "absl/status/statusor.h"
#include "anonview/anonymizer.h"
#include "anonview/core_model.h"

namespace anonview {

struct EstimateReport {
  double estimate = 0.0;
  uint64_t n_view = 0;    // |Q ∩ V|
  uint64_t n_domain = 0;  // |Q|
  std::optional<double> guarantee_radius;
  MechanismParams params;
};

struct EstimateOptions {
  // Both are needed for a guarantee radius.
  std::optional<UtilityBudget> utility;
  std::optional<uint64_t> n;
  // Clamp the estimate into [0, n]. Off by default: negative estimates for
  // small queries are expected behaviour. Requires `n`.
  bool clamp = false;
};

absl::StatusOr<double> EstimateFromCounts(uint64_t n_view, uint64_t n_domain,
                                          const MechanismParams& params);

absl::StatusOr<EstimateReport> Estimate(const ConjunctiveQuery& query,
                                        const PublishedView& view,
                                        const EstimateOptions& options = {});

// rho = 2 * sqrt(3 r ln(2 / failure_prob)).
absl::StatusOr<double> ErrorBound(const UtilityBudget& budget);

// Same radius expressed through the privacy budget, with r = 4k/gamma:
// 4 * sqrt(3 (k/gamma) ln(2 / failure_prob)).
absl::StatusOr<double> ErrorBoundForPrivacy(double k, double gamma,
                                            double failure_prob);

double GuaranteeRadius(double rho, uint64_t n);

}  // namespace anonview

#endif  // ANONVIEW_ESTIMATOR_H_
