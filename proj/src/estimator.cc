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

#include "anonview/estimator.h"

#include <algorithm>
#include <cmath>

#include "anonview/kernels.h"

namespace anonview {

absl::StatusOr<double> EstimateFromCounts(uint64_t n_view, uint64_t n_domain,
                                          const MechanismParams& params) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  if (params.alpha == params.beta) {
    return absl::InvalidArgumentError(
        "estimator undefined (division by zero): alpha == beta");
  }
  if (params.alpha < params.beta) {
    return absl::InvalidArgumentError("estimator requires alpha > beta");
  }
  return (static_cast<double>(n_view) -
          params.beta * static_cast<double>(n_domain)) /
         (params.alpha - params.beta);
}

absl::StatusOr<EstimateReport> Estimate(const ConjunctiveQuery& query,
                                        const PublishedView& view,
                                        const EstimateOptions& options) {
  absl::StatusOr<CompiledQuery> compiled =
      CompiledQuery::Compile(query, view.domain);
  if (!compiled.ok()) return compiled.status();
  absl::StatusOr<uint64_t> n_domain = EvalQueryDomain(query, view.domain);
  if (!n_domain.ok()) return n_domain.status();

  EstimateReport report;
  report.params = view.params;
  report.n_view = kernels::CountMatches(*compiled, view.view);
  report.n_domain = *n_domain;
  absl::StatusOr<double> estimate =
      EstimateFromCounts(report.n_view, report.n_domain, view.params);
  if (!estimate.ok()) return estimate.status();
  report.estimate = *estimate;

  if (options.clamp) {
    if (!options.n) {
      return absl::InvalidArgumentError("clamping requires the instance size n");
    }
    report.estimate =
        std::clamp(report.estimate, 0.0, static_cast<double>(*options.n));
  }
  if (options.utility && options.n) {
    absl::StatusOr<double> rho = ErrorBound(*options.utility);
    if (!rho.ok()) return rho.status();
    report.guarantee_radius = GuaranteeRadius(*rho, *options.n);
  }
  return report;
}

absl::StatusOr<double> ErrorBound(const UtilityBudget& budget) {
  if (absl::Status s = budget.Validate(); !s.ok()) return s;
  return 2.0 * std::sqrt(3.0 * budget.r * std::log(2.0 / budget.failure_prob));
}

absl::StatusOr<double> ErrorBoundForPrivacy(double k, double gamma,
                                            double failure_prob) {
  if (!(k > 0.0) || !(gamma > 0.0 && gamma < 1.0)) {
    return absl::InvalidArgumentError("requires k > 0 and 0 < gamma < 1");
  }
  UtilityBudget budget{.r = 4.0 * k / gamma, .failure_prob = failure_prob};
  if (absl::Status s = budget.Validate(); !s.ok()) return s;
  return 4.0 * std::sqrt(3.0 * (k / gamma) * std::log(2.0 / failure_prob));
}

double GuaranteeRadius(double rho, uint64_t n) {
  return rho * std::sqrt(static_cast<double>(n));
}

}  // namespace anonview
