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

// Publishing and accuracy experiments driven by a run configuration.

#ifndef ANONVIEW_HARNESS_EXPERIMENT_H_
#define ANONVIEW_HARNESS_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "anonview/anonymizer.h"
#include "anonview/core_model.h"
#include "anonview/harness/published_files.h"
#include "anonview/harness/query_family.h"

namespace anonview::harness {

struct RunConfig {
  std::string input_path;
  std::string schema_decl;
  std::optional<double> k;
  std::optional<double> gamma;
  BetaPolicy policy = BetaPolicy::kMinimalBeta;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<uint64_t> seed;
  double failure_prob = 0.05;
  // Experiment workload.
  int max_arity = 3;
  size_t query_cap = 20000;
  bool exhaustive = false;
  std::vector<double> bands = {100, 500, 1000, 2000};
  uint64_t large_query_threshold = 500;
  std::string out_dir;
  // Use an existing publication instead of anonymizing again.
  std::optional<std::string> view_dir;
};

// Exactly one of (k, gamma) and (alpha, beta) must be given; `needs_seed`
// makes the seed mandatory.
absl::Status ValidateRunConfig(const RunConfig& config, bool needs_seed);

struct ResolvedParams {
  MechanismParams params;
  std::optional<PlannerInputs> planner;
  // r used for the theoretical radius: the planner's 4k/gamma, or for
  // explicit parameters the smallest r with beta <= (r/4)(n/m).
  double r = 0.0;
};

absl::StatusOr<ResolvedParams> ResolveParams(const RunConfig& config,
                                             uint64_t n, uint64_t m);

struct PublishResult {
  Relation instance;
  PublishedView view;
  PublishMetadata metadata;
  double r = 0.0;
};

// Loads the input, resolves parameters, anonymizes, and writes view.csv,
// domain.json and params.json into out_dir (skipped when out_dir is empty).
absl::StatusOr<PublishResult> Publish(const RunConfig& config);

// Counts |Q ∩ S| for a fixed code set S through cached joint histograms of
// the attributes a query constrains.
class MarginalQueryEvaluator {
 public:
  MarginalQueryEvaluator(const DomainDescriptor& domain,
                         std::span<const DomainIndex> codes)
      : domain_(domain), codes_(codes) {}

  absl::StatusOr<uint64_t> Count(const ConjunctiveQuery& query);

 private:
  const DomainDescriptor& domain_;
  std::span<const DomainIndex> codes_;
  std::map<std::vector<size_t>, std::vector<uint64_t>> histograms_;
};

struct ScatterRecord {
  std::string query;
  uint64_t q_of_i = 0;
  double est = 0.0;
  double abs_error = 0.0;
  uint64_t n_d = 0;
};

absl::StatusOr<std::vector<ScatterRecord>> ComputeScatter(
    const Relation& instance, const PublishedView& view,
    std::span<const ConjunctiveQuery> queries);

std::string ScatterToCsv(std::span<const ScatterRecord> records);
absl::StatusOr<std::vector<ScatterRecord>> ScatterFromCsv(
    std::string_view contents);

struct BandCoverage {
  double width = 0.0;
  double coverage = 0.0;  // fraction with abs_error <= width
};

struct ErrorSummary {
  size_t query_count = 0;
  std::vector<BandCoverage> bands;
  uint64_t large_query_threshold = 0;
  size_t large_query_count = 0;
  std::vector<BandCoverage> large_bands;  // restricted to Q(I) >= threshold
  double mean_signed_error_large = 0.0;   // mean of est - Q(I)
  double r = 0.0;
  double failure_prob = 0.0;
  double rho = 0.0;
  double guarantee_radius = 0.0;  // rho * sqrt(n)
  double fraction_beyond_radius = 0.0;
};

absl::StatusOr<ErrorSummary> SummarizeScatter(
    std::span<const ScatterRecord> records, std::span<const double> bands,
    uint64_t large_query_threshold, uint64_t n, double r, double failure_prob);

std::string SummaryToJson(const ErrorSummary& summary);

struct ExperimentResult {
  std::vector<ScatterRecord> records;
  ErrorSummary summary;
};

// Publishes (or loads view_dir), evaluates the query family and writes
// scatter.csv and summary.json into out_dir when it is set.
absl::StatusOr<ExperimentResult> RunExperiment(const RunConfig& config);

struct DecileCoverage {
  uint64_t q_low = 0;
  uint64_t q_high = 0;
  size_t count = 0;
  std::vector<BandCoverage> bands;
};

struct ErrorTable {
  std::vector<BandCoverage> overall;
  std::vector<DecileCoverage> deciles;  // by Q(I) rank
};

absl::StatusOr<ErrorTable> SummarizeErrors(
    std::span<const ScatterRecord> records, std::span<const double> bands);
absl::StatusOr<ErrorTable> SummarizeErrorsFile(const std::string& scatter_path,
                                               std::span<const double> bands);
std::string ErrorTableToText(const ErrorTable& table);

}  // namespace anonview::harness

#endif  // ANONVIEW_HARNESS_EXPERIMENT_H_
