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

#include "anonview/harness/experiment.h"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "anonview/estimator.h"
#include "anonview/harness/csv.h"
#include "anonview/kernels.h"
#include "harness/text.h"
#include "json.hpp"

namespace anonview::harness {
namespace {

using nlohmann::json;

// Joint histograms larger than this are not cached; the query is counted
// by a scan instead.
constexpr uint64_t kMaxHistogramCells = uint64_t{1} << 24;

std::string FormatDouble(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

std::vector<BandCoverage> Coverage(std::span<const ScatterRecord> records,
                                   std::span<const size_t> which,
                                   std::span<const double> bands) {
  std::vector<BandCoverage> out;
  for (double width : bands) {
    size_t inside = 0;
    for (size_t i : which) {
      if (records[i].abs_error <= width) ++inside;
    }
    out.push_back({.width = width,
                   .coverage = which.empty() ? 0.0
                                             : static_cast<double>(inside) /
                                                   static_cast<double>(which.size())});
  }
  return out;
}

json BandsToJson(std::span<const BandCoverage> bands) {
  json out = json::array();
  for (const BandCoverage& b : bands) {
    out.push_back({{"width", b.width}, {"coverage", b.coverage}});
  }
  return out;
}

absl::StatusOr<PublishedView> LoadOrPublish(const RunConfig& config,
                                            Relation& instance, double& r,
                                            PublishMetadata& metadata) {
  if (!config.view_dir) {
    RunConfig publish_config = config;
    publish_config.out_dir.clear();
    absl::StatusOr<PublishResult> published = Publish(publish_config);
    if (!published.ok()) return published.status();
    instance = std::move(published->instance);
    r = published->r;
    metadata = published->metadata;
    return std::move(published->view);
  }
  absl::StatusOr<Schema> schema = ParseSchemaDecl(config.schema_decl);
  if (!schema.ok()) return schema.status();
  absl::StatusOr<LoadedRelation> loaded = LoadRelation(config.input_path, *schema);
  if (!loaded.ok()) return loaded.status();
  instance = std::move(loaded->relation);
  absl::StatusOr<LoadedView> view = ReadPublishedView(*config.view_dir);
  if (!view.ok()) return view.status();
  metadata = view->metadata;
  metadata.n = instance.size();
  const double m = static_cast<double>(view->view.domain.size());
  r = metadata.planner ? metadata.planner->r
                       : 4.0 * view->view.params.beta * m /
                             static_cast<double>(std::max<size_t>(1, instance.size()));
  return std::move(view->view);
}

}  // namespace

absl::Status ValidateRunConfig(const RunConfig& config, bool needs_seed) {
  if (config.input_path.empty()) {
    return absl::InvalidArgumentError("--input is required");
  }
  if (config.schema_decl.empty()) {
    return absl::InvalidArgumentError("--schema is required");
  }
  const bool planned = config.k.has_value() || config.gamma.has_value();
  const bool explicit_params =
      config.alpha.has_value() || config.beta.has_value();
  if (!config.view_dir) {
    if (planned == explicit_params) {
      return absl::InvalidArgumentError(
          "supply exactly one of (--k, --gamma) and (--alpha, --beta)");
    }
    if (planned && !(config.k && config.gamma)) {
      return absl::InvalidArgumentError("--k and --gamma go together");
    }
    if (explicit_params && !(config.alpha && config.beta)) {
      return absl::InvalidArgumentError("--alpha and --beta go together");
    }
    if (needs_seed && !config.seed) {
      return absl::InvalidArgumentError("--seed is required");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<ResolvedParams> ResolveParams(const RunConfig& config,
                                             uint64_t n, uint64_t m) {
  ResolvedParams resolved;
  if (config.k && config.gamma) {
    absl::StatusOr<ParameterPlan> plan = PlanParameters(
        n, m, *config.k, *config.gamma, config.policy, config.failure_prob);
    if (!plan.ok()) return plan.status();
    resolved.params = plan->params;
    resolved.r = plan->utility.r;
    resolved.planner = PlannerInputs{.k = *config.k,
                                     .gamma = *config.gamma,
                                     .policy = config.policy,
                                     .d = plan->privacy.d,
                                     .r = plan->utility.r,
                                     .failure_prob = config.failure_prob};
    return resolved;
  }
  if (!(config.alpha && config.beta)) {
    return absl::InvalidArgumentError("no mechanism parameters configured");
  }
  resolved.params = {.alpha = *config.alpha, .beta = *config.beta};
  if (absl::Status s = resolved.params.Validate(); !s.ok()) return s;
  resolved.r = n == 0 ? 0.0
                      : 4.0 * resolved.params.beta * static_cast<double>(m) /
                            static_cast<double>(n);
  return resolved;
}

absl::StatusOr<PublishResult> Publish(const RunConfig& config) {
  if (absl::Status s = ValidateRunConfig(config, /*needs_seed=*/true); !s.ok()) {
    return s;
  }
  absl::StatusOr<Schema> schema = ParseSchemaDecl(config.schema_decl);
  if (!schema.ok()) return schema.status();
  absl::StatusOr<LoadedRelation> loaded = LoadRelation(config.input_path, *schema);
  if (!loaded.ok()) return loaded.status();
  absl::StatusOr<DomainDescriptor> domain = BuildDomain(loaded->relation);
  if (!domain.ok()) return domain.status();
  absl::StatusOr<ResolvedParams> resolved =
      ResolveParams(config, loaded->relation.size(), domain->size());
  if (!resolved.ok()) {
    // The data loaded fine; the configured budget does not fit it.
    return absl::FailedPreconditionError(resolved.status().message());
  }
  absl::StatusOr<PublishedView> view =
      Anonymize(loaded->relation, *domain, resolved->params, *config.seed);
  if (!view.ok()) return view.status();

  PublishResult result;
  result.metadata = {.n = loaded->relation.size(), .planner = resolved->planner};
  result.r = resolved->r;
  if (!config.out_dir.empty()) {
    if (absl::Status s =
            WritePublishedView(config.out_dir, *view, result.metadata);
        !s.ok()) {
      return s;
    }
  }
  result.instance = std::move(loaded->relation);
  result.view = *std::move(view);
  return result;
}

absl::StatusOr<uint64_t> MarginalQueryEvaluator::Count(
    const ConjunctiveQuery& query) {
  absl::StatusOr<CompiledQuery> compiled = CompiledQuery::Compile(query, domain_);
  if (!compiled.ok()) return compiled.status();
  const std::vector<size_t> attributes(compiled->constrained().begin(),
                                       compiled->constrained().end());
  if (attributes.empty()) return codes_.size();

  uint64_t cells = 1;
  for (size_t a : attributes) {
    cells *= domain_.attribute_size(a);
    if (cells > kMaxHistogramCells) {
      return kernels::CountMatches(*compiled, codes_);
    }
  }
  auto it = histograms_.find(attributes);
  if (it == histograms_.end()) {
    it = histograms_
             .emplace(attributes,
                      kernels::MarginalHistogram(domain_, attributes, codes_))
             .first;
  }
  const std::vector<uint64_t>& histogram = it->second;

  // Sum the histogram over the cross product of matched value indices.
  std::vector<std::vector<uint64_t>> matched(attributes.size());
  for (size_t k = 0; k < attributes.size(); ++k) {
    const auto& flags = compiled->matched(attributes[k]);
    for (uint64_t v = 0; v < flags.size(); ++v) {
      if (flags[v]) matched[k].push_back(v);
    }
    if (matched[k].empty()) return 0;
  }
  uint64_t total = 0;
  auto sum = [&](auto&& self, size_t k, uint64_t cell) -> void {
    if (k == attributes.size()) {
      total += histogram[cell];
      return;
    }
    const uint64_t size = domain_.attribute_size(attributes[k]);
    for (uint64_t v : matched[k]) self(self, k + 1, cell * size + v);
  };
  sum(sum, 0, 0);
  return total;
}

absl::StatusOr<std::vector<ScatterRecord>> ComputeScatter(
    const Relation& instance, const PublishedView& view,
    std::span<const ConjunctiveQuery> queries) {
  absl::StatusOr<std::vector<DomainIndex>> instance_codes =
      view.domain.EncodeRelation(instance);
  if (!instance_codes.ok()) return instance_codes.status();
  MarginalQueryEvaluator on_instance(view.domain, *instance_codes);
  MarginalQueryEvaluator on_view(view.domain, view.view);

  std::vector<ScatterRecord> records;
  records.reserve(queries.size());
  for (const ConjunctiveQuery& query : queries) {
    absl::StatusOr<uint64_t> q_of_i = on_instance.Count(query);
    if (!q_of_i.ok()) return q_of_i.status();
    absl::StatusOr<uint64_t> n_v = on_view.Count(query);
    if (!n_v.ok()) return n_v.status();
    absl::StatusOr<uint64_t> n_d = EvalQueryDomain(query, view.domain);
    if (!n_d.ok()) return n_d.status();
    absl::StatusOr<double> est = EstimateFromCounts(*n_v, *n_d, view.params);
    if (!est.ok()) return est.status();
    records.push_back({.query = query.ToString(),
                       .q_of_i = *q_of_i,
                       .est = *est,
                       .abs_error = std::abs(static_cast<double>(*q_of_i) - *est),
                       .n_d = *n_d});
  }
  return records;
}

std::string ScatterToCsv(std::span<const ScatterRecord> records) {
  std::string out = "query,q_of_i,est,abs_error,n_d\n";
  for (const ScatterRecord& r : records) {
    absl::StrAppend(&out, FormatCsvField(r.query), ",", r.q_of_i, ",",
                    FormatDouble(r.est), ",", FormatDouble(r.abs_error), ",",
                    r.n_d, "\n");
  }
  return out;
}

absl::StatusOr<std::vector<ScatterRecord>> ScatterFromCsv(
    std::string_view contents) {
  std::vector<ScatterRecord> records;
  size_t row = 0;
  bool header = true;
  for (std::string_view line : text::Split(contents, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != "query,q_of_i,est,abs_error,n_d") {
        return absl::InvalidArgumentError("scatter file header is malformed");
      }
      header = false;
      continue;
    }
    ++row;
    absl::StatusOr<std::vector<std::string>> fields = SplitCsvLine(line);
    ScatterRecord r;
    if (!fields.ok() || fields->size() != 5 ||
        !text::ParseNumber((*fields)[1], &r.q_of_i) ||
        !text::ParseNumber((*fields)[2], &r.est) ||
        !text::ParseNumber((*fields)[3], &r.abs_error) ||
        !text::ParseNumber((*fields)[4], &r.n_d)) {
      return absl::InvalidArgumentError(
          absl::StrCat("scatter row ", row, " is malformed"));
    }
    r.query = (*fields)[0];
    records.push_back(std::move(r));
  }
  if (header) return absl::InvalidArgumentError("scatter file is empty");
  return records;
}

absl::StatusOr<ErrorSummary> SummarizeScatter(
    std::span<const ScatterRecord> records, std::span<const double> bands,
    uint64_t large_query_threshold, uint64_t n, double r, double failure_prob) {
  if (records.empty()) return absl::InvalidArgumentError("query family empty");
  ErrorSummary summary;
  summary.query_count = records.size();
  std::vector<size_t> all(records.size());
  std::vector<size_t> large;
  double signed_sum = 0.0;
  for (size_t i = 0; i < records.size(); ++i) {
    all[i] = i;
    if (records[i].q_of_i >= large_query_threshold) {
      large.push_back(i);
      signed_sum += records[i].est - static_cast<double>(records[i].q_of_i);
    }
  }
  summary.bands = Coverage(records, all, bands);
  summary.large_query_threshold = large_query_threshold;
  summary.large_query_count = large.size();
  summary.large_bands = Coverage(records, large, bands);
  summary.mean_signed_error_large =
      large.empty() ? 0.0 : signed_sum / static_cast<double>(large.size());
  summary.r = r;
  summary.failure_prob = failure_prob;
  if (r > 0.0) {
    absl::StatusOr<double> rho =
        ErrorBound({.r = r, .failure_prob = failure_prob});
    if (!rho.ok()) return rho.status();
    summary.rho = *rho;
    summary.guarantee_radius = GuaranteeRadius(*rho, n);
    size_t beyond = 0;
    for (const ScatterRecord& rec : records) {
      if (rec.abs_error >= summary.guarantee_radius) ++beyond;
    }
    summary.fraction_beyond_radius =
        static_cast<double>(beyond) / static_cast<double>(records.size());
  }
  return summary;
}

std::string SummaryToJson(const ErrorSummary& summary) {
  json doc = {
      {"query_count", summary.query_count},
      {"bands", BandsToJson(summary.bands)},
      {"large_query_threshold", summary.large_query_threshold},
      {"large_query_count", summary.large_query_count},
      {"large_query_bands", BandsToJson(summary.large_bands)},
      {"mean_signed_error_large", summary.mean_signed_error_large},
      {"r", summary.r},
      {"failure_prob", summary.failure_prob},
      {"rho", summary.rho},
      {"guarantee_radius", summary.guarantee_radius},
      {"fraction_beyond_radius", summary.fraction_beyond_radius},
  };
  return doc.dump(2) + "\n";
}

absl::StatusOr<ExperimentResult> RunExperiment(const RunConfig& config) {
  if (absl::Status s = ValidateRunConfig(config, /*needs_seed=*/true); !s.ok()) {
    return s;
  }
  Relation instance;
  double r = 0.0;
  PublishMetadata metadata;
  absl::StatusOr<PublishedView> view =
      LoadOrPublish(config, instance, r, metadata);
  if (!view.ok()) return view.status();

  QueryFamilyOptions options{.max_arity = config.max_arity,
                             .cap = config.query_cap,
                             .exhaustive = config.exhaustive,
                             .seed = config.seed.value_or(view->seed)};
  absl::StatusOr<std::vector<ConjunctiveQuery>> queries =
      GenerateQueryFamily(view->domain, options);
  if (!queries.ok()) return queries.status();

  ExperimentResult result;
  absl::StatusOr<std::vector<ScatterRecord>> records =
      ComputeScatter(instance, *view, *queries);
  if (!records.ok()) return records.status();
  result.records = *std::move(records);
  absl::StatusOr<ErrorSummary> summary =
      SummarizeScatter(result.records, config.bands,
                       config.large_query_threshold, instance.size(), r,
                       metadata.planner ? metadata.planner->failure_prob
                                        : config.failure_prob);
  if (!summary.ok()) return summary.status();
  result.summary = *summary;

  if (!config.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) return absl::UnavailableError(ec.message());
    const std::filesystem::path dir(config.out_dir);
    if (absl::Status s = WriteFile((dir / "scatter.csv").string(),
                                   ScatterToCsv(result.records));
        !s.ok()) {
      return s;
    }
    if (absl::Status s = WriteFile((dir / "summary.json").string(),
                                   SummaryToJson(result.summary));
        !s.ok()) {
      return s;
    }
  }
  return result;
}

absl::StatusOr<ErrorTable> SummarizeErrors(
    std::span<const ScatterRecord> records, std::span<const double> bands) {
  if (records.empty()) return absl::InvalidArgumentError("no scatter records");
  ErrorTable table;
  std::vector<size_t> order(records.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  table.overall = Coverage(records, order, bands);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return records[a].q_of_i < records[b].q_of_i;
  });
  const size_t total = order.size();
  for (size_t k = 0; k < 10; ++k) {
    const size_t begin = k * total / 10;
    const size_t end = (k + 1) * total / 10;
    if (begin == end) continue;
    std::span<const size_t> chunk(order.data() + begin, end - begin);
    table.deciles.push_back({.q_low = records[chunk.front()].q_of_i,
                             .q_high = records[chunk.back()].q_of_i,
                             .count = chunk.size(),
                             .bands = Coverage(records, chunk, bands)});
  }
  return table;
}

absl::StatusOr<ErrorTable> SummarizeErrorsFile(const std::string& scatter_path,
                                               std::span<const double> bands) {
  absl::StatusOr<std::string> contents = ReadFile(scatter_path);
  if (!contents.ok()) return contents.status();
  absl::StatusOr<std::vector<ScatterRecord>> records = ScatterFromCsv(*contents);
  if (!records.ok()) return records.status();
  return SummarizeErrors(*records, bands);
}

std::string ErrorTableToText(const ErrorTable& table) {
  std::string out = "group,q_low,q_high,count";
  for (const BandCoverage& b : table.overall) {
    absl::StrAppend(&out, ",within_", FormatDouble(b.width));
  }
  absl::StrAppend(&out, "\nall,,,");
  size_t count = 0;
  for (const DecileCoverage& d : table.deciles) count += d.count;
  absl::StrAppend(&out, count);
  for (const BandCoverage& b : table.overall) {
    absl::StrAppend(&out, ",", absl::StrFormat("%.6g", b.coverage));
  }
  out.push_back('\n');
  for (size_t k = 0; k < table.deciles.size(); ++k) {
    const DecileCoverage& d = table.deciles[k];
    absl::StrAppend(&out, "decile", k + 1, ",", d.q_low, ",", d.q_high, ",",
                    d.count);
    for (const BandCoverage& b : d.bands) {
      absl::StrAppend(&out, ",", absl::StrFormat("%.6g", b.coverage));
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace anonview::harness
