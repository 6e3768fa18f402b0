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

// Command-line front end: parameter planning, publishing, estimation,
// adversary analysis and the accuracy experiments.
//
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "anonview/adversary.h"
#include "anonview/anonymizer.h"
#include "anonview/core_model.h"
#include "anonview/estimator.h"
#include "anonview/harness/csv.h"
#include "anonview/harness/experiment.h"
#include "anonview/harness/published_files.h"
#include "anonview/harness/query_parser.h"
#include "anonview/harness/surrogate.h"
#include "json.hpp"

namespace anonview {
namespace {

using harness::RunConfig;
using nlohmann::json;

constexpr int kConfigError = 2;
constexpr int kDataError = 3;

// Error with the exit code it maps to.
struct Failure {
  int code;
  absl::Status status;
};

int Report(const Failure& f) {
  std::cerr << "error: " << f.status.message() << "\n";
  return f.code;
}

json VerdictToJson(const Verdict& v) {
  return {{"pass", v.pass}, {"violated", v.violated}, {"warnings", v.warnings}};
}

// Flags shared by the subcommands that take a RunConfig.
struct RunFlags {
  RunConfig config;
  double k = 0, gamma = 0, alpha = 0, beta = 0;
  uint64_t seed = 0;
  std::string policy = "minimal-beta";
  std::string view_dir;
  CLI::Option* k_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* beta_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* view_opt = nullptr;

  void Register(CLI::App* app, bool experiment) {
    app->add_option("--input", config.input_path, "CSV file with a header row");
    app->add_option("--schema", config.schema_decl,
                    "attribute declarations, e.g. age:int,sex:str");
    k_opt = app->add_option("--k", k, "prior bound multiplier (d = k n/m)");
    gamma_opt = app->add_option("--gamma", gamma, "posterior bound");
    alpha_opt = app->add_option("--alpha", alpha, "retention probability");
    beta_opt = app->add_option("--beta", beta, "insertion probability");
    app->add_option("--policy", policy, "minimal-beta or simple-beta");
    seed_opt = app->add_option("--seed", seed, "random seed");
    app->add_option("--failure-prob", config.failure_prob,
                    "failure probability of the accuracy guarantee");
    app->add_option("--out-dir", config.out_dir, "output directory");
    if (experiment) {
      app->add_option("--arity", config.max_arity,
                      "largest number of constrained attributes");
      app->add_option("--cap", config.query_cap,
                      "sample this many queries when the family is larger");
      app->add_flag("--exhaustive", config.exhaustive,
                    "evaluate the whole query family");
      app->add_option("--bands", config.bands, "error band widths")
          ->delimiter(',');
      app->add_option("--threshold", config.large_query_threshold,
                      "Q(I) threshold for the large-query statistics");
      view_opt = app->add_option("--view-dir", view_dir,
                                 "reuse a publication instead of anonymizing");
    }
  }

  std::optional<Failure> Finish(bool needs_seed) {
    if (*k_opt) config.k = k;
    if (*gamma_opt) config.gamma = gamma;
    if (*alpha_opt) config.alpha = alpha;
    if (*beta_opt) config.beta = beta;
    if (*seed_opt) config.seed = seed;
    if (view_opt != nullptr && *view_opt) config.view_dir = view_dir;
    absl::StatusOr<BetaPolicy> parsed = ParseBetaPolicy(policy);
    if (!parsed.ok()) return Failure{kConfigError, parsed.status()};
    config.policy = *parsed;
    if (absl::Status s = harness::ValidateRunConfig(config, needs_seed);
        !s.ok()) {
      return Failure{kConfigError, s};
    }
    return std::nullopt;
  }
};

// Planner and parameter-check errors come from the configuration; anything
// else surfacing from a pipeline run is a data problem.
int ExitCodeFor(const absl::Status& status) {
  return status.code() == absl::StatusCode::kFailedPrecondition ? kConfigError
                                                                : kDataError;
}

int RunPlan(uint64_t n, uint64_t m, double k, double gamma,
            const std::string& policy_name, double failure_prob) {
  absl::StatusOr<BetaPolicy> policy = ParseBetaPolicy(policy_name);
  if (!policy.ok()) return Report({kConfigError, policy.status()});
  absl::StatusOr<ParameterPlan> plan =
      PlanParameters(n, m, k, gamma, *policy, failure_prob);
  if (!plan.ok()) return Report({kConfigError, plan.status()});
  absl::StatusOr<Verdict> privacy = CheckPrivacyParams(plan->params, plan->privacy);
  absl::StatusOr<Verdict> utility =
      CheckUtilityParams(plan->params, n, m, plan->utility);
  absl::StatusOr<double> rho = ErrorBound(plan->utility);
  if (!privacy.ok() || !utility.ok() || !rho.ok()) {
    return Report({kConfigError, !privacy.ok()   ? privacy.status()
                                 : !utility.ok() ? utility.status()
                                                 : rho.status()});
  }
  const double expected = ExpectedViewSize(n, m, plan->params);
  json out = {
      {"n", n},
      {"m", m},
      {"k", k},
      {"gamma", gamma},
      {"d", plan->privacy.d},
      {"policy", std::string(BetaPolicyName(*policy))},
      {"alpha", plan->params.alpha},
      {"beta", plan->params.beta},
      {"r", plan->utility.r},
      {"failure_prob", failure_prob},
      {"rho", *rho},
      {"guarantee_radius", GuaranteeRadius(*rho, n)},
      {"expected_view_size", expected},
      {"expected_size_ratio", expected / static_cast<double>(n)},
      {"privacy_check", VerdictToJson(*privacy)},
      {"utility_check", VerdictToJson(*utility)},
  };
  std::cout << out.dump(2) << "\n";
  return 0;
}

int RunPublish(RunFlags& flags) {
  if (auto f = flags.Finish(/*needs_seed=*/true)) return Report(*f);
  if (flags.config.out_dir.empty()) {
    return Report({kConfigError, absl::InvalidArgumentError("--out-dir is required")});
  }
  absl::StatusOr<harness::PublishResult> result = harness::Publish(flags.config);
  if (!result.ok()) return Report({ExitCodeFor(result.status()), result.status()});
  std::cout << "n=" << result->instance.size()
            << " m=" << result->view.domain.size()
            << " alpha=" << result->view.params.alpha
            << " beta=" << result->view.params.beta
            << " view_size=" << result->view.size() << " expected_view_size="
            << ExpectedViewSize(result->instance.size(),
                                result->view.domain.size(), result->view.params)
            << "\n";
  return 0;
}

int RunEstimate(const std::string& view_dir,
                const std::vector<std::string>& queries, bool clamp,
                std::optional<double> failure_prob) {
  if (view_dir.empty()) {
    return Report({kConfigError, absl::InvalidArgumentError("--view-dir is required")});
  }
  absl::StatusOr<harness::LoadedView> loaded = harness::ReadPublishedView(view_dir);
  if (!loaded.ok()) return Report({kDataError, loaded.status()});
  EstimateOptions options;
  options.n = loaded->metadata.n;
  options.clamp = clamp;
  if (loaded->metadata.planner) {
    options.utility = UtilityBudget{
        .r = loaded->metadata.planner->r,
        .failure_prob = failure_prob.value_or(loaded->metadata.planner->failure_prob)};
  } else if (loaded->view.params.beta > 0.0 && loaded->metadata.n > 0) {
    options.utility = UtilityBudget{
        .r = 4.0 * loaded->view.params.beta *
             static_cast<double>(loaded->view.domain.size()) /
             static_cast<double>(loaded->metadata.n),
        .failure_prob = failure_prob.value_or(0.05)};
  }
  std::vector<std::string> texts = queries;
  if (texts.empty()) texts.push_back("");
  std::cout << "query,n_view,n_domain,estimate,guarantee_radius\n";
  for (const std::string& text : texts) {
    absl::StatusOr<ConjunctiveQuery> query =
        harness::ParseQuery(text, loaded->view.domain.schema());
    if (!query.ok()) return Report({kConfigError, query.status()});
    absl::StatusOr<EstimateReport> report =
        Estimate(*query, loaded->view, options);
    if (!report.ok()) return Report({kConfigError, report.status()});
    std::printf("%s,%llu,%llu,%.17g,", harness::FormatCsvField(text).c_str(),
                static_cast<unsigned long long>(report->n_view),
                static_cast<unsigned long long>(report->n_domain),
                report->estimate);
    if (report->guarantee_radius) {
      std::printf("%.17g", *report->guarantee_radius);
    }
    std::printf("\n");
  }
  return 0;
}

struct AttackFlags {
  double alpha = 0.5, beta = 0.0, d = 0.0, gamma = 0.0;
  std::vector<double> priors;
  std::string view_dir;
  bool breach = false;
  std::string input, schema;
  uint64_t seed = 0;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* beta_opt = nullptr;
  CLI::Option* d_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

int RunBreach(const AttackFlags& flags, const MechanismParams& params) {
  if (!*flags.seed_opt) {
    return Report({kConfigError, absl::InvalidArgumentError("--seed is required")});
  }
  if (flags.input.empty() || flags.schema.empty()) {
    return Report({kConfigError,
                   absl::InvalidArgumentError("--breach needs --input and --schema")});
  }
  absl::StatusOr<Schema> schema = harness::ParseSchemaDecl(flags.schema);
  if (!schema.ok()) return Report({kConfigError, schema.status()});
  absl::StatusOr<harness::LoadedRelation> loaded =
      harness::LoadRelation(flags.input, *schema);
  if (!loaded.ok()) return Report({kDataError, loaded.status()});
  absl::StatusOr<DomainDescriptor> domain = BuildDomain(loaded->relation);
  if (!domain.ok()) return Report({kDataError, domain.status()});
  absl::StatusOr<BreachReport> report =
      CorrelatedBreachDemo(loaded->relation, *domain, params, flags.seed);
  if (!report.ok()) return Report({kDataError, report.status()});
  json out = {{"view_size", report->drawn_view.size()},
              {"posterior_all_present", report->posterior_of_s},
              {"expected_posterior", report->expected_posterior},
              {"prior", 0.5}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int RunAttack(const AttackFlags& flags) {
  MechanismParams params{.alpha = flags.alpha, .beta = flags.beta};
  if (!flags.view_dir.empty()) {
    absl::StatusOr<harness::LoadedView> loaded =
        harness::ReadPublishedView(flags.view_dir);
    if (!loaded.ok()) return Report({kDataError, loaded.status()});
    params = loaded->view.params;
  } else if (!*flags.alpha_opt || !*flags.beta_opt) {
    return Report({kConfigError, absl::InvalidArgumentError(
                                     "supply --alpha and --beta or --view-dir")});
  }
  if (absl::Status s = params.Validate(); !s.ok()) {
    return Report({kConfigError, s});
  }
  if (flags.breach) return RunBreach(flags, params);
  if (!*flags.d_opt || !*flags.gamma_opt) {
    return Report({kConfigError, absl::InvalidArgumentError("--d and --gamma are required")});
  }
  const PrivacyBudget budget{.d = flags.d, .gamma = flags.gamma};
  absl::StatusOr<Verdict> privacy = CheckPrivacyParams(params, budget);
  if (!privacy.ok()) return Report({kConfigError, privacy.status()});
  json out = {{"alpha", params.alpha},
              {"beta", params.beta},
              {"d", budget.d},
              {"gamma", budget.gamma},
              {"privacy_check", VerdictToJson(*privacy)}};
  if (params.alpha == 0.5) {
    absl::StatusOr<Verdict> exclusive = CheckExclusiveSafe(params, budget);
    if (exclusive.ok()) out["exclusive_check"] = VerdictToJson(*exclusive);
  }
  std::vector<double> priors = flags.priors;
  if (priors.empty()) priors.push_back(budget.d);
  json rows = json::array();
  for (double p : priors) {
    json row = {{"prior", p}};
    for (bool present : {true, false}) {
      absl::StatusOr<double> posterior = PosteriorIndependent(p, params, present);
      const char* key = present ? "in_view" : "not_in_view";
      if (!posterior.ok()) {
        row[key] = {{"error", std::string(posterior.status().message())}};
        continue;
      }
      absl::StatusOr<LeakageVerdict> leak = ClassifyLeakage(p, *posterior, budget);
      if (!leak.ok()) return Report({kConfigError, leak.status()});
      row[key] = {{"posterior", *posterior},
                  {"leakage", std::string(LeakageKindName(leak->kind))}};
    }
    absl::StatusOr<double> worst = PosteriorExclusiveWorstCase(p, params);
    if (worst.ok()) {
      absl::StatusOr<LeakageVerdict> leak = ClassifyLeakage(p, *worst, budget);
      if (!leak.ok()) return Report({kConfigError, leak.status()});
      row["exclusive_worst_case"] = {
          {"posterior", *worst},
          {"leakage", std::string(LeakageKindName(leak->kind))}};
    }
    rows.push_back(row);
  }
  out["posteriors"] = rows;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int RunFrontier(uint64_t n, uint64_t m, double gamma, double c,
                std::optional<double> d) {
  absl::StatusOr<double> frontier = ImpossibilityFrontier(n, m, gamma, c);
  if (!frontier.ok()) return Report({kConfigError, frontier.status()});
  json out = {{"n", n}, {"m", m}, {"gamma", gamma}, {"c", c},
              {"frontier_d", *frontier},
              {"frontier_k", *frontier * static_cast<double>(m) /
                                 static_cast<double>(n)}};
  if (d) {
    out["d"] = *d;
    out["beyond_frontier"] = *d >= *frontier;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int RunSdDemo(int m, int n, double f, std::vector<double> alphas,
              std::vector<double> betas) {
  if (alphas.size() != betas.size() || alphas.empty()) {
    return Report({kConfigError, absl::InvalidArgumentError(
                                     "--alpha and --beta lists must pair up")});
  }
  std::cout << "alpha,beta,queries,fraction_below,meaningless,epsilon\n";
  for (size_t i = 0; i < alphas.size(); ++i) {
    const MechanismParams params{.alpha = alphas[i], .beta = betas[i]};
    absl::StatusOr<MeaningfulnessReport> report =
        MeaningfulnessExperiment(m, n, params, f);
    if (!report.ok()) return Report({kConfigError, report.status()});
    std::string epsilon;
    if (m <= 10) {
      absl::StatusOr<double> eps = IndistinguishabilityEpsilon(params, m, n);
      if (eps.ok()) {
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%.17g", *eps);
        epsilon = std::isinf(*eps) ? "inf" : buffer;
      }
    }
    std::printf("%.17g,%.17g,%zu,%.17g,%s,%s\n", params.alpha, params.beta,
                report->per_query.size(), report->fraction_below,
                report->meaningless ? "true" : "false", epsilon.c_str());
  }
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"anonview: insert-remove anonymization of relational data"};
  app.require_subcommand(1);

  // plan
  CLI::App* plan = app.add_subcommand("plan", "choose alpha and beta");
  uint64_t plan_n = 0, plan_m = 0;
  double plan_k = 0, plan_gamma = 0, plan_fp = 0.05;
  std::string plan_policy = "minimal-beta";
  RunFlags plan_data;
  plan->add_option("--n", plan_n, "instance size");
  plan->add_option("--m", plan_m, "domain size");
  plan->add_option("--input", plan_data.config.input_path,
                   "derive n and m from a CSV file instead");
  plan->add_option("--schema", plan_data.config.schema_decl,
                   "attribute declarations for --input");
  plan->add_option("--k", plan_k)->required();
  plan->add_option("--gamma", plan_gamma)->required();
  plan->add_option("--policy", plan_policy);
  plan->add_option("--failure-prob", plan_fp);

  // publish
  CLI::App* publish = app.add_subcommand("publish", "anonymize and write a view");
  RunFlags publish_flags;
  publish_flags.Register(publish, /*experiment=*/false);

  // estimate
  CLI::App* estimate = app.add_subcommand("estimate", "estimate counting queries");
  std::string estimate_dir;
  std::vector<std::string> estimate_queries;
  bool estimate_clamp = false;
  double estimate_fp = 0.05;
  estimate->add_option("--view-dir", estimate_dir, "publication directory");
  estimate->add_option("--query", estimate_queries,
                       "query text, e.g. \"age in [26,31] and sex=F\"");
  estimate->add_flag("--clamp", estimate_clamp, "clamp estimates into [0, n]");
  CLI::Option* estimate_fp_opt = estimate->add_option("--failure-prob", estimate_fp);

  // attack
  CLI::App* attack = app.add_subcommand("attack", "posterior and leakage analysis");
  AttackFlags attack_flags;
  attack_flags.alpha_opt = attack->add_option("--alpha", attack_flags.alpha);
  attack_flags.beta_opt = attack->add_option("--beta", attack_flags.beta);
  attack->add_option("--view-dir", attack_flags.view_dir,
                     "read alpha and beta from a publication");
  attack_flags.d_opt = attack->add_option("--d", attack_flags.d, "prior bound");
  attack_flags.gamma_opt =
      attack->add_option("--gamma", attack_flags.gamma, "posterior bound");
  attack->add_option("--prior", attack_flags.priors, "prior probabilities")
      ->delimiter(',');
  attack->add_flag("--breach", attack_flags.breach,
                   "run the correlated-prior breach on --input");
  attack->add_option("--input", attack_flags.input);
  attack->add_option("--schema", attack_flags.schema);
  attack_flags.seed_opt = attack->add_option("--seed", attack_flags.seed);

  // experiment
  CLI::App* experiment = app.add_subcommand("experiment", "accuracy experiment");
  RunFlags experiment_flags;
  experiment_flags.Register(experiment, /*experiment=*/true);

  // summarize
  CLI::App* summarize = app.add_subcommand("summarize", "coverage by Q(I) decile");
  std::string scatter_path;
  std::vector<double> summarize_bands = {100, 500, 1000, 2000};
  summarize->add_option("--scatter", scatter_path)->required();
  summarize->add_option("--bands", summarize_bands)->delimiter(',');

  // frontier
  CLI::App* frontier = app.add_subcommand("frontier", "impossibility threshold for d");
  uint64_t frontier_n = 0, frontier_m = 0;
  double frontier_gamma = 0, frontier_c = 1.0, frontier_d = 0;
  frontier->add_option("--n", frontier_n)->required();
  frontier->add_option("--m", frontier_m)->required();
  frontier->add_option("--gamma", frontier_gamma)->required();
  frontier->add_option("--c", frontier_c, "constant of the threshold");
  CLI::Option* frontier_d_opt = frontier->add_option("--d", frontier_d);

  // sd-demo
  CLI::App* sd = app.add_subcommand("sd-demo", "exact meaningfulness experiment");
  int sd_m = 10, sd_n = 2;
  double sd_f = 0.2;
  std::vector<double> sd_alpha, sd_beta;
  sd->add_option("--m", sd_m, "domain size (at most 12)");
  sd->add_option("--n", sd_n, "instance size");
  sd->add_option("--f", sd_f, "query size slack");
  sd->add_option("--alpha", sd_alpha)->delimiter(',')->required();
  sd->add_option("--beta", sd_beta)->delimiter(',')->required();

  // surrogate
  CLI::App* surrogate =
      app.add_subcommand("surrogate", "write a synthetic census-style relation");
  uint64_t surrogate_seed = 0, surrogate_n = harness::kAdultsRows;
  std::string surrogate_out;
  surrogate->add_option("--seed", surrogate_seed)->required();
  surrogate->add_option("--n", surrogate_n);
  surrogate->add_option("--out", surrogate_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  if (*plan) {
    if (!plan_data.config.input_path.empty()) {
      absl::StatusOr<Schema> schema =
          harness::ParseSchemaDecl(plan_data.config.schema_decl);
      if (!schema.ok()) return Report({kConfigError, schema.status()});
      absl::StatusOr<harness::LoadedRelation> loaded =
          harness::LoadRelation(plan_data.config.input_path, *schema);
      if (!loaded.ok()) return Report({kDataError, loaded.status()});
      absl::StatusOr<DomainDescriptor> domain = BuildDomain(loaded->relation);
      if (!domain.ok()) return Report({kDataError, domain.status()});
      plan_n = loaded->relation.size();
      plan_m = domain->size();
    } else if (plan_n == 0 || plan_m == 0) {
      return Report({kConfigError, absl::InvalidArgumentError(
                                       "supply --n and --m, or --input and --schema")});
    }
    return RunPlan(plan_n, plan_m, plan_k, plan_gamma, plan_policy, plan_fp);
  }
  if (*publish) return RunPublish(publish_flags);
  if (*estimate) {
    return RunEstimate(estimate_dir, estimate_queries, estimate_clamp,
                       *estimate_fp_opt ? std::optional<double>(estimate_fp)
                                        : std::nullopt);
  }
  if (*attack) return RunAttack(attack_flags);
  if (*experiment) {
    if (auto f = experiment_flags.Finish(/*needs_seed=*/true)) return Report(*f);
    absl::StatusOr<harness::ExperimentResult> result =
        harness::RunExperiment(experiment_flags.config);
    if (!result.ok()) return Report({ExitCodeFor(result.status()), result.status()});
    std::cout << harness::SummaryToJson(result->summary);
    return 0;
  }
  if (*summarize) {
    absl::StatusOr<harness::ErrorTable> table =
        harness::SummarizeErrorsFile(scatter_path, summarize_bands);
    if (!table.ok()) return Report({kDataError, table.status()});
    std::cout << harness::ErrorTableToText(*table);
    return 0;
  }
  if (*frontier) {
    return RunFrontier(frontier_n, frontier_m, frontier_gamma, frontier_c,
                       *frontier_d_opt ? std::optional<double>(frontier_d)
                                       : std::nullopt);
  }
  if (*sd) return RunSdDemo(sd_m, sd_n, sd_f, sd_alpha, sd_beta);
  if (*surrogate) {
    absl::StatusOr<Relation> relation =
        harness::MakeAdultsSurrogate(surrogate_seed, surrogate_n);
    if (!relation.ok()) return Report({kConfigError, relation.status()});
    absl::Status s = harness::WriteFile(
        surrogate_out,
        harness::FormatRelationCsv(relation->schema(), relation->tuples()));
    if (!s.ok()) return Report({kDataError, s});
    std::cout << "wrote " << relation->size() << " rows; schema "
              << harness::AdultsSchemaDecl() << "\n";
    return 0;
  }
  return kConfigError;
}

}  // namespace
}  // namespace anonview

int main(int argc, char** argv) { return anonview::Main(argc, argv); }
