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

#include "anonview/adversary.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>

#include "absl/strings/str_cat.h"
#include "anonview/kernels.h"

namespace anonview {
namespace {

constexpr double kMassTolerance = 1e-12;
constexpr int kMaxMeaningfulnessDomain = 12;
constexpr int kMaxIndistinguishabilityDomain = 10;

absl::Status CheckProbability(double p, std::string_view what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat(std::string(what), "=", p, " outside [0,1]"));
  }
  return absl::OkStatus();
}

absl::Status CheckOracleDomain(int m, int limit) {
  if (m < 1 || m > limit) {
    return absl::InvalidArgumentError(absl::StrCat(
        "oracle domain too large: m=", m, " (limit ", limit, ")"));
  }
  return absl::OkStatus();
}

std::vector<TupleMask> SubsetsOfSize(int m, int n) {
  std::vector<TupleMask> out;
  for (TupleMask s = 0; s < (TupleMask{1} << m); ++s) {
    if (std::popcount(s) == n) out.push_back(s);
  }
  return out;
}

}  // namespace

absl::StatusOr<double> PosteriorIndependent(double p,
                                            const MechanismParams& params,
                                            bool present_in_view) {
  if (absl::Status s = CheckProbability(p, "prior"); !s.ok()) return s;
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  const double given_t = present_in_view ? params.alpha : 1.0 - params.alpha;
  const double given_not_t = present_in_view ? params.beta : 1.0 - params.beta;
  const double numerator = given_t * p;
  const double denominator = numerator + given_not_t * (1.0 - p);
  if (denominator == 0.0) {
    return absl::InvalidArgumentError("event has zero probability");
  }
  return numerator / denominator;
}

absl::StatusOr<double> PosteriorExclusiveWorstCase(
    double p, const MechanismParams& params) {
  if (absl::Status s = CheckProbability(p, "prior"); !s.ok()) return s;
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  const double numerator = params.alpha * (1.0 - params.beta) * p;
  const double denominator =
      numerator + params.beta * (1.0 - params.alpha) * (1.0 - p);
  if (denominator == 0.0) {
    return absl::InvalidArgumentError("event has zero probability");
  }
  return numerator / denominator;
}

absl::StatusOr<Verdict> CheckExclusiveSafe(const MechanismParams& params,
                                           const PrivacyBudget& budget) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  if (absl::Status s = budget.Validate(); !s.ok()) return s;
  if (params.alpha != 0.5) {
    return absl::InvalidArgumentError(
        "exclusive check requires alpha = 1/2");
  }
  if (budget.d >= budget.gamma) {
    return absl::InvalidArgumentError("budget requires d < gamma");
  }
  const double bound = 2.0 * (budget.d / budget.gamma) *
                       ((1.0 - budget.gamma) / (1.0 - budget.d));
  Verdict verdict;
  if (params.beta < bound * (1.0 - 1e-12)) {
    verdict.violated =
        absl::StrCat("beta >= 2(d/gamma)((1-gamma)/(1-d)) (beta=", params.beta,
                     ", bound=", bound, ")");
    return verdict;
  }
  absl::StatusOr<double> worst = PosteriorExclusiveWorstCase(budget.d, params);
  if (!worst.ok()) return worst.status();
  if (*worst > budget.gamma * (1.0 + 1e-12)) {
    verdict.violated = absl::StrCat("worst-case exclusive posterior ", *worst,
                                    " exceeds gamma=", budget.gamma);
    return verdict;
  }
  verdict.pass = true;
  return verdict;
}

std::string_view LeakageKindName(LeakageKind kind) {
  switch (kind) {
    case LeakageKind::kNone:
      return "none";
    case LeakageKind::kPositive:
      return "positive";
    case LeakageKind::kNegative:
      return "negative";
  }
  return "unknown";
}

absl::StatusOr<LeakageVerdict> ClassifyLeakage(double prior, double posterior,
                                               const PrivacyBudget& budget) {
  if (absl::Status s = budget.Validate(); !s.ok()) return s;
  if (!(prior > 0.0 && prior <= 1.0)) {
    return absl::InvalidArgumentError(
        "prior must lie in (0,1]; the posterior/prior ratio is undefined");
  }
  if (absl::Status s = CheckProbability(posterior, "posterior"); !s.ok()) {
    return s;
  }
  LeakageVerdict verdict{
      .prior = prior, .posterior = posterior, .budget = budget};
  if (prior == 1.0) return verdict;
  if (prior <= budget.d && posterior > budget.gamma) {
    verdict.kind = LeakageKind::kPositive;
  } else if (posterior / prior < budget.d / budget.gamma) {
    verdict.kind = LeakageKind::kNegative;
  }
  return verdict;
}

absl::StatusOr<double> GammaFromRelative(double d, double delta) {
  if (!(d > 0.0 && d < 1.0) || !(delta >= 0.0)) {
    return absl::InvalidArgumentError("requires 0 < d < 1 and delta >= 0");
  }
  const double gamma = d * std::exp(delta);
  if (gamma >= 1.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("budget degenerate: d*e^delta=", gamma, " >= 1"));
  }
  return gamma;
}

absl::StatusOr<double> DeltaFromAbsolute(double d, double gamma) {
  if (!(d > 0.0 && d < gamma && gamma < 1.0)) {
    return absl::InvalidArgumentError("requires 0 < d < gamma < 1");
  }
  return std::log((gamma / d) * ((1.0 - d) / (1.0 - gamma)));
}

absl::StatusOr<double> EpsilonFromRelative(double delta) {
  if (!(delta >= 0.0)) {
    return absl::InvalidArgumentError("delta must be nonnegative");
  }
  return 2.0 * delta + 2.0 * std::log(2.0);
}

absl::StatusOr<double> ImpossibilityFrontier(uint64_t n, uint64_t m,
                                             double gamma, double c) {
  if (!(c > 0.0)) return absl::InvalidArgumentError("c must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    return absl::InvalidArgumentError("gamma must lie in (0,1)");
  }
  if (m == 0) return absl::InvalidArgumentError("m must be at least 1");
  return (1.0 / c) * (gamma / (1.0 - gamma)) *
         (static_cast<double>(n) / std::sqrt(static_cast<double>(m)));
}

TupleMask MaskFromCodes(std::span<const DomainIndex> codes) {
  TupleMask mask = 0;
  for (DomainIndex code : codes) mask |= TupleMask{1} << code;
  return mask;
}

std::vector<DomainIndex> CodesFromMask(TupleMask mask) {
  std::vector<DomainIndex> codes;
  for (DomainIndex j = 0; mask != 0; ++j, mask >>= 1) {
    if (mask & 1) codes.push_back(j);
  }
  return codes;
}

double ViewLikelihood(int m, TupleMask instance, TupleMask view,
                      const MechanismParams& params) {
  double likelihood = 1.0;
  for (int j = 0; j < m; ++j) {
    const bool in_instance = (instance >> j) & 1;
    const bool in_view = (view >> j) & 1;
    const double keep = in_instance ? params.alpha : params.beta;
    likelihood *= in_view ? keep : 1.0 - keep;
  }
  return likelihood;
}

absl::StatusOr<PriorModel> PriorModel::Independent(
    int m, std::vector<double> probabilities) {
  if (absl::Status s = CheckOracleDomain(m, kMaxOracleDomain); !s.ok()) {
    return s;
  }
  if (probabilities.size() != static_cast<size_t>(m)) {
    return absl::InvalidArgumentError("one probability per domain tuple");
  }
  for (double p : probabilities) {
    if (absl::Status s = CheckProbability(p, "tuple probability"); !s.ok()) {
      return s;
    }
  }
  PriorModel prior;
  prior.kind_ = Kind::kIndependent;
  prior.m_ = m;
  for (TupleMask instance = 0; instance < (TupleMask{1} << m); ++instance) {
    double mass = 1.0;
    for (int j = 0; j < m && mass > 0.0; ++j) {
      mass *= (instance >> j) & 1 ? probabilities[j] : 1.0 - probabilities[j];
    }
    if (mass > 0.0) prior.instances_.emplace_back(instance, mass);
  }
  prior.marginals_ = std::move(probabilities);
  return prior;
}

absl::StatusOr<PriorModel> PriorModel::Exclusive(
    int m, std::vector<ExclusionSet> sets) {
  if (absl::Status s = CheckOracleDomain(m, kMaxOracleDomain); !s.ok()) {
    return s;
  }
  std::vector<double> marginals(m, 0.0);
  std::vector<bool> used(m, false);
  for (const ExclusionSet& set : sets) {
    if (set.empty()) {
      return absl::InvalidArgumentError("exclusion sets must be nonempty");
    }
    double total = 0.0;
    for (const Member& member : set) {
      if (member.tuple >= static_cast<DomainIndex>(m)) {
        return absl::InvalidArgumentError("exclusion set member outside domain");
      }
      if (used[member.tuple]) {
        return absl::InvalidArgumentError("exclusion sets must be disjoint");
      }
      if (absl::Status s = CheckProbability(member.probability, "member mass");
          !s.ok()) {
        return s;
      }
      used[member.tuple] = true;
      marginals[member.tuple] = member.probability;
      total += member.probability;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
      return absl::InvalidArgumentError(
          absl::StrCat("exclusion set mass sums to ", total, ", not 1"));
    }
  }
  PriorModel prior;
  prior.kind_ = Kind::kExclusive;
  prior.m_ = m;
  prior.marginals_ = std::move(marginals);
  // One chosen member per set, independently across sets.
  std::vector<std::pair<TupleMask, double>> partial = {{0, 1.0}};
  for (const ExclusionSet& set : sets) {
    std::vector<std::pair<TupleMask, double>> next;
    for (const auto& [mask, mass] : partial) {
      for (const Member& member : set) {
        if (member.probability == 0.0) continue;
        next.emplace_back(mask | (TupleMask{1} << member.tuple),
                          mass * member.probability);
      }
    }
    partial = std::move(next);
  }
  prior.instances_ = std::move(partial);
  return prior;
}

absl::StatusOr<PriorModel> PriorModel::Explicit(
    int m, std::vector<std::pair<TupleMask, double>> instances) {
  if (absl::Status s = CheckOracleDomain(m, kMaxOracleDomain); !s.ok()) {
    return s;
  }
  std::map<TupleMask, double> merged;
  double total = 0.0;
  for (const auto& [mask, mass] : instances) {
    if (m < 32 && (mask >> m) != 0) {
      return absl::InvalidArgumentError("instance mask outside domain");
    }
    if (!(mass >= 0.0)) {
      return absl::InvalidArgumentError("instance mass must be nonnegative");
    }
    merged[mask] += mass;
    total += mass;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("explicit prior mass sums to ", total, ", not 1"));
  }
  PriorModel prior;
  prior.kind_ = Kind::kExplicit;
  prior.m_ = m;
  prior.marginals_.assign(m, 0.0);
  for (const auto& [mask, mass] : merged) {
    if (mass == 0.0) continue;
    prior.instances_.emplace_back(mask, mass);
    for (int j = 0; j < m; ++j) {
      if ((mask >> j) & 1) prior.marginals_[j] += mass;
    }
  }
  return prior;
}

double PriorModel::Marginal(DomainIndex tuple) const {
  return marginals_[tuple];
}

bool PriorModel::IsBounded(double d) const {
  return std::all_of(marginals_.begin(), marginals_.end(), [d](double p) {
    return p <= d || std::abs(p - 1.0) <= kMassTolerance;
  });
}

absl::StatusOr<double> ExactEventPosterior(
    const PriorModel& prior, const MechanismParams& params, TupleMask view,
    const std::function<bool(TupleMask)>& event) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  const int m = prior.domain_size();
  if (m < 32 && (view >> m) != 0) {
    return absl::InvalidArgumentError("view mask outside domain");
  }
  double joint = 0.0;
  double evidence = 0.0;
  for (const auto& [instance, mass] : prior.Instances()) {
    const double w = mass * ViewLikelihood(m, instance, view, params);
    evidence += w;
    if (event(instance)) joint += w;
  }
  if (evidence == 0.0) {
    return absl::InvalidArgumentError("view impossible under prior");
  }
  return joint / evidence;
}

absl::StatusOr<double> ExactPosterior(const PriorModel& prior,
                                      const MechanismParams& params,
                                      TupleMask view, DomainIndex tuple) {
  if (tuple >= static_cast<DomainIndex>(prior.domain_size())) {
    return absl::InvalidArgumentError("tuple outside domain");
  }
  const TupleMask bit = TupleMask{1} << tuple;
  return ExactEventPosterior(prior, params, view,
                             [bit](TupleMask instance) { return instance & bit; });
}

absl::StatusOr<double> ExactPosterior(const PriorModel& prior,
                                      const DomainDescriptor& domain,
                                      const MechanismParams& params,
                                      const Relation& view, const Tuple& tuple) {
  if (domain.size() != static_cast<uint64_t>(prior.domain_size())) {
    return absl::InvalidArgumentError("prior and domain sizes differ");
  }
  absl::StatusOr<std::vector<DomainIndex>> codes = domain.EncodeRelation(view);
  if (!codes.ok()) return codes.status();
  absl::StatusOr<DomainIndex> code = domain.Encode(tuple);
  if (!code.ok()) return code.status();
  return ExactPosterior(prior, params, MaskFromCodes(*codes), *code);
}

absl::StatusOr<ViewDistribution> ViewDistribution::Create(
    int m, std::vector<double> probabilities) {
  if (absl::Status s = CheckOracleDomain(m, kMaxOracleDomain); !s.ok()) {
    return s;
  }
  if (probabilities.size() != (size_t{1} << m)) {
    return absl::InvalidArgumentError("one probability per view is required");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) {
      return absl::InvalidArgumentError("view probabilities must be >= 0");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("view probabilities sum to ", total, ", not 1"));
  }
  ViewDistribution distribution;
  distribution.m_ = m;
  distribution.probabilities_ = std::move(probabilities);
  return distribution;
}

absl::StatusOr<ViewDistribution> ExactViewDistribution(
    int m, TupleMask instance, const MechanismParams& params) {
  if (absl::Status s = CheckOracleDomain(m, kMaxOracleDomain); !s.ok()) {
    return s;
  }
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  const TupleMask instances[] = {instance};
  return ViewDistribution::Create(
      m, kernels::MixtureViewDistribution(m, instances, params.alpha,
                                          params.beta));
}

absl::StatusOr<ViewDistribution> ExactViewDistribution(
    const Relation& instance, const DomainDescriptor& domain,
    const MechanismParams& params) {
  if (domain.size() > static_cast<uint64_t>(kMaxOracleDomain)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "oracle domain too large: m=", domain.size(), " (limit ",
        kMaxOracleDomain, ")"));
  }
  absl::StatusOr<std::vector<DomainIndex>> codes =
      domain.EncodeRelation(instance);
  if (!codes.ok()) return codes.status();
  return ExactViewDistribution(static_cast<int>(domain.size()),
                               MaskFromCodes(*codes), params);
}

absl::StatusOr<double> StatisticalDifference(std::span<const double> a,
                                             std::span<const double> b) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError(
        "distributions are over different universes");
  }
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}

absl::StatusOr<double> StatisticalDifference(const ViewDistribution& a,
                                             const ViewDistribution& b) {
  if (a.domain_size() != b.domain_size()) {
    return absl::InvalidArgumentError(
        "distributions are over different universes");
  }
  return StatisticalDifference(a.probabilities(), b.probabilities());
}

absl::StatusOr<MeaningfulnessReport> MeaningfulnessExperiment(
    int m, int n, const MechanismParams& params, double query_fraction_f,
    const MeaningfulnessOptions& options) {
  if (absl::Status s = CheckOracleDomain(m, kMaxMeaningfulnessDomain);
      !s.ok()) {
    return s;
  }
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  if (n < 1 || n > m) return absl::InvalidArgumentError("requires 1 <= n <= m");
  if (!(query_fraction_f >= 0.0 && query_fraction_f < 1.0)) {
    return absl::InvalidArgumentError("f must lie in [0,1)");
  }
  const double low = 0.5 * (1.0 - query_fraction_f) * m - 1e-9;
  const double high = 0.5 * (1.0 + query_fraction_f) * m + 1e-9;
  const std::vector<TupleMask> instances = SubsetsOfSize(m, n);
  const TupleMask full = (TupleMask{1} << m) - 1;

  MeaningfulnessReport report;
  size_t below = 0;
  for (TupleMask query = 0; query <= full; ++query) {
    const int size = std::popcount(query);
    if (size < low || size > high) continue;
    std::vector<TupleMask> inside, outside;
    for (TupleMask instance : instances) {
      if ((instance & ~query) == 0) inside.push_back(instance);
      if ((instance & query) == 0) outside.push_back(instance);
    }
    if (inside.empty() || outside.empty()) continue;
    const std::vector<double> given_full = kernels::MixtureViewDistribution(
        m, inside, params.alpha, params.beta);
    const std::vector<double> given_empty = kernels::MixtureViewDistribution(
        m, outside, params.alpha, params.beta);
    const double sd = *StatisticalDifference(given_full, given_empty);
    report.per_query.push_back({.query = query, .sd = sd});
    if (sd < options.sd_threshold) ++below;
  }
  if (report.per_query.empty()) {
    return absl::InvalidArgumentError(
        "no admissible query: every balanced query is too small for n");
  }
  report.fraction_below =
      static_cast<double>(below) / static_cast<double>(report.per_query.size());
  report.meaningless = report.fraction_below >= options.fraction_threshold;
  return report;
}

absl::StatusOr<double> IndistinguishabilityEpsilon(const MechanismParams& params,
                                                   int m, int n) {
  if (absl::Status s = CheckOracleDomain(m, kMaxIndistinguishabilityDomain);
      !s.ok()) {
    return s;
  }
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  if (n < 1 || n >= m) {
    return absl::InvalidArgumentError(
        "requires 1 <= n < m so that swapped instance pairs exist");
  }
  const TupleMask views = TupleMask{1} << m;
  double worst = 1.0;
  for (TupleMask instance : SubsetsOfSize(m, n)) {
    std::vector<double> base(views);
    for (TupleMask v = 0; v < views; ++v) {
      base[v] = ViewLikelihood(m, instance, v, params);
    }
    for (int out = 0; out < m; ++out) {
      if (!((instance >> out) & 1)) continue;
      for (int in = 0; in < m; ++in) {
        if ((instance >> in) & 1) continue;
        const TupleMask swapped =
            (instance & ~(TupleMask{1} << out)) | (TupleMask{1} << in);
        for (TupleMask v = 0; v < views; ++v) {
          const double other = ViewLikelihood(m, swapped, v, params);
          if (base[v] == 0.0) continue;
          if (other == 0.0) return std::numeric_limits<double>::infinity();
          worst = std::max(worst, base[v] / other);
        }
      }
    }
  }
  return std::log(worst);
}

absl::StatusOr<BreachReport> CorrelatedBreachDemo(const Relation& instance,
                                                  const DomainDescriptor& domain,
                                                  const MechanismParams& params,
                                                  uint64_t seed) {
  if (domain.size() > static_cast<uint64_t>(kMaxOracleDomain)) {
    return absl::InvalidArgumentError("oracle domain too large");
  }
  if (instance.empty()) {
    return absl::InvalidArgumentError("the correlated set S must be nonempty");
  }
  absl::StatusOr<std::vector<DomainIndex>> codes =
      domain.EncodeRelation(instance);
  if (!codes.ok()) return codes.status();
  const int m = static_cast<int>(domain.size());
  const TupleMask secret = MaskFromCodes(*codes);
  absl::StatusOr<PriorModel> prior =
      PriorModel::Explicit(m, {{secret, 0.5}, {TupleMask{0}, 0.5}});
  if (!prior.ok()) return prior.status();
  const auto is_secret = [secret](TupleMask i) { return i == secret; };

  BreachReport report;
  const std::vector<uint64_t> sizes = domain.attribute_sizes();
  absl::StatusOr<std::vector<DomainIndex>> drawn =
      AnonymizeCodes(*codes, domain.size(), sizes, params, seed);
  if (!drawn.ok()) return drawn.status();
  report.drawn_view = *drawn;
  absl::StatusOr<double> posterior =
      ExactEventPosterior(*prior, params, MaskFromCodes(*drawn), is_secret);
  if (!posterior.ok()) return posterior.status();
  report.posterior_of_s = *posterior;

  for (TupleMask v = 0; v < (TupleMask{1} << m); ++v) {
    const double weight = ViewLikelihood(m, secret, v, params);
    if (weight == 0.0) continue;
    absl::StatusOr<double> p = ExactEventPosterior(*prior, params, v, is_secret);
    if (!p.ok()) return p.status();
    report.expected_posterior += weight * *p;
  }
  return report;
}

}  // namespace anonview
