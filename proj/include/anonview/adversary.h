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

// Bayesian leakage analysis for the insert-remove mechanism.
//
// Closed forms: posteriors for tuple-independent priors (tuple present in or
// absent from the view), the worst-case posterior under an exclusion-set
// prior, conversions between the absolute (d, gamma), relative (d, delta)
// and indistinguishability budgets, and the impossibility frontier.
//
// Oracle: on domains of at most 20 tuples, instances and views are bitmasks
// (bit j = domain tuple j) and every posterior is computed by summing over
// all instances the prior allows. The statistical-difference and
// indistinguishability measurements use the same enumeration.

#ifndef ANONVIEW_ADVERSARY_H_
#define ANONVIEW_ADVERSARY_H_

#include <cstdint>
#include <functional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "anonview/anonymizer.h"
#include "anonview/core_model.h"

namespace anonview {

absl::StatusOr<double> PosteriorIndependent(double p,
                                            const MechanismParams& params,
                                            bool present_in_view);

// Posterior of t_i when the view holds t_i and no other member of its
// exclusion set:
//   alpha(1-beta)p / (alpha(1-beta)p + beta(1-alpha)(1-p)).
absl::StatusOr<double> PosteriorExclusiveWorstCase(
    double p, const MechanismParams& params);

// Requires alpha = 1/2. Passes iff beta >= 2(d/gamma)((1-gamma)/(1-d)) and
// the worst-case exclusive posterior at prior d is at most gamma.
absl::StatusOr<Verdict> CheckExclusiveSafe(const MechanismParams& params,
                                           const PrivacyBudget& budget);

enum class LeakageKind { kNone, kPositive, kNegative };

std::string_view LeakageKindName(LeakageKind kind);

struct LeakageVerdict {
  LeakageKind kind = LeakageKind::kNone;
  double prior = 0.0;
  double posterior = 0.0;
  PrivacyBudget budget;
};

// Positive: prior <= d and posterior > gamma. Negative: posterior/prior <
// d/gamma. Known tuples (prior 1) never leak.
absl::StatusOr<LeakageVerdict> ClassifyLeakage(double prior, double posterior,
                                               const PrivacyBudget& budget);

// gamma = d * e^delta.
absl::StatusOr<double> GammaFromRelative(double d, double delta);
// delta = ln((gamma/d) * (1-d)/(1-gamma)).
absl::StatusOr<double> DeltaFromAbsolute(double d, double gamma);
// indistinguishability epsilon = 2 delta + 2 ln 2.
absl::StatusOr<double> EpsilonFromRelative(double delta);

// (1/c) * (gamma/(1-gamma)) * n/sqrt(m). An order-of-magnitude threshold: a
// prior bound d at or above it admits no meaningful (d, gamma)-private
// algorithm. `c` is the caller's choice of the unspecified constant.
absl::StatusOr<double> ImpossibilityFrontier(uint64_t n, uint64_t m,
                                             double gamma, double c);

inline constexpr int kMaxOracleDomain = 20;

using TupleMask = uint32_t;

TupleMask MaskFromCodes(std::span<const DomainIndex> codes);
std::vector<DomainIndex> CodesFromMask(TupleMask mask);

// Pr[V | I] for the idealized per-tuple mechanism.
double ViewLikelihood(int m, TupleMask instance, TupleMask view,
                      const MechanismParams& params);

// An adversary's prior over instances of a tiny domain.
class PriorModel {
 public:
  enum class Kind { kIndependent, kExclusive, kExplicit };

  struct Member {
    DomainIndex tuple = 0;
    double probability = 0.0;
  };
  // Exactly one member occurs in the instance.
  using ExclusionSet = std::vector<Member>;

  // `probabilities[j]` is Pr[t_j]; values of 1 are known tuples.
  static absl::StatusOr<PriorModel> Independent(
      int m, std::vector<double> probabilities);
  // Disjoint sets, mutually independent. Tuples outside every set never
  // occur.
  static absl::StatusOr<PriorModel> Exclusive(int m,
                                              std::vector<ExclusionSet> sets);
  static absl::StatusOr<PriorModel> Explicit(
      int m, std::vector<std::pair<TupleMask, double>> instances);

  Kind kind() const { return kind_; }
  int domain_size() const { return m_; }

  double Marginal(DomainIndex tuple) const;
  // Every marginal is at most d or exactly 1.
  bool IsBounded(double d) const;

  // Instances with positive prior mass.
  const std::vector<std::pair<TupleMask, double>>& Instances() const {
    return instances_;
  }

 private:
  Kind kind_ = Kind::kExplicit;
  int m_ = 0;
  std::vector<std::pair<TupleMask, double>> instances_;
  std::vector<double> marginals_;
};

// Pr[event | V] = sum_{I in event} Pr[V|I] Pr[I] / sum_I Pr[V|I] Pr[I].
absl::StatusOr<double> ExactEventPosterior(
    const PriorModel& prior, const MechanismParams& params, TupleMask view,
    const std::function<bool(TupleMask)>& event);

absl::StatusOr<double> ExactPosterior(const PriorModel& prior,
                                      const MechanismParams& params,
                                      TupleMask view, DomainIndex tuple);

absl::StatusOr<double> ExactPosterior(const PriorModel& prior,
                                      const DomainDescriptor& domain,
                                      const MechanismParams& params,
                                      const Relation& view, const Tuple& tuple);

// Probability of every view V ⊆ D, indexed by mask.
class ViewDistribution {
 public:
  static absl::StatusOr<ViewDistribution> Create(
      int m, std::vector<double> probabilities);

  int domain_size() const { return m_; }
  std::span<const double> probabilities() const { return probabilities_; }
  double operator[](TupleMask view) const { return probabilities_[view]; }

 private:
  int m_ = 0;
  std::vector<double> probabilities_;
};

absl::StatusOr<ViewDistribution> ExactViewDistribution(
    const Relation& instance, const DomainDescriptor& domain,
    const MechanismParams& params);
absl::StatusOr<ViewDistribution> ExactViewDistribution(
    int m, TupleMask instance, const MechanismParams& params);

// Sum of absolute differences; in [0, 2].
absl::StatusOr<double> StatisticalDifference(const ViewDistribution& a,
                                             const ViewDistribution& b);
absl::StatusOr<double> StatisticalDifference(std::span<const double> a,
                                             std::span<const double> b);

struct MeaningfulnessOptions {
  double sd_threshold = 0.5;
  double fraction_threshold = 2.0 / 3.0;
};

struct QueryDifference {
  TupleMask query = 0;
  double sd = 0.0;
};

struct MeaningfulnessReport {
  std::vector<QueryDifference> per_query;
  double fraction_below = 0.0;
  bool meaningless = false;
};

// For every query Q ⊆ D with (1-f)/2 <= |Q|/m <= (1+f)/2, compares the view
// law given "all n tuples lie in Q" with the law given "no tuple lies in Q",
// both under the uniform prior on size-n instances. m <= 12.
absl::StatusOr<MeaningfulnessReport> MeaningfulnessExperiment(
    int m, int n, const MechanismParams& params, double query_fraction_f,
    const MeaningfulnessOptions& options = {});

// ln of the largest Pr_I[V] / Pr_I'[V] over equal-size instances differing
// in one swapped tuple and all views. +infinity when some view is possible
// under I but not I'. m <= 10.
absl::StatusOr<double> IndistinguishabilityEpsilon(const MechanismParams& params,
                                                   int m, int n);

struct BreachReport {
  std::vector<DomainIndex> drawn_view;
  double posterior_of_s = 0.0;
  // Average posterior over views drawn from the true instance.
  double expected_posterior = 0.0;
};

// Prior: with mass 1/2 the whole instance is present, otherwise none of it.
absl::StatusOr<BreachReport> CorrelatedBreachDemo(const Relation& instance,
                                                  const DomainDescriptor& domain,
                                                  const MechanismParams& params,
                                                  uint64_t seed);

}  // namespace anonview

#endif  // ANONVIEW_ADVERSARY_H_
