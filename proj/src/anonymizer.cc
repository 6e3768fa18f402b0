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

#include "anonview/anonymizer.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "anonview/kernels.h"
#include "anonview/rng.h"

namespace anonview {
namespace {

// Slack for inequalities whose two sides are computed along different
// floating-point paths (planner boundary values, user-typed boundaries).
constexpr double kRelativeSlack = 1e-12;

bool LessOrClose(double lhs, double rhs) {
  return lhs <= rhs + kRelativeSlack * std::max(std::abs(lhs), std::abs(rhs));
}

// Materializing D \ I is allowed up to this many tuples.
constexpr uint64_t kDenseComplementLimit = uint64_t{1} << 24;
// Rejection sampling is used while the worst-case acceptance rate stays at
// or above this.
constexpr double kRejectionAcceptanceFloor = 0.5;
// Abort threshold on the observed acceptance rate.
constexpr double kMinObservedAcceptance = 0.1;

void AddBoundaryWarnings(const MechanismParams& p, Verdict& verdict) {
  if (p.alpha == 0.0 || p.alpha == 1.0) {
    verdict.warnings.push_back(
        absl::StrCat("boundary retention probability alpha=", p.alpha));
  }
  if (p.beta == 0.0 || p.beta == 1.0) {
    verdict.warnings.push_back(
        absl::StrCat("boundary insertion probability beta=", p.beta));
  }
}

uint64_t DrawInsertionCount(uint64_t candidates, double beta, uint64_t seed) {
  if (candidates == 0 || beta <= 0.0) return 0;
  if (beta >= 1.0) return candidates;
  std::mt19937_64 engine = StreamEngine(seed, Stream::kInsertionCount);
  std::binomial_distribution<uint64_t> binomial(candidates, beta);
  return binomial(engine);
}

absl::StatusOr<std::vector<DomainIndex>> SampleByRejection(
    std::span<const DomainIndex> instance,
    std::span<const uint64_t> attribute_sizes, uint64_t count, uint64_t seed) {
  std::mt19937_64 engine = StreamEngine(seed, Stream::kInsertionSample);
  std::vector<std::uniform_int_distribution<uint64_t>> digits;
  for (uint64_t size : attribute_sizes) digits.emplace_back(0, size - 1);

  std::unordered_set<DomainIndex> chosen;
  chosen.reserve(count * 2);
  std::vector<DomainIndex> out;
  out.reserve(count);
  uint64_t attempts = 0;
  while (out.size() < count) {
    DomainIndex code = 0;
    for (auto& digit : digits) code = code * (digit.b() + 1) + digit(engine);
    ++attempts;
    if (std::binary_search(instance.begin(), instance.end(), code) ||
        !chosen.insert(code).second) {
      if (attempts >= 1000 && static_cast<double>(out.size()) <
                                  kMinObservedAcceptance * attempts) {
        return absl::FailedPreconditionError(
            "insertion sampling acceptance fell below 10%; the domain is too "
            "dense for rejection sampling");
      }
      continue;
    }
    out.push_back(code);
  }
  return out;
}

std::vector<DomainIndex> SampleFromComplement(
    std::span<const DomainIndex> instance, uint64_t m, uint64_t count,
    uint64_t seed) {
  std::vector<DomainIndex> complement;
  complement.reserve(m - instance.size());
  auto next = instance.begin();
  for (DomainIndex code = 0; code < m; ++code) {
    if (next != instance.end() && *next == code) {
      ++next;
      continue;
    }
    complement.push_back(code);
  }
  std::mt19937_64 engine = StreamEngine(seed, Stream::kInsertionSample);
  // Partial Fisher-Yates: the first `count` slots end up a uniform subset.
  for (uint64_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<uint64_t> pick(i, complement.size() - 1);
    std::swap(complement[i], complement[pick(engine)]);
  }
  complement.resize(count);
  return complement;
}

}  // namespace

absl::StatusOr<PrivacyBudget> PrivacyBudget::FromMultiplier(double k,
                                                            uint64_t n,
                                                            uint64_t m,
                                                            double gamma) {
  if (!(k > 0.0)) return absl::InvalidArgumentError("k must be positive");
  if (m == 0 || n > m) {
    return absl::InvalidArgumentError("requires 0 <= n <= m and m >= 1");
  }
  PrivacyBudget budget{.d = k * static_cast<double>(n) / static_cast<double>(m),
                       .gamma = gamma,
                       .k = k};
  if (absl::Status s = budget.Validate(); !s.ok()) return s;
  return budget;
}

absl::Status PrivacyBudget::Validate() const {
  if (!(d > 0.0 && d < 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat("d=", d, " outside (0,1)"));
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gamma=", gamma, " outside (0,1)"));
  }
  return absl::OkStatus();
}

absl::Status MechanismParams::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha=", alpha, " outside [0,1]"));
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta=", beta, " outside [0,1]"));
  }
  return absl::OkStatus();
}

absl::Status UtilityBudget::Validate() const {
  if (!(r > 0.0)) return absl::InvalidArgumentError("r must be positive");
  if (!(failure_prob > 0.0 && failure_prob < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("failure_prob=", failure_prob, " outside (0,1)"));
  }
  return absl::OkStatus();
}

absl::StatusOr<Verdict> CheckPrivacyParams(const MechanismParams& params,
                                           const PrivacyBudget& budget) {
  if (absl::Status s = budget.Validate(); !s.ok()) return s;
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  if (budget.d >= budget.gamma) {
    return absl::InvalidArgumentError("budget requires d < gamma");
  }
  const double ratio = budget.d / budget.gamma;
  const double alpha_bound = 1.0 - ratio;
  const double beta_bound =
      ratio * ((1.0 - budget.gamma) / (1.0 - budget.d)) * params.alpha;

  Verdict verdict;
  AddBoundaryWarnings(params, verdict);
  if (!LessOrClose(params.alpha, alpha_bound)) {
    verdict.violated = absl::StrCat("alpha <= 1 - d/gamma (alpha=", params.alpha,
                                    ", bound=", alpha_bound, ")");
    return verdict;
  }
  if (!LessOrClose(beta_bound, params.beta)) {
    verdict.violated =
        absl::StrCat("beta >= (d/gamma)*((1-gamma)/(1-d))*alpha (beta=",
                     params.beta, ", bound=", beta_bound, ")");
    return verdict;
  }
  // The posterior bounds for tuples absent from the view only hold when the
  // view is more likely to contain true tuples than fake ones.
  if (!LessOrClose(params.beta, params.alpha)) {
    verdict.violated = absl::StrCat("beta <= alpha (alpha=", params.alpha,
                                    ", beta=", params.beta, ")");
    return verdict;
  }
  verdict.pass = true;
  return verdict;
}

absl::StatusOr<Verdict> CheckUtilityParams(const MechanismParams& params,
                                           uint64_t n, uint64_t m,
                                           const UtilityBudget& budget) {
  if (absl::Status s = budget.Validate(); !s.ok()) return s;
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  if (n == 0 || m < n) {
    return absl::InvalidArgumentError("requires n >= 1 and m >= n");
  }
  const double beta_bound =
      budget.r / 4.0 * (static_cast<double>(n) / static_cast<double>(m));
  Verdict verdict;
  AddBoundaryWarnings(params, verdict);
  if (params.alpha < 0.5) {
    verdict.violated = absl::StrCat("alpha >= 1/2 (alpha=", params.alpha, ")");
    return verdict;
  }
  if (!LessOrClose(params.beta, beta_bound)) {
    verdict.violated = absl::StrCat("beta <= (r/4)*(n/m) (beta=", params.beta,
                                    ", bound=", beta_bound, ")");
    return verdict;
  }
  verdict.pass = true;
  return verdict;
}

absl::StatusOr<BetaPolicy> ParseBetaPolicy(std::string_view name) {
  if (name == "minimal-beta") return BetaPolicy::kMinimalBeta;
  if (name == "simple-beta") return BetaPolicy::kSimpleBeta;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown policy '", std::string(name), "' (expected minimal-beta or simple-beta)"));
}

std::string_view BetaPolicyName(BetaPolicy policy) {
  return policy == BetaPolicy::kMinimalBeta ? "minimal-beta" : "simple-beta";
}

absl::StatusOr<ParameterPlan> PlanParameters(uint64_t n, uint64_t m, double k,
                                             double gamma, BetaPolicy policy,
                                             double failure_prob) {
  if (n == 0) return absl::InvalidArgumentError("n must be at least 1");
  absl::StatusOr<PrivacyBudget> privacy =
      PrivacyBudget::FromMultiplier(k, n, m, gamma);
  if (!privacy.ok()) return privacy.status();
  if (privacy->d >= gamma / 2.0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "budget too aggressive for alpha = 1/2 plan: d=", privacy->d,
        " must be below gamma/2=", gamma / 2.0));
  }
  ParameterPlan plan;
  plan.privacy = *privacy;
  plan.params.alpha = 0.5;
  const double d = privacy->d;
  plan.params.beta = policy == BetaPolicy::kMinimalBeta
                         ? (d / gamma) * ((1.0 - gamma) / (1.0 - d)) * 0.5
                         : d / gamma;
  plan.utility = UtilityBudget{.r = 4.0 * k / gamma, .failure_prob = failure_prob};
  if (absl::Status s = plan.utility.Validate(); !s.ok()) return s;
  return plan;
}

absl::StatusOr<std::vector<DomainIndex>> AnonymizeCodes(
    std::span<const DomainIndex> instance, uint64_t m,
    std::span<const uint64_t> attribute_sizes, const MechanismParams& params,
    uint64_t seed) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  for (size_t i = 0; i < instance.size(); ++i) {
    if (instance[i] >= m || (i > 0 && instance[i] <= instance[i - 1])) {
      return absl::InvalidArgumentError(
          "instance codes must be sorted, unique and inside the domain");
    }
  }
  const std::vector<uint8_t> retain =
      kernels::RetainMask(seed, instance.size(), params.alpha);
  std::vector<DomainIndex> view;
  for (size_t i = 0; i < instance.size(); ++i) {
    if (retain[i]) view.push_back(instance[i]);
  }

  const uint64_t candidates = m - instance.size();
  const uint64_t count = DrawInsertionCount(candidates, params.beta, seed);
  if (count > 0) {
    const double worst_acceptance =
        static_cast<double>(candidates - count) / static_cast<double>(m);
    std::vector<DomainIndex> inserted;
    if (worst_acceptance >= kRejectionAcceptanceFloor) {
      absl::StatusOr<std::vector<DomainIndex>> sampled =
          SampleByRejection(instance, attribute_sizes, count, seed);
      if (!sampled.ok()) return sampled.status();
      inserted = *std::move(sampled);
    } else if (candidates <= kDenseComplementLimit) {
      inserted = SampleFromComplement(instance, m, count, seed);
    } else {
      return absl::FailedPreconditionError(absl::StrCat(
          "dense insertion regime: ", count, " of ", candidates,
          " candidate tuples requested from a domain too large to enumerate"));
    }
    view.insert(view.end(), inserted.begin(), inserted.end());
  }
  std::sort(view.begin(), view.end());
  return view;
}

absl::StatusOr<PublishedView> Anonymize(const Relation& instance,
                                        const DomainDescriptor& domain,
                                        const MechanismParams& params,
                                        uint64_t seed) {
  absl::StatusOr<std::vector<DomainIndex>> codes =
      domain.EncodeRelation(instance);
  if (!codes.ok()) return codes.status();
  const std::vector<uint64_t> sizes = domain.attribute_sizes();
  absl::StatusOr<std::vector<DomainIndex>> view =
      AnonymizeCodes(*codes, domain.size(), sizes, params, seed);
  if (!view.ok()) return view.status();
  return PublishedView{
      .domain = domain, .view = *std::move(view), .params = params, .seed = seed};
}

double ExpectedViewSize(uint64_t n, uint64_t m, const MechanismParams& params) {
  return static_cast<double>(n) * params.alpha +
         static_cast<double>(m - n) * params.beta;
}

double ViewSizeRatio(double k, double gamma) { return 0.5 + k / gamma; }

}  // namespace anonview
