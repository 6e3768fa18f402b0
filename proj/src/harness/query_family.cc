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

#include "anonview/harness/query_family.h"

#include <algorithm>
#include <random>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "anonview/rng.h"

namespace anonview::harness {
namespace {

std::vector<Predicate> CandidatePredicates(const DomainDescriptor& domain,
                                           size_t attribute, int range_points) {
  std::vector<Predicate> out;
  std::span<const Value> values = domain.values(attribute);
  if (domain.schema().attribute(attribute).kind == ValueKind::kString) {
    for (const Value& v : values) out.push_back(ValueSetPredicate{{v}});
    return out;
  }
  std::vector<int64_t> points;
  const size_t last = values.size() - 1;
  for (int k = 0; k < range_points; ++k) {
    const size_t pos = range_points == 1 ? 0 : last * k / (range_points - 1);
    points.push_back(std::get<int64_t>(values[pos]));
  }
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() == 1) {
    out.push_back(RangePredicate{points[0], points[0]});
    return out;
  }
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      out.push_back(RangePredicate{points[i], points[j]});
    }
  }
  return out;
}

// Attribute subsets of size 1..max_arity in lexicographic order.
std::vector<std::vector<size_t>> AttributeSubsets(size_t arity, int max_arity) {
  std::vector<std::vector<size_t>> out;
  std::vector<size_t> current;
  auto recurse = [&](auto&& self, size_t start) -> void {
    if (!current.empty()) out.push_back(current);
    if (static_cast<int>(current.size()) == max_arity) return;
    for (size_t a = start; a < arity; ++a) {
      current.push_back(a);
      self(self, a + 1);
      current.pop_back();
    }
  };
  recurse(recurse, 0);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() < b.size();
  });
  return out;
}

struct FamilyLayout {
  std::vector<std::vector<Predicate>> candidates;  // per attribute
  std::vector<std::vector<size_t>> subsets;
  std::vector<uint64_t> block_start;  // prefix sums, one past the end last
};

absl::StatusOr<FamilyLayout> Layout(const DomainDescriptor& domain,
                                    const QueryFamilyOptions& options) {
  if (options.max_arity < 1) {
    return absl::InvalidArgumentError("query arity must be at least 1");
  }
  if (options.range_points < 1) {
    return absl::InvalidArgumentError("range_points must be at least 1");
  }
  FamilyLayout layout;
  for (size_t a = 0; a < domain.arity(); ++a) {
    layout.candidates.push_back(
        CandidatePredicates(domain, a, options.range_points));
  }
  layout.subsets = AttributeSubsets(domain.arity(), options.max_arity);
  uint64_t total = 0;
  for (const auto& subset : layout.subsets) {
    layout.block_start.push_back(total);
    uint64_t block = 1;
    for (size_t a : subset) block *= layout.candidates[a].size();
    total += block;
  }
  layout.block_start.push_back(total);
  return layout;
}

absl::StatusOr<ConjunctiveQuery> QueryAt(const DomainDescriptor& domain,
                                         const FamilyLayout& layout,
                                         uint64_t index) {
  const size_t block =
      std::upper_bound(layout.block_start.begin(), layout.block_start.end(),
                       index) -
      layout.block_start.begin() - 1;
  uint64_t offset = index - layout.block_start[block];
  const std::vector<size_t>& subset = layout.subsets[block];
  std::vector<std::optional<Predicate>> predicates(domain.arity());
  for (size_t k = subset.size(); k-- > 0;) {
    const auto& choices = layout.candidates[subset[k]];
    predicates[subset[k]] = choices[offset % choices.size()];
    offset /= choices.size();
  }
  return ConjunctiveQuery::Create(domain.schema(), std::move(predicates));
}

}  // namespace

absl::StatusOr<uint64_t> QueryFamilySize(const DomainDescriptor& domain,
                                         const QueryFamilyOptions& options) {
  absl::StatusOr<FamilyLayout> layout = Layout(domain, options);
  if (!layout.ok()) return layout.status();
  return layout->block_start.back();
}

absl::StatusOr<std::vector<ConjunctiveQuery>> GenerateQueryFamily(
    const DomainDescriptor& domain, const QueryFamilyOptions& options) {
  absl::StatusOr<FamilyLayout> layout = Layout(domain, options);
  if (!layout.ok()) return layout.status();
  const uint64_t total = layout->block_start.back();
  if (total == 0) return absl::InvalidArgumentError("query family is empty");

  std::vector<uint64_t> indices;
  if (options.exhaustive || total <= options.cap) {
    indices.resize(total);
    for (uint64_t i = 0; i < total; ++i) indices[i] = i;
  } else {
    // Floyd's sampling of `cap` distinct indices.
    std::mt19937_64 engine = StreamEngine(options.seed, Stream::kQuerySample);
    std::unordered_set<uint64_t> chosen;
    for (uint64_t j = total - options.cap; j < total; ++j) {
      std::uniform_int_distribution<uint64_t> pick(0, j);
      const uint64_t t = pick(engine);
      chosen.insert(chosen.contains(t) ? j : t);
    }
    indices.assign(chosen.begin(), chosen.end());
    std::sort(indices.begin(), indices.end());
  }

  std::vector<ConjunctiveQuery> queries;
  queries.reserve(indices.size());
  for (uint64_t index : indices) {
    absl::StatusOr<ConjunctiveQuery> query = QueryAt(domain, *layout, index);
    if (!query.ok()) return query.status();
    queries.push_back(*std::move(query));
  }
  return queries;
}

}  // namespace anonview::harness
