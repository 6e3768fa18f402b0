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

// Families of selection queries over up to `max_arity` attributes, the
// workload of the accuracy experiments.
//
// Per attribute the candidate predicates are: one equality per value for
// string attributes, and for integer attributes every range [q_i, q_j]
// (i < j) between `range_points` evenly spaced quantiles of the active
// domain. The family is the union, over attribute subsets of size 1 to
// max_arity, of the cross products of those candidates. When it exceeds
// `cap`, `cap` members are drawn uniformly without replacement using
// `seed`. Output order is deterministic.

#ifndef ANONVIEW_HARNESS_QUERY_FAMILY_H_
#define ANONVIEW_HARNESS_QUERY_FAMILY_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "anonview/core_model.h"

namespace anonview::harness {

struct QueryFamilyOptions {
  int max_arity = 3;
  size_t cap = 20000;
  bool exhaustive = false;  // ignore the cap
  int range_points = 6;
  uint64_t seed = 0;
};

// Size of the full (uncapped) family.
absl::StatusOr<uint64_t> QueryFamilySize(const DomainDescriptor& domain,
                                         const QueryFamilyOptions& options);

absl::StatusOr<std::vector<ConjunctiveQuery>> GenerateQueryFamily(
    const DomainDescriptor& domain, const QueryFamilyOptions& options);

}  // namespace anonview::harness

#endif  // ANONVIEW_HARNESS_QUERY_FAMILY_H_
