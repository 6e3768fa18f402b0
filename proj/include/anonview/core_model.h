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

// Shared vocabulary: schemas, relations, cross-product domains and
// conjunctive counting queries.

#ifndef ANONVIEW_CORE_MODEL_H_
#define ANONVIEW_CORE_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace anonview {

enum class ValueKind { kString, kInteger };

std::string_view ValueKindName(ValueKind kind);

struct Attribute {
  std::string name;
  ValueKind kind = ValueKind::kString;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

// Ordered list of uniquely named attributes. Order is significant.
class Schema {
 public:
  Schema() = default;

  static absl::StatusOr<Schema> Create(std::vector<Attribute> attributes);

  size_t arity() const { return attributes_.size(); }
  const Attribute& attribute(size_t i) const { return attributes_[i]; }
  std::span<const Attribute> attributes() const { return attributes_; }
  std::optional<size_t> IndexOf(std::string_view name) const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  explicit Schema(std::vector<Attribute> attributes)
      : attributes_(std::move(attributes)) {}

  std::vector<Attribute> attributes_;
};

// Values of different kinds never compare equal; "25" and 25 are distinct.
using Value = std::variant<int64_t, std::string>;
using Tuple = std::vector<Value>;

bool ValueHasKind(const Value& value, ValueKind kind);
std::string ValueToString(const Value& value);

absl::Status ValidateTuple(const Schema& schema, const Tuple& tuple);

// A set of tuples over a schema. Duplicates collapse on construction; tuples
// are kept in lexicographic order.
class Relation {
 public:
  Relation() = default;
  explicit Relation(Schema schema) : schema_(std::move(schema)) {}

  static absl::StatusOr<Relation> Create(Schema schema,
                                         std::vector<Tuple> tuples);

  const Schema& schema() const { return schema_; }
  std::span<const Tuple> tuples() const { return tuples_; }
  size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }
  bool Contains(const Tuple& tuple) const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  Schema schema_;
  std::vector<Tuple> tuples_;
};

// Position of a tuple in the cross product D = D_1 x ... x D_a, in mixed
// radix with the last attribute varying fastest. Code order agrees with
// lexicographic tuple order.
using DomainIndex = uint64_t;

absl::StatusOr<uint64_t> DomainSize(std::span<const uint64_t> attribute_sizes);

// Per-attribute active domains. Every list is sorted, deduplicated and
// nonempty, and the product m fits in 64 bits.
class DomainDescriptor {
 public:
  DomainDescriptor() = default;

  static absl::StatusOr<DomainDescriptor> Create(
      Schema schema, std::vector<std::vector<Value>> per_attribute_values);

  const Schema& schema() const { return schema_; }
  size_t arity() const { return values_.size(); }
  std::span<const Value> values(size_t attribute) const {
    return values_[attribute];
  }
  uint64_t attribute_size(size_t attribute) const {
    return values_[attribute].size();
  }
  std::vector<uint64_t> attribute_sizes() const;
  // m.
  uint64_t size() const { return size_; }
  uint64_t stride(size_t attribute) const { return strides_[attribute]; }

  std::optional<uint64_t> ValueIndex(size_t attribute,
                                     const Value& value) const;
  absl::StatusOr<DomainIndex> Encode(const Tuple& tuple) const;
  Tuple Decode(DomainIndex index) const;
  uint64_t Digit(DomainIndex index, size_t attribute) const {
    return (index / strides_[attribute]) % values_[attribute].size();
  }

  // Sorted codes of every tuple in `relation`; fails if any tuple lies
  // outside the cross product.
  absl::StatusOr<std::vector<DomainIndex>> EncodeRelation(
      const Relation& relation) const;
  absl::StatusOr<Relation> DecodeRelation(
      std::span<const DomainIndex> indices) const;

  friend bool operator==(const DomainDescriptor& a,
                         const DomainDescriptor& b) {
    return a.schema_ == b.schema_ && a.values_ == b.values_;
  }

 private:
  Schema schema_;
  std::vector<std::vector<Value>> values_;
  std::vector<uint64_t> strides_;
  uint64_t size_ = 0;
};

absl::StatusOr<DomainDescriptor> BuildDomain(const Relation& relation);

struct ValueSetPredicate {
  std::vector<Value> values;  // sorted, deduplicated

  friend bool operator==(const ValueSetPredicate&,
                         const ValueSetPredicate&) = default;
};

// Inclusive integer range.
struct RangePredicate {
  int64_t low = 0;
  int64_t high = 0;

  friend bool operator==(const RangePredicate&,
                         const RangePredicate&) = default;
};

using Predicate = std::variant<ValueSetPredicate, RangePredicate>;

// Conjunction of optional per-attribute predicates; an absent predicate
// matches any value. As a subset of D it is the cross product of the
// per-attribute matched value sets.
class ConjunctiveQuery {
 public:
  ConjunctiveQuery() = default;

  static absl::StatusOr<ConjunctiveQuery> Create(
      Schema schema, std::vector<std::optional<Predicate>> predicates);
  static ConjunctiveQuery All(Schema schema);

  const Schema& schema() const { return schema_; }
  const std::optional<Predicate>& predicate(size_t attribute) const {
    return predicates_[attribute];
  }
  // Indices of attributes carrying a predicate.
  std::vector<size_t> ConstrainedAttributes() const;

  bool MatchesValue(size_t attribute, const Value& value) const;
  bool Matches(const Tuple& tuple) const;

  // Renders the query in the text form accepted by the query parser.
  std::string ToString() const;

  friend bool operator==(const ConjunctiveQuery&,
                         const ConjunctiveQuery&) = default;

 private:
  Schema schema_;
  std::vector<std::optional<Predicate>> predicates_;
};

// |Q ∩ I|.
absl::StatusOr<uint64_t> EvalQueryInstance(const ConjunctiveQuery& query,
                                           const Relation& relation);

// |Q ∩ D|, by per-attribute product counting.
absl::StatusOr<uint64_t> EvalQueryDomain(const ConjunctiveQuery& query,
                                         const DomainDescriptor& domain);

// A query resolved against a domain: per attribute, a flag for every value
// index saying whether it is matched. Used by the code-level kernels.
class CompiledQuery {
 public:
  static absl::StatusOr<CompiledQuery> Compile(const ConjunctiveQuery& query,
                                               const DomainDescriptor& domain);

  bool Matches(DomainIndex index) const;
  std::span<const size_t> constrained() const { return constrained_; }
  const std::vector<uint8_t>& matched(size_t attribute) const {
    return matched_[attribute];
  }
  uint64_t MatchedCount(size_t attribute) const;

 private:
  std::vector<uint64_t> strides_;
  std::vector<uint64_t> sizes_;
  std::vector<std::vector<uint8_t>> matched_;
  std::vector<size_t> constrained_;
};

}  // namespace anonview

#endif  // ANONVIEW_CORE_MODEL_H_
