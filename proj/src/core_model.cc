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

#include "anonview/core_model.h"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace anonview {
namespace {

template <typename T>
void SortUnique(std::vector<T>& items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
}

// Strings are quoted when they would not survive the query tokenizer.
std::string QuoteIfNeeded(const std::string& s) {
  const bool plain =
      !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
               c == '-' || c == '.';
      });
  if (plain && s != "and" && s != "in") return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string RenderValue(const Value& value) {
  if (const auto* i = std::get_if<int64_t>(&value)) return absl::StrCat(*i);
  return QuoteIfNeeded(std::get<std::string>(value));
}

}  // namespace

std::string_view ValueKindName(ValueKind kind) {
  return kind == ValueKind::kInteger ? "int" : "str";
}

absl::StatusOr<Schema> Schema::Create(std::vector<Attribute> attributes) {
  std::set<std::string> seen;
  for (const Attribute& attribute : attributes) {
    if (attribute.name.empty()) {
      return absl::InvalidArgumentError("attribute names must be nonempty");
    }
    if (!seen.insert(attribute.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate attribute name '", attribute.name, "'"));
    }
  }
  return Schema(std::move(attributes));
}

std::optional<size_t> Schema::IndexOf(std::string_view name) const {
  for (size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  return std::nullopt;
}

bool ValueHasKind(const Value& value, ValueKind kind) {
  return kind == ValueKind::kInteger ? std::holds_alternative<int64_t>(value)
                                     : std::holds_alternative<std::string>(value);
}

std::string ValueToString(const Value& value) {
  if (const auto* i = std::get_if<int64_t>(&value)) return absl::StrCat(*i);
  return std::get<std::string>(value);
}

absl::Status ValidateTuple(const Schema& schema, const Tuple& tuple) {
  if (tuple.size() != schema.arity()) {
    return absl::InvalidArgumentError(
        absl::StrCat("tuple arity ", tuple.size(), " does not match schema arity ",
                     schema.arity()));
  }
  for (size_t i = 0; i < tuple.size(); ++i) {
    if (!ValueHasKind(tuple[i], schema.attribute(i).kind)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "value for attribute '", schema.attribute(i).name, "' is not of kind ",
          std::string(ValueKindName(schema.attribute(i).kind))));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Relation> Relation::Create(Schema schema,
                                          std::vector<Tuple> tuples) {
  for (const Tuple& tuple : tuples) {
    if (absl::Status s = ValidateTuple(schema, tuple); !s.ok()) return s;
  }
  SortUnique(tuples);
  Relation relation(std::move(schema));
  relation.tuples_ = std::move(tuples);
  return relation;
}

bool Relation::Contains(const Tuple& tuple) const {
  return std::binary_search(tuples_.begin(), tuples_.end(), tuple);
}

absl::StatusOr<uint64_t> DomainSize(std::span<const uint64_t> attribute_sizes) {
  uint64_t product = 1;
  for (uint64_t size : attribute_sizes) {
    if (size != 0 &&
        product > std::numeric_limits<uint64_t>::max() / size) {
      return absl::OutOfRangeError("domain size overflows 64-bit integer");
    }
    product *= size;
  }
  return product;
}

absl::StatusOr<DomainDescriptor> DomainDescriptor::Create(
    Schema schema, std::vector<std::vector<Value>> per_attribute_values) {
  if (per_attribute_values.size() != schema.arity()) {
    return absl::InvalidArgumentError(
        "one value list per schema attribute is required");
  }
  std::vector<uint64_t> sizes;
  for (size_t i = 0; i < per_attribute_values.size(); ++i) {
    auto& values = per_attribute_values[i];
    if (values.empty()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "active domain of attribute '", schema.attribute(i).name,
          "' is empty"));
    }
    for (const Value& v : values) {
      if (!ValueHasKind(v, schema.attribute(i).kind)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "domain value of attribute '", schema.attribute(i).name,
            "' has the wrong kind"));
      }
    }
    SortUnique(values);
    sizes.push_back(values.size());
  }
  absl::StatusOr<uint64_t> m = DomainSize(sizes);
  if (!m.ok()) return m.status();

  DomainDescriptor domain;
  domain.schema_ = std::move(schema);
  domain.values_ = std::move(per_attribute_values);
  domain.size_ = *m;
  domain.strides_.assign(sizes.size(), 1);
  for (size_t i = sizes.size(); i-- > 1;) {
    domain.strides_[i - 1] = domain.strides_[i] * sizes[i];
  }
  return domain;
}

std::vector<uint64_t> DomainDescriptor::attribute_sizes() const {
  std::vector<uint64_t> sizes;
  sizes.reserve(values_.size());
  for (const auto& v : values_) sizes.push_back(v.size());
  return sizes;
}

std::optional<uint64_t> DomainDescriptor::ValueIndex(size_t attribute,
                                                     const Value& value) const {
  const auto& values = values_[attribute];
  auto it = std::lower_bound(values.begin(), values.end(), value);
  if (it == values.end() || *it != value) return std::nullopt;
  return static_cast<uint64_t>(it - values.begin());
}

absl::StatusOr<DomainIndex> DomainDescriptor::Encode(const Tuple& tuple) const {
  if (tuple.size() != values_.size()) {
    return absl::InvalidArgumentError("tuple arity does not match domain");
  }
  DomainIndex index = 0;
  for (size_t i = 0; i < tuple.size(); ++i) {
    std::optional<uint64_t> digit = ValueIndex(i, tuple[i]);
    if (!digit) {
      return absl::InvalidArgumentError(absl::StrCat(
          "value '", ValueToString(tuple[i]), "' of attribute '",
          schema_.attribute(i).name, "' lies outside the domain"));
    }
    index += *digit * strides_[i];
  }
  return index;
}

Tuple DomainDescriptor::Decode(DomainIndex index) const {
  Tuple tuple;
  tuple.reserve(values_.size());
  for (size_t i = 0; i < values_.size(); ++i) {
    tuple.push_back(values_[i][Digit(index, i)]);
  }
  return tuple;
}

absl::StatusOr<std::vector<DomainIndex>> DomainDescriptor::EncodeRelation(
    const Relation& relation) const {
  if (relation.schema() != schema_) {
    return absl::InvalidArgumentError("relation schema does not match domain");
  }
  std::vector<DomainIndex> codes;
  codes.reserve(relation.size());
  for (const Tuple& tuple : relation.tuples()) {
    absl::StatusOr<DomainIndex> code = Encode(tuple);
    if (!code.ok()) return code.status();
    codes.push_back(*code);
  }
  // Relations are lexicographically sorted, so codes already are.
  return codes;
}

absl::StatusOr<Relation> DomainDescriptor::DecodeRelation(
    std::span<const DomainIndex> indices) const {
  std::vector<Tuple> tuples;
  tuples.reserve(indices.size());
  for (DomainIndex index : indices) {
    if (index >= size_) {
      return absl::OutOfRangeError("domain index out of range");
    }
    tuples.push_back(Decode(index));
  }
  return Relation::Create(schema_, std::move(tuples));
}

absl::StatusOr<DomainDescriptor> BuildDomain(const Relation& relation) {
  if (relation.empty()) {
    return absl::InvalidArgumentError(
        "cannot derive active domain from an empty relation");
  }
  const size_t arity = relation.schema().arity();
  std::vector<std::vector<Value>> values(arity);
  for (const Tuple& tuple : relation.tuples()) {
    for (size_t i = 0; i < arity; ++i) values[i].push_back(tuple[i]);
  }
  return DomainDescriptor::Create(relation.schema(), std::move(values));
}

absl::StatusOr<ConjunctiveQuery> ConjunctiveQuery::Create(
    Schema schema, std::vector<std::optional<Predicate>> predicates) {
  if (predicates.size() != schema.arity()) {
    return absl::InvalidArgumentError(
        "one optional predicate per schema attribute is required");
  }
  for (size_t i = 0; i < predicates.size(); ++i) {
    if (!predicates[i]) continue;
    const Attribute& attribute = schema.attribute(i);
    if (auto* range = std::get_if<RangePredicate>(&*predicates[i])) {
      if (attribute.kind != ValueKind::kInteger) {
        return absl::InvalidArgumentError(absl::StrCat(
            "range predicate on non-integer attribute '", attribute.name, "'"));
      }
      if (range->low > range->high) {
        return absl::InvalidArgumentError(
            absl::StrCat("malformed range on '", attribute.name, "': ",
                         range->low, " > ", range->high));
      }
    } else {
      auto& set = std::get<ValueSetPredicate>(*predicates[i]);
      for (const Value& v : set.values) {
        if (!ValueHasKind(v, attribute.kind)) {
          return absl::InvalidArgumentError(absl::StrCat(
              "value '", ValueToString(v), "' does not match kind ",
              std::string(ValueKindName(attribute.kind)), " of attribute '", attribute.name,
              "'"));
        }
      }
      SortUnique(set.values);
    }
  }
  ConjunctiveQuery query;
  query.schema_ = std::move(schema);
  query.predicates_ = std::move(predicates);
  return query;
}

ConjunctiveQuery ConjunctiveQuery::All(Schema schema) {
  ConjunctiveQuery query;
  query.predicates_.resize(schema.arity());
  query.schema_ = std::move(schema);
  return query;
}

std::vector<size_t> ConjunctiveQuery::ConstrainedAttributes() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < predicates_.size(); ++i) {
    if (predicates_[i]) out.push_back(i);
  }
  return out;
}

bool ConjunctiveQuery::MatchesValue(size_t attribute, const Value& value) const {
  const std::optional<Predicate>& predicate = predicates_[attribute];
  if (!predicate) return true;
  if (const auto* range = std::get_if<RangePredicate>(&*predicate)) {
    const auto* i = std::get_if<int64_t>(&value);
    return i != nullptr && range->low <= *i && *i <= range->high;
  }
  const auto& values = std::get<ValueSetPredicate>(*predicate).values;
  return std::binary_search(values.begin(), values.end(), value);
}

bool ConjunctiveQuery::Matches(const Tuple& tuple) const {
  for (size_t i = 0; i < predicates_.size(); ++i) {
    if (!MatchesValue(i, tuple[i])) return false;
  }
  return true;
}

std::string ConjunctiveQuery::ToString() const {
  std::vector<std::string> parts;
  for (size_t i = 0; i < predicates_.size(); ++i) {
    if (!predicates_[i]) continue;
    const std::string& name = schema_.attribute(i).name;
    if (const auto* range = std::get_if<RangePredicate>(&*predicates_[i])) {
      parts.push_back(
          absl::StrCat(name, " in [", range->low, ",", range->high, "]"));
      continue;
    }
    const auto& values = std::get<ValueSetPredicate>(*predicates_[i]).values;
    if (values.size() == 1) {
      parts.push_back(absl::StrCat(name, "=", RenderValue(values[0])));
    } else {
      std::vector<std::string> rendered;
      for (const Value& v : values) rendered.push_back(RenderValue(v));
      parts.push_back(
          absl::StrCat(name, " in {", absl::StrJoin(rendered, ","), "}"));
    }
  }
  return absl::StrJoin(parts, " and ");
}

absl::StatusOr<uint64_t> EvalQueryInstance(const ConjunctiveQuery& query,
                                           const Relation& relation) {
  if (query.schema() != relation.schema()) {
    return absl::InvalidArgumentError("query and relation schemas differ");
  }
  uint64_t count = 0;
  for (const Tuple& tuple : relation.tuples()) {
    if (query.Matches(tuple)) ++count;
  }
  return count;
}

absl::StatusOr<uint64_t> EvalQueryDomain(const ConjunctiveQuery& query,
                                         const DomainDescriptor& domain) {
  if (query.schema() != domain.schema()) {
    return absl::InvalidArgumentError("query and domain schemas differ");
  }
  std::vector<uint64_t> matched;
  matched.reserve(domain.arity());
  for (size_t i = 0; i < domain.arity(); ++i) {
    uint64_t count = 0;
    for (const Value& v : domain.values(i)) {
      if (query.MatchesValue(i, v)) ++count;
    }
    matched.push_back(count);
  }
  return DomainSize(matched);
}

absl::StatusOr<CompiledQuery> CompiledQuery::Compile(
    const ConjunctiveQuery& query, const DomainDescriptor& domain) {
  if (query.schema() != domain.schema()) {
    return absl::InvalidArgumentError("query and domain schemas differ");
  }
  CompiledQuery compiled;
  compiled.constrained_ = query.ConstrainedAttributes();
  compiled.matched_.resize(domain.arity());
  for (size_t i = 0; i < domain.arity(); ++i) {
    compiled.strides_.push_back(domain.stride(i));
    compiled.sizes_.push_back(domain.attribute_size(i));
    auto& flags = compiled.matched_[i];
    flags.reserve(domain.attribute_size(i));
    for (const Value& v : domain.values(i)) {
      flags.push_back(query.MatchesValue(i, v) ? 1 : 0);
    }
  }
  return compiled;
}

bool CompiledQuery::Matches(DomainIndex index) const {
  for (size_t a : constrained_) {
    if (!matched_[a][(index / strides_[a]) % sizes_[a]]) return false;
  }
  return true;
}

uint64_t CompiledQuery::MatchedCount(size_t attribute) const {
  return std::count(matched_[attribute].begin(), matched_[attribute].end(), 1);
}

}  // namespace anonview
