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
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace anonview {
namespace {

using ::anonview::testing::ScoreRows;
using ::anonview::testing::ScoreSchema;
using ::anonview::testing::ScoreTable;

TEST(SchemaTest, RejectsDuplicateAndEmptyNames) {
  EXPECT_FALSE(Schema::Create({{"a", ValueKind::kInteger},
                               {"a", ValueKind::kString}})
                   .ok());
  EXPECT_FALSE(Schema::Create({{"", ValueKind::kInteger}}).ok());
  ASSERT_OK_AND_ASSIGN(Schema s, Schema::Create({{"a", ValueKind::kInteger},
                                                 {"b", ValueKind::kString}}));
  EXPECT_EQ(s.IndexOf("b"), 1u);
  EXPECT_FALSE(s.IndexOf("c").has_value());
}

TEST(RelationTest, CollapsesDuplicatesAndChecksKinds) {
  Schema schema = ScoreSchema();
  ASSERT_OK_AND_ASSIGN(
      Relation r,
      Relation::Create(schema, {{Value(int64_t{25}), Value("British"),
                                 Value(int64_t{99})},
                                {Value(int64_t{25}), Value("British"),
                                 Value(int64_t{99})},
                                {Value(int64_t{21}), Value("Indian"),
                                 Value(int64_t{82})}}));
  EXPECT_EQ(r.size(), 2u);
  EXPECT_FALSE(Relation::Create(schema, {{Value("25"), Value("British"),
                                          Value(int64_t{99})}})
                   .ok());
  EXPECT_FALSE(
      Relation::Create(schema, {{Value(int64_t{25}), Value("British")}}).ok());
}

TEST(ValueTest, KindsDoNotCoerce) {
  EXPECT_NE(Value(int64_t{25}), Value("25"));
  EXPECT_TRUE(ValueHasKind(Value(int64_t{25}), ValueKind::kInteger));
  EXPECT_FALSE(ValueHasKind(Value("25"), ValueKind::kInteger));
}

TEST(DomainTest, SingleTupleGivesSingletonDomains) {
  ASSERT_OK_AND_ASSIGN(
      Schema schema, Schema::Create({{"age", ValueKind::kInteger},
                                     {"nationality", ValueKind::kString}}));
  ASSERT_OK_AND_ASSIGN(
      Relation r,
      Relation::Create(schema, {{Value(int64_t{25}), Value("British")}}));
  ASSERT_OK_AND_ASSIGN(DomainDescriptor d, BuildDomain(r));
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(d.values(0)[0], Value(int64_t{25}));
  EXPECT_EQ(d.values(1)[0], Value("British"));
}

TEST(DomainTest, ScoreTableDomainSizes) {
  ASSERT_OK_AND_ASSIGN(DomainDescriptor d, BuildDomain(ScoreTable()));
  EXPECT_EQ(d.attribute_size(0), 6u);
  EXPECT_EQ(d.attribute_size(1), 3u);
  EXPECT_EQ(d.attribute_size(2), 5u);
  EXPECT_EQ(d.size(), 90u);
  // Sorted, deduplicated scores.
  std::vector<Value> scores(d.values(2).begin(), d.values(2).end());
  EXPECT_EQ(scores, (std::vector<Value>{Value(int64_t{82}), Value(int64_t{90}),
                                        Value(int64_t{94}), Value(int64_t{97}),
                                        Value(int64_t{99})}));
}

TEST(DomainTest, EmptyRelationIsAnError) {
  absl::StatusOr<DomainDescriptor> d = BuildDomain(Relation(ScoreSchema()));
  ASSERT_FALSE(d.ok());
  EXPECT_NE(d.status().message().find("cannot derive active domain"),
            std::string::npos);
}

TEST(DomainSizeTest, ProductsAndOverflow) {
  EXPECT_EQ(DomainSize(std::vector<uint64_t>{1, 1, 1}).value(), 1u);
  EXPECT_EQ(DomainSize(std::vector<uint64_t>{6, 3, 5}).value(), 90u);
  const uint64_t big = uint64_t{1} << 32;
  absl::StatusOr<uint64_t> overflow =
      DomainSize(std::vector<uint64_t>{big, big, big});
  ASSERT_FALSE(overflow.ok());
  EXPECT_EQ(overflow.status().code(), absl::StatusCode::kOutOfRange);
}

TEST(DomainTest, CodesFollowLexicographicOrder) {
  ASSERT_OK_AND_ASSIGN(DomainDescriptor d, BuildDomain(ScoreTable()));
  for (DomainIndex i = 0; i < d.size(); ++i) {
    Tuple t = d.Decode(i);
    ASSERT_OK_AND_ASSIGN(DomainIndex back, d.Encode(t));
    EXPECT_EQ(back, i);
    if (i + 1 < d.size()) {
      EXPECT_LT(t, d.Decode(i + 1));
    }
  }
  EXPECT_FALSE(
      d.Encode({Value(int64_t{99}), Value("British"), Value(int64_t{99})}).ok());
}

ConjunctiveQuery AgeScoreQuery(int64_t age_lo, int64_t age_hi,
                               int64_t score_lo) {
  return ConjunctiveQuery::Create(
             ScoreSchema(),
             {Predicate(RangePredicate{age_lo, age_hi}), std::nullopt,
              Predicate(RangePredicate{score_lo, 1000})})
      .value();
}

uint64_t ScanScores(int64_t age_lo, int64_t age_hi, int64_t score_lo) {
  uint64_t count = 0;
  for (const auto& r : ScoreRows()) {
    if (r.age >= age_lo && r.age <= age_hi && r.score >= score_lo) ++count;
  }
  return count;
}

TEST(EvalQueryInstanceTest, ScoreTableQueries) {
  Relation table = ScoreTable();
  EXPECT_EQ(EvalQueryInstance(ConjunctiveQuery::All(ScoreSchema()), table)
                .value(),
            6u);
  // Ages 26..32 with score above 90, and with score at least 90.
  EXPECT_EQ(EvalQueryInstance(AgeScoreQuery(26, 32, 91), table).value(),
            ScanScores(26, 32, 91));
  EXPECT_EQ(ScanScores(26, 32, 91), 1u);
  EXPECT_EQ(EvalQueryInstance(AgeScoreQuery(26, 32, 90), table).value(),
            ScanScores(26, 32, 90));
  EXPECT_EQ(ScanScores(26, 32, 90), 2u);

  ASSERT_OK_AND_ASSIGN(
      ConjunctiveQuery absent,
      ConjunctiveQuery::Create(
          ScoreSchema(),
          {std::nullopt, Predicate(ValueSetPredicate{{Value("French")}}),
           std::nullopt}));
  EXPECT_EQ(EvalQueryInstance(absent, table).value(), 0u);
}

TEST(EvalQueryInstanceTest, SchemaMismatchIsAnError) {
  ASSERT_OK_AND_ASSIGN(Schema other,
                       Schema::Create({{"age", ValueKind::kInteger}}));
  EXPECT_FALSE(
      EvalQueryInstance(ConjunctiveQuery::All(other), ScoreTable()).ok());
}

TEST(ConjunctiveQueryTest, RejectsMalformedPredicates) {
  EXPECT_FALSE(ConjunctiveQuery::Create(
                   ScoreSchema(), {Predicate(RangePredicate{31, 26}),
                                   std::nullopt, std::nullopt})
                   .ok());
  EXPECT_FALSE(ConjunctiveQuery::Create(
                   ScoreSchema(), {std::nullopt, Predicate(RangePredicate{1, 2}),
                                   std::nullopt})
                   .ok());
  EXPECT_FALSE(ConjunctiveQuery::Create(
                   ScoreSchema(),
                   {Predicate(ValueSetPredicate{{Value("x")}}), std::nullopt,
                    std::nullopt})
                   .ok());
}

TEST(EvalQueryDomainTest, ProductCounting) {
  ASSERT_OK_AND_ASSIGN(
      Schema schema, Schema::Create({{"a", ValueKind::kInteger},
                                     {"b", ValueKind::kInteger}}));
  std::vector<Value> four, five;
  for (int64_t i = 0; i < 4; ++i) four.push_back(Value(i));
  for (int64_t i = 0; i < 5; ++i) five.push_back(Value(i));
  ASSERT_OK_AND_ASSIGN(DomainDescriptor d,
                       DomainDescriptor::Create(schema, {four, five}));
  EXPECT_EQ(EvalQueryDomain(ConjunctiveQuery::All(schema), d).value(), 20u);
  ASSERT_OK_AND_ASSIGN(
      ConjunctiveQuery q,
      ConjunctiveQuery::Create(schema, {Predicate(RangePredicate{1, 2}),
                                        Predicate(RangePredicate{0, 2})}));
  EXPECT_EQ(EvalQueryDomain(q, d).value(), 6u);
  ASSERT_OK_AND_ASSIGN(
      ConjunctiveQuery none,
      ConjunctiveQuery::Create(schema, {Predicate(RangePredicate{7, 9}),
                                        std::nullopt}));
  EXPECT_EQ(EvalQueryDomain(none, d).value(), 0u);
}

// Random domains with m <= 10^4: product counting agrees with enumerating
// the cross product, and the instance count never exceeds either bound.
TEST(EvalQueryDomainTest, MatchesEnumerationOnRandomDomains) {
  std::mt19937_64 rng(20261018);
  for (int trial = 0; trial < 200; ++trial) {
    const int arity = 1 + static_cast<int>(rng() % 4);
    std::vector<Attribute> attributes;
    std::vector<std::vector<Value>> values;
    uint64_t m = 1;
    for (int a = 0; a < arity; ++a) {
      const bool integer = rng() % 2 == 0;
      attributes.push_back({"a" + std::to_string(a),
                            integer ? ValueKind::kInteger : ValueKind::kString});
      const uint64_t size = 1 + rng() % std::max<uint64_t>(1, 10000 / m / 2 + 1);
      const uint64_t capped = std::min<uint64_t>(size, 12);
      m *= capped;
      std::vector<Value> list;
      for (uint64_t v = 0; v < capped; ++v) {
        const int64_t x = static_cast<int64_t>(v * 3 + rng() % 3);
        if (integer) {
          list.push_back(Value(x));
        } else {
          list.push_back(Value("v" + std::to_string(x)));
        }
      }
      values.push_back(list);
    }
    ASSERT_OK_AND_ASSIGN(Schema schema, Schema::Create(attributes));
    ASSERT_OK_AND_ASSIGN(DomainDescriptor d,
                         DomainDescriptor::Create(schema, values));
    ASSERT_LE(d.size(), 10000u);

    std::vector<std::optional<Predicate>> predicates(arity);
    for (int a = 0; a < arity; ++a) {
      const int choice = static_cast<int>(rng() % 3);
      if (choice == 0) continue;
      if (attributes[a].kind == ValueKind::kInteger && choice == 1) {
        const int64_t lo = static_cast<int64_t>(rng() % 40);
        predicates[a] = RangePredicate{lo, lo + static_cast<int64_t>(rng() % 20)};
      } else {
        ValueSetPredicate set;
        for (const Value& v : d.values(a)) {
          if (rng() % 3 == 0) set.values.push_back(v);
        }
        if (attributes[a].kind == ValueKind::kInteger) {
          set.values.push_back(Value(int64_t{1000}));  // outside the domain
        } else {
          set.values.push_back(Value("missing"));
        }
        predicates[a] = set;
      }
    }
    ASSERT_OK_AND_ASSIGN(ConjunctiveQuery q,
                         ConjunctiveQuery::Create(schema, predicates));
    ASSERT_OK_AND_ASSIGN(CompiledQuery compiled, CompiledQuery::Compile(q, d));

    uint64_t enumerated = 0;
    std::vector<Tuple> sample;
    for (DomainIndex i = 0; i < d.size(); ++i) {
      const Tuple t = d.Decode(i);
      const bool match = q.Matches(t);
      EXPECT_EQ(compiled.Matches(i), match);
      if (match) ++enumerated;
      if (rng() % 4 == 0) sample.push_back(t);
    }
    EXPECT_EQ(EvalQueryDomain(q, d).value(), enumerated);

    ASSERT_OK_AND_ASSIGN(Relation r, Relation::Create(schema, sample));
    const uint64_t on_instance = EvalQueryInstance(q, r).value();
    EXPECT_LE(on_instance, std::min<uint64_t>(r.size(), enumerated));
  }
}

TEST(DomainTest, RebuildingFromSubsetGivesSubsets) {
  Relation table = ScoreTable();
  ASSERT_OK_AND_ASSIGN(DomainDescriptor d, BuildDomain(table));
  std::vector<Tuple> some = {d.Decode(0), d.Decode(17), d.Decode(89)};
  ASSERT_OK_AND_ASSIGN(Relation r, Relation::Create(table.schema(), some));
  ASSERT_OK_AND_ASSIGN(DomainDescriptor sub, BuildDomain(r));
  for (size_t a = 0; a < d.arity(); ++a) {
    for (const Value& v : sub.values(a)) {
      EXPECT_TRUE(d.ValueIndex(a, v).has_value());
    }
  }
}

TEST(ConjunctiveQueryTest, ToStringRendersPredicates) {
  EXPECT_EQ(ConjunctiveQuery::All(ScoreSchema()).ToString(), "");
  ASSERT_OK_AND_ASSIGN(
      ConjunctiveQuery q,
      ConjunctiveQuery::Create(
          ScoreSchema(),
          {Predicate(RangePredicate{26, 31}),
           Predicate(ValueSetPredicate{{Value("British")}}), std::nullopt}));
  EXPECT_EQ(q.ToString(), "age in [26,31] and nationality=British");
}

}  // namespace
}  // namespace anonview
