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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "anonview/estimator.h"
#include "anonview/harness/csv.h"
#include "anonview/harness/experiment.h"
#include "anonview/harness/published_files.h"
#include "anonview/harness/query_family.h"
#include "anonview/harness/query_parser.h"
#include "anonview/harness/surrogate.h"
#include "anonview/kernels.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace anonview::harness {
namespace {

using ::anonview::testing::ScoreSchema;
using ::anonview::testing::ScoreTable;

constexpr char kScoreDecl[] = "age:int,nationality:str,score:int";
constexpr char kScoreCsv[] =
    "age,nationality,score\n"
    "25,British,99\n"
    "27,British,97\n"
    "21,Indian,82\n"
    "32,Indian,90\n"
    "33,American,94\n"
    "36,American,94\n";

std::string FreshDir(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::path(::testing::TempDir()) / ("anonview_" + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

std::string WriteScoreCsv() {
  const std::string dir = FreshDir("input");
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/scores.csv";
  EXPECT_OK(WriteFile(path, kScoreCsv));
  return path;
}

TEST(SchemaDeclTest, ParseAndFormat) {
  ASSERT_OK_AND_ASSIGN(Schema s, ParseSchemaDecl(" age:int , name:string "));
  EXPECT_EQ(s.arity(), 2u);
  EXPECT_EQ(s.attribute(0).kind, ValueKind::kInteger);
  EXPECT_EQ(s.attribute(1).kind, ValueKind::kString);
  EXPECT_EQ(FormatSchemaDecl(s), "age:int,name:str");
  EXPECT_FALSE(ParseSchemaDecl("age").ok());
  EXPECT_FALSE(ParseSchemaDecl("age:float").ok());
  EXPECT_FALSE(ParseSchemaDecl("").ok());
}

TEST(CsvTest, SplitsQuotedFields) {
  ASSERT_OK_AND_ASSIGN(std::vector<std::string> f,
                       SplitCsvLine(R"( a ,"b,c","say ""hi""",)"));
  EXPECT_EQ(f, (std::vector<std::string>{"a", "b,c", "say \"hi\"", ""}));
  EXPECT_FALSE(SplitCsvLine(R"("open)").ok());
  EXPECT_EQ(FormatCsvField("plain"), "plain");
  EXPECT_EQ(FormatCsvField("a,b"), "\"a,b\"");
  EXPECT_EQ(FormatCsvField(""), "\"\"");
}

TEST(LoadRelationTest, CollapsesDuplicates) {
  ASSERT_OK_AND_ASSIGN(Schema s, ParseSchemaDecl("a:int,b:str"));
  ASSERT_OK_AND_ASSIGN(LoadedRelation r,
                       ParseRelationCsv("a,b\n1,x\n2,y\n1,x\n", s));
  EXPECT_EQ(r.rows_read, 3u);
  EXPECT_EQ(r.relation.size(), 2u);
}

TEST(LoadRelationTest, HeaderOrderIsByName) {
  ASSERT_OK_AND_ASSIGN(Schema s, ParseSchemaDecl("a:int,b:str"));
  ASSERT_OK_AND_ASSIGN(LoadedRelation r, ParseRelationCsv("b,a\nx,1\n", s));
  EXPECT_EQ(r.relation.tuples()[0], (Tuple{Value(int64_t{1}), Value("x")}));
}

TEST(LoadRelationTest, ErrorsNameTheCell) {
  ASSERT_OK_AND_ASSIGN(Schema s, ParseSchemaDecl("a:int,b:str"));
  absl::StatusOr<LoadedRelation> bad = ParseRelationCsv("a,b\n1,x\nzz,y\n", s);
  ASSERT_FALSE(bad.ok());
  const std::string message(bad.status().message());
  EXPECT_NE(message.find("row 2"), std::string::npos) << message;
  EXPECT_NE(message.find("'a'"), std::string::npos) << message;
  EXPECT_NE(message.find("zz"), std::string::npos) << message;

  absl::StatusOr<LoadedRelation> unknown = ParseRelationCsv("a,b,c\n1,x,2\n", s);
  ASSERT_FALSE(unknown.ok());
  EXPECT_NE(unknown.status().message().find("unknown attribute"),
            std::string::npos);
  EXPECT_FALSE(ParseRelationCsv("a\n1\n", s).ok());
  EXPECT_FALSE(LoadRelation("/nonexistent/file.csv", s).ok());
}

TEST(ParseQueryTest, Grammar) {
  Schema s = ScoreSchema();
  ASSERT_OK_AND_ASSIGN(ConjunctiveQuery q,
                       ParseQuery("age in [26,31] and score in [91,100]", s));
  EXPECT_EQ(q.ConstrainedAttributes(), (std::vector<size_t>{0, 2}));
  EXPECT_EQ(std::get<RangePredicate>(*q.predicate(0)), (RangePredicate{26, 31}));

  ASSERT_OK_AND_ASSIGN(ConjunctiveQuery all, ParseQuery("  ", s));
  ASSERT_OK_AND_ASSIGN(DomainDescriptor d, BuildDomain(ScoreTable()));
  EXPECT_EQ(EvalQueryDomain(all, d).value(), d.size());

  ASSERT_OK_AND_ASSIGN(
      ConjunctiveQuery set,
      ParseQuery(R"(nationality in {British, "Indian"} and score > 90)", s));
  EXPECT_EQ(std::get<ValueSetPredicate>(*set.predicate(1)).values.size(), 2u);
  EXPECT_EQ(EvalQueryInstance(set, ScoreTable()).value(), 2u);
  ASSERT_OK_AND_ASSIGN(ConjunctiveQuery eq, ParseQuery("nationality=Indian", s));
  EXPECT_EQ(EvalQueryInstance(eq, ScoreTable()).value(), 2u);
}

TEST(ParseQueryTest, Errors) {
  Schema s = ScoreSchema();
  absl::StatusOr<ConjunctiveQuery> reversed = ParseQuery("age in [31,26]", s);
  ASSERT_FALSE(reversed.ok());
  EXPECT_NE(reversed.status().message().find("malformed range"),
            std::string::npos);
  EXPECT_NE(reversed.status().message().find("position"), std::string::npos);
  EXPECT_FALSE(ParseQuery("height=3", s).ok());
  EXPECT_FALSE(ParseQuery("age=old", s).ok());
  EXPECT_FALSE(ParseQuery("nationality in [1,2]", s).ok());
  EXPECT_FALSE(ParseQuery("age=3 and", s).ok());
  EXPECT_FALSE(ParseQuery("age=3 age=4", s).ok());
  EXPECT_FALSE(ParseQuery("age=3 and age=4", s).ok());
}

TEST(ParseQueryTest, RendersAndReparses) {
  ASSERT_OK_AND_ASSIGN(DomainDescriptor d, BuildDomain(ScoreTable()));
  ASSERT_OK_AND_ASSIGN(std::vector<ConjunctiveQuery> family,
                       GenerateQueryFamily(d, {.max_arity = 3}));
  for (const ConjunctiveQuery& q : family) {
    ASSERT_OK_AND_ASSIGN(ConjunctiveQuery back, ParseQuery(q.ToString(), d.schema()));
    EXPECT_EQ(back, q) << q.ToString();
  }
  ASSERT_OK_AND_ASSIGN(Schema odd, ParseSchemaDecl("name:str"));
  ASSERT_OK_AND_ASSIGN(
      ConjunctiveQuery quoted,
      ConjunctiveQuery::Create(
          odd, {Predicate(ValueSetPredicate{{Value("a b"), Value("x\"y")}})}));
  ASSERT_OK_AND_ASSIGN(ConjunctiveQuery back, ParseQuery(quoted.ToString(), odd));
  EXPECT_EQ(back, quoted);
}

TEST(QueryFamilyTest, SizeAndShape) {
  ASSERT_OK_AND_ASSIGN(DomainDescriptor d, BuildDomain(ScoreTable()));
  // Six age values give 15 ranges; five scores give 10; three nationalities.
  const uint64_t age = 15, nat = 3, score = 10;
  const uint64_t expected = (age + nat + score) +
                            (age * nat + age * score + nat * score) +
                            age * nat * score;
  EXPECT_EQ(QueryFamilySize(d, {.max_arity = 3}).value(), expected);
  EXPECT_EQ(QueryFamilySize(d, {.max_arity = 1}).value(), age + nat + score);
  ASSERT_OK_AND_ASSIGN(std::vector<ConjunctiveQuery> family,
                       GenerateQueryFamily(d, {.max_arity = 3}));
  ASSERT_EQ(family.size(), expected);
  std::set<std::string> distinct;
  for (const auto& q : family) {
    distinct.insert(q.ToString());
    EXPECT_GE(q.ConstrainedAttributes().size(), 1u);
    EXPECT_LE(q.ConstrainedAttributes().size(), 3u);
  }
  EXPECT_EQ(distinct.size(), expected);

  ASSERT_OK_AND_ASSIGN(std::vector<ConjunctiveQuery> sampled,
                       GenerateQueryFamily(d, {.max_arity = 3, .cap = 50, .seed = 4}));
  ASSERT_OK_AND_ASSIGN(std::vector<ConjunctiveQuery> again,
                       GenerateQueryFamily(d, {.max_arity = 3, .cap = 50, .seed = 4}));
  EXPECT_EQ(sampled.size(), 50u);
  EXPECT_EQ(sampled, again);
  EXPECT_FALSE(GenerateQueryFamily(d, {.max_arity = 0}).ok());
}

RunConfig ScoreConfig(const std::string& input, double alpha, double beta,
                      uint64_t seed) {
  RunConfig config;
  config.input_path = input;
  config.schema_decl = kScoreDecl;
  config.alpha = alpha;
  config.beta = beta;
  config.seed = seed;
  return config;
}

TEST(RunConfigTest, Validation) {
  RunConfig config = ScoreConfig("x.csv", 0.5, 0.1, 1);
  EXPECT_OK(ValidateRunConfig(config, true));
  config.k = 1.0;
  config.gamma = 0.5;
  EXPECT_FALSE(ValidateRunConfig(config, true).ok());
  config.alpha.reset();
  config.beta.reset();
  EXPECT_OK(ValidateRunConfig(config, true));
  config.seed.reset();
  EXPECT_FALSE(ValidateRunConfig(config, true).ok());
  EXPECT_OK(ValidateRunConfig(config, false));
  config.gamma.reset();
  EXPECT_FALSE(ValidateRunConfig(config, false).ok());
}

TEST(PublishTest, RoundTripAndDeterminism) {
  const std::string input = WriteScoreCsv();
  RunConfig config = ScoreConfig(input, 0.6, 0.2, 99);
  config.out_dir = FreshDir("pub_a");
  ASSERT_OK_AND_ASSIGN(PublishResult first, Publish(config));
  ASSERT_OK_AND_ASSIGN(LoadedView loaded, ReadPublishedView(config.out_dir));
  EXPECT_EQ(loaded.view.domain, first.view.domain);
  EXPECT_EQ(loaded.view.view, first.view.view);
  EXPECT_EQ(loaded.view.params, first.view.params);
  EXPECT_EQ(loaded.view.seed, 99u);
  EXPECT_EQ(loaded.metadata.n, 6u);

  const std::string dir_a = config.out_dir;
  config.out_dir = FreshDir("pub_b");
  ASSERT_OK(Publish(config));
  for (const char* file : {kViewFile, kDomainFile, kParamsFile}) {
    EXPECT_EQ(ReadFile(dir_a + "/" + file).value(),
              ReadFile(config.out_dir + "/" + file).value())
        << file;
  }
}

TEST(PublishTest, IdentityViewIsAPermutationOfTheInput) {
  const std::string input = WriteScoreCsv();
  RunConfig config = ScoreConfig(input, 1.0, 0.0, 5);
  config.out_dir = FreshDir("pub_identity");
  ASSERT_OK(Publish(config));
  ASSERT_OK_AND_ASSIGN(std::string view_csv, ReadFile(config.out_dir + "/view.csv"));
  ASSERT_OK_AND_ASSIGN(LoadedRelation view,
                       ParseRelationCsv(view_csv, ScoreSchema()));
  EXPECT_EQ(view.rows_read, 6u);
  EXPECT_EQ(view.relation, ScoreTable());
}

TEST(PublishTest, FilesCarryNoOriginMarker) {
  const std::string input = WriteScoreCsv();
  RunConfig config = ScoreConfig(input, 0.5, 0.5, 12);
  config.out_dir = FreshDir("pub_origin");
  ASSERT_OK_AND_ASSIGN(PublishResult result, Publish(config));
  ASSERT_OK_AND_ASSIGN(std::string view_csv, ReadFile(config.out_dir + "/view.csv"));
  // Header lists exactly the schema attributes.
  EXPECT_EQ(view_csv.substr(0, view_csv.find('\n')), "age,nationality,score");
  // Rows are not grouped by origin: some inserted row precedes some retained
  // row.
  std::vector<bool> origin;
  std::vector<std::string> lines;
  size_t start = view_csv.find('\n') + 1;
  while (start < view_csv.size()) {
    const size_t end = view_csv.find('\n', start);
    lines.push_back(view_csv.substr(start, end - start));
    start = end + 1;
  }
  for (const std::string& l : lines) {
    ASSERT_OK_AND_ASSIGN(LoadedRelation one,
                         ParseRelationCsv("age,nationality,score\n" + l + "\n",
                                          ScoreSchema()));
    origin.push_back(result.instance.Contains(one.relation.tuples()[0]));
  }
  ASSERT_GT(origin.size(), 10u);
  const auto first_inserted = std::find(origin.begin(), origin.end(), false);
  EXPECT_NE(std::find(first_inserted, origin.end(), true), origin.end());
  EXPECT_FALSE(std::is_sorted(lines.begin(), lines.end()));
}

TEST(PublishTest, PlannerErrorsAreConfigurationProblems) {
  const std::string input = WriteScoreCsv();
  RunConfig config;
  config.input_path = input;
  config.schema_decl = kScoreDecl;
  config.k = 20.0;  // d = 20 * 6 / 90 > 1
  config.gamma = 0.5;
  config.seed = 1;
  absl::StatusOr<PublishResult> result = Publish(config);
  ASSERT_FALSE(result.ok());
  EXPECT_EQ(result.status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(MarginalQueryEvaluatorTest, AgreesWithScan) {
  ASSERT_OK_AND_ASSIGN(Relation surrogate, MakeAdultsSurrogate(3, 2000));
  ASSERT_OK_AND_ASSIGN(DomainDescriptor d, BuildDomain(surrogate));
  ASSERT_OK_AND_ASSIGN(std::vector<DomainIndex> codes, d.EncodeRelation(surrogate));
  ASSERT_OK_AND_ASSIGN(std::vector<ConjunctiveQuery> family,
                       GenerateQueryFamily(d, {.max_arity = 3, .cap = 400, .seed = 8}));
  MarginalQueryEvaluator evaluator(d, codes);
  for (const ConjunctiveQuery& q : family) {
    ASSERT_OK_AND_ASSIGN(uint64_t fast, evaluator.Count(q));
    EXPECT_EQ(fast, EvalQueryInstance(q, surrogate).value()) << q.ToString();
  }
  EXPECT_EQ(evaluator.Count(ConjunctiveQuery::All(d.schema())).value(),
            surrogate.size());
}

TEST(ExperimentTest, IdentityMechanismHasNoError) {
  const std::string input = WriteScoreCsv();
  RunConfig config = ScoreConfig(input, 1.0, 0.0, 3);
  ASSERT_OK_AND_ASSIGN(ExperimentResult result, RunExperiment(config));
  ASSERT_FALSE(result.records.empty());
  for (const ScatterRecord& r : result.records) {
    EXPECT_EQ(r.abs_error, 0.0) << r.query;
    EXPECT_EQ(r.est, static_cast<double>(r.q_of_i));
  }
  for (const BandCoverage& b : result.summary.bands) EXPECT_EQ(b.coverage, 1.0);
}

TEST(ExperimentTest, OutputsAreByteDeterministic) {
  const std::string input = WriteScoreCsv();
  RunConfig config = ScoreConfig(input, 0.5, 0.1, 21);
  config.bands = {0.5, 2, 5, 20};
  config.large_query_threshold = 1;
  config.out_dir = FreshDir("exp_a");
  ASSERT_OK_AND_ASSIGN(ExperimentResult a, RunExperiment(config));
  const std::string dir_a = config.out_dir;
  config.out_dir = FreshDir("exp_b");
  ASSERT_OK(RunExperiment(config));
  for (const char* file : {"scatter.csv", "summary.json"}) {
    EXPECT_EQ(ReadFile(dir_a + "/" + file).value(),
              ReadFile(config.out_dir + "/" + file).value());
  }
  for (size_t i = 1; i < a.summary.bands.size(); ++i) {
    EXPECT_LE(a.summary.bands[i - 1].coverage, a.summary.bands[i].coverage);
  }
  ASSERT_OK_AND_ASSIGN(std::string scatter, ReadFile(dir_a + "/scatter.csv"));
  ASSERT_OK_AND_ASSIGN(std::vector<ScatterRecord> parsed, ScatterFromCsv(scatter));
  ASSERT_EQ(parsed.size(), a.records.size());
  for (size_t i = 0; i < parsed.size(); ++i) {
    EXPECT_EQ(parsed[i].query, a.records[i].query);
    EXPECT_EQ(parsed[i].est, a.records[i].est);
    EXPECT_EQ(parsed[i].abs_error, std::abs(parsed[i].q_of_i - parsed[i].est));
  }
}

TEST(ExperimentTest, ReusesAPublishedView) {
  const std::string input = WriteScoreCsv();
  RunConfig publish = ScoreConfig(input, 0.7, 0.2, 8);
  publish.out_dir = FreshDir("exp_view");
  ASSERT_OK(Publish(publish));
  RunConfig config;
  config.input_path = input;
  config.schema_decl = kScoreDecl;
  config.view_dir = publish.out_dir;
  ASSERT_OK_AND_ASSIGN(ExperimentResult from_dir, RunExperiment(config));
  publish.out_dir.clear();
  ASSERT_OK_AND_ASSIGN(ExperimentResult direct, RunExperiment(publish));
  ASSERT_EQ(from_dir.records.size(), direct.records.size());
  for (size_t i = 0; i < direct.records.size(); ++i) {
    EXPECT_EQ(from_dir.records[i].est, direct.records[i].est);
  }
}

// On the six-row table, single-attribute estimates averaged over seeds
// approach the true counts.
TEST(ExperimentTest, ScoreTableEstimatesAreUnbiased) {
  Relation table = ScoreTable();
  ASSERT_OK_AND_ASSIGN(DomainDescriptor d, BuildDomain(table));
  ASSERT_OK_AND_ASSIGN(std::vector<ConjunctiveQuery> queries,
                       GenerateQueryFamily(d, {.max_arity = 1, .exhaustive = true}));
  const MechanismParams p{.alpha = 0.6, .beta = 0.1};
  const int seeds = 4000;
  std::vector<double> sum(queries.size()), sum_sq(queries.size());
  for (int s = 0; s < seeds; ++s) {
    ASSERT_OK_AND_ASSIGN(PublishedView v, Anonymize(table, d, p, s));
    ASSERT_OK_AND_ASSIGN(std::vector<ScatterRecord> records,
                         ComputeScatter(table, v, queries));
    for (size_t j = 0; j < records.size(); ++j) {
      sum[j] += records[j].est;
      sum_sq[j] += records[j].est * records[j].est;
    }
  }
  for (size_t j = 0; j < queries.size(); ++j) {
    const double truth = static_cast<double>(EvalQueryInstance(queries[j], table).value());
    const double mean = sum[j] / seeds;
    const double sd = std::sqrt((sum_sq[j] - seeds * mean * mean) / (seeds - 1));
    EXPECT_LE(std::abs(mean - truth), 4.0 * sd / std::sqrt(seeds) + 1e-9)
        << queries[j].ToString();
  }
}

TEST(SummarizeErrorsTest, Coverage) {
  std::vector<ScatterRecord> exact;
  for (uint64_t q = 0; q < 50; ++q) {
    exact.push_back({.query = "x", .q_of_i = q, .est = double(q), .abs_error = 0,
                     .n_d = 100});
  }
  const std::vector<double> bands = {1, 10, 100};
  ASSERT_OK_AND_ASSIGN(ErrorTable table, SummarizeErrors(exact, bands));
  for (const BandCoverage& b : table.overall) EXPECT_EQ(b.coverage, 1.0);
  ASSERT_EQ(table.deciles.size(), 10u);
  for (const DecileCoverage& dec : table.deciles) {
    EXPECT_EQ(dec.count, 5u);
    for (const BandCoverage& b : dec.bands) EXPECT_EQ(b.coverage, 1.0);
  }
  EXPECT_FALSE(SummarizeErrors({}, bands).ok());
  EXPECT_FALSE(ScatterFromCsv("query,q_of_i,est,abs_error,n_d\nx,1,2\n").ok());
  EXPECT_FALSE(ScatterFromCsv("wrong header\n").ok());
}

TEST(SummarizeErrorsTest, NearlyEqualParametersLoseAccuracy) {
  const std::string input = WriteScoreCsv();
  RunConfig config = ScoreConfig(input, 0.5 + 1e-6, 0.5, 4);
  ASSERT_OK_AND_ASSIGN(ExperimentResult result, RunExperiment(config));
  const std::vector<double> bands = {1, 10};
  ASSERT_OK_AND_ASSIGN(ErrorTable table, SummarizeErrors(result.records, bands));
  EXPECT_LT(table.overall[0].coverage, 0.25);
  EXPECT_LT(table.overall[1].coverage, 0.25);
  const std::string text = ErrorTableToText(table);
  EXPECT_NE(text.find("decile1"), std::string::npos);
}

TEST(SurrogateTest, ShapeMatchesCensusExtract) {
  ASSERT_OK_AND_ASSIGN(Relation a, MakeAdultsSurrogate(1));
  EXPECT_EQ(a.size(), kAdultsRows);
  ASSERT_OK_AND_ASSIGN(DomainDescriptor d, BuildDomain(a));
  EXPECT_EQ(d.attribute_sizes(),
            (std::vector<uint64_t>{72, 7, 16, 7, 14, 5, 2, 41, 2}));
  EXPECT_EQ(d.size(), 648023040u);
  ASSERT_OK_AND_ASSIGN(Relation b, MakeAdultsSurrogate(1));
  EXPECT_EQ(a, b);
  EXPECT_FALSE(MakeAdultsSurrogate(1, 10).ok());
  ASSERT_OK_AND_ASSIGN(Schema schema, ParseSchemaDecl(AdultsSchemaDecl()));
  EXPECT_EQ(schema, a.schema());
}

}  // namespace
}  // namespace anonview::harness
