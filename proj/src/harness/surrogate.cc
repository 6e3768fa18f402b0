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

#include "anonview/harness/surrogate.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>
#include <string_view>
#include <vector>

#include "anonview/harness/csv.h"
#include "anonview/rng.h"

namespace anonview::harness {
namespace {

struct Category {
  std::string_view name;
  double weight;
};

constexpr int64_t kMinAge = 17;
constexpr int64_t kMaxAge = 88;

constexpr std::array<Category, 7> kWorkclass = {{
    {"Private", 0.739},       {"Self-emp-not-inc", 0.083},
    {"Local-gov", 0.068},     {"State-gov", 0.042},
    {"Self-emp-inc", 0.036},  {"Federal-gov", 0.031},
    {"Without-pay", 0.0005},
}};

// Ordered roughly by years of schooling.
constexpr std::array<Category, 16> kEducation = {{
    {"Preschool", 0.0015},   {"1st-4th", 0.005},      {"5th-6th", 0.0095},
    {"7th-8th", 0.018},      {"9th", 0.015},          {"10th", 0.027},
    {"11th", 0.035},         {"12th", 0.012},         {"HS-grad", 0.326},
    {"Some-college", 0.221}, {"Assoc-voc", 0.043},    {"Assoc-acdm", 0.033},
    {"Bachelors", 0.167},    {"Masters", 0.054},      {"Prof-school", 0.018},
    {"Doctorate", 0.012},
}};

constexpr std::array<Category, 7> kMarital = {{
    {"Married-civ-spouse", 0.466},    {"Never-married", 0.323},
    {"Divorced", 0.14},               {"Separated", 0.031},
    {"Widowed", 0.027},               {"Married-spouse-absent", 0.012},
    {"Married-AF-spouse", 0.0007},
}};

constexpr std::array<Category, 14> kOccupation = {{
    {"Prof-specialty", 0.134},    {"Craft-repair", 0.134},
    {"Exec-managerial", 0.132},   {"Adm-clerical", 0.123},
    {"Sales", 0.119},             {"Other-service", 0.107},
    {"Machine-op-inspct", 0.065}, {"Transport-moving", 0.052},
    {"Handlers-cleaners", 0.045}, {"Farming-fishing", 0.033},
    {"Tech-support", 0.030},      {"Protective-serv", 0.021},
    {"Priv-house-serv", 0.005},   {"Armed-Forces", 0.0003},
}};

constexpr std::array<Category, 5> kRace = {{
    {"White", 0.86},
    {"Black", 0.093},
    {"Asian-Pac-Islander", 0.03},
    {"Amer-Indian-Eskimo", 0.0095},
    {"Other", 0.0077},
}};

constexpr std::array<Category, 2> kSex = {{{"Male", 0.676}, {"Female", 0.324}}};

constexpr std::array<Category, 41> kCountry = {{
    {"United-States", 0.912},
    {"Mexico", 0.02},
    {"Philippines", 0.006},
    {"Germany", 0.0042},
    {"Puerto-Rico", 0.0036},
    {"Canada", 0.0036},
    {"India", 0.0033},
    {"El-Salvador", 0.0033},
    {"Cuba", 0.003},
    {"England", 0.0028},
    {"Jamaica", 0.0026},
    {"South", 0.0024},
    {"China", 0.0022},
    {"Italy", 0.0022},
    {"Dominican-Republic", 0.0022},
    {"Vietnam", 0.0021},
    {"Guatemala", 0.002},
    {"Japan", 0.0019},
    {"Poland", 0.0019},
    {"Columbia", 0.0018},
    {"Iran", 0.0014},
    {"Taiwan", 0.0014},
    {"Haiti", 0.0014},
    {"Portugal", 0.0011},
    {"Nicaragua", 0.0011},
    {"Peru", 0.001},
    {"Greece", 0.001},
    {"France", 0.0009},
    {"Ecuador", 0.0009},
    {"Ireland", 0.0008},
    {"Hong", 0.0006},
    {"Cambodia", 0.0006},
    {"Trinadad&Tobago", 0.0006},
    {"Laos", 0.0006},
    {"Thailand", 0.0006},
    {"Yugoslavia", 0.0005},
    {"Outlying-US(Guam-USVI-etc)", 0.0005},
    {"Hungary", 0.0004},
    {"Honduras", 0.0004},
    {"Scotland", 0.0004},
    {"Holand-Netherlands", 0.00003},
}};

template <size_t N>
std::discrete_distribution<size_t> Distribution(
    const std::array<Category, N>& categories) {
  std::vector<double> weights;
  for (const Category& c : categories) weights.push_back(c.weight);
  return std::discrete_distribution<size_t>(weights.begin(), weights.end());
}

class Sampler {
 public:
  Sampler()
      : workclass_(Distribution(kWorkclass)),
        education_(Distribution(kEducation)),
        occupation_(Distribution(kOccupation)),
        race_(Distribution(kRace)),
        country_(Distribution(kCountry)) {
    std::vector<double> age_weights;
    for (int64_t a = kMinAge; a <= kMaxAge; ++a) {
      const double x = static_cast<double>(a - kMinAge + 1);
      age_weights.push_back(std::pow(x, 1.2) * std::exp(-x / 10.0));
    }
    age_ = std::discrete_distribution<size_t>(age_weights.begin(),
                                              age_weights.end());
    // Young people are mostly never married; widowhood comes late.
    for (int band = 0; band < 3; ++band) {
      std::vector<double> w;
      for (size_t i = 0; i < kMarital.size(); ++i) {
        double weight = kMarital[i].weight;
        if (band == 0) {
          if (i == 1) weight *= 6.0;
          if (i == 4) weight *= 0.05;
        } else if (band == 2) {
          if (i == 1) weight *= 0.3;
          if (i == 4) weight *= 4.0;
        }
        w.push_back(weight);
      }
      marital_[band] =
          std::discrete_distribution<size_t>(w.begin(), w.end());
    }
  }

  // Value indices in schema order.
  std::array<size_t, 9> Draw(std::mt19937_64& engine) {
    std::array<size_t, 9> row;
    row[0] = age_(engine);
    const int64_t age = kMinAge + static_cast<int64_t>(row[0]);
    row[1] = workclass_(engine);
    row[2] = education_(engine);
    row[3] = marital_[age < 26 ? 0 : (age < 55 ? 1 : 2)](engine);
    row[4] = occupation_(engine);
    row[5] = race_(engine);
    // Married-civ-spouse rows are mostly husbands.
    const double male = row[3] == 0 ? 0.88 : 0.55;
    row[6] = std::bernoulli_distribution(male)(engine) ? 0 : 1;
    row[7] = country_(engine);
    double logit = -3.2 + 0.35 * (static_cast<double>(row[2]) - 8.0) +
                   (row[3] == 0 ? 1.8 : 0.0) + (row[6] == 0 ? 0.3 : 0.0) +
                   (age >= 30 && age < 60 ? 0.8 : 0.0);
    const double rich = 1.0 / (1.0 + std::exp(-logit));
    row[8] = std::bernoulli_distribution(rich)(engine) ? 1 : 0;
    return row;
  }

 private:
  std::discrete_distribution<size_t> age_;
  std::discrete_distribution<size_t> workclass_;
  std::discrete_distribution<size_t> education_;
  std::array<std::discrete_distribution<size_t>, 3> marital_;
  std::discrete_distribution<size_t> occupation_;
  std::discrete_distribution<size_t> race_;
  std::discrete_distribution<size_t> country_;
};

template <size_t N>
Value Name(const std::array<Category, N>& categories, size_t i) {
  return std::string(categories[i].name);
}

Tuple ToTuple(const std::array<size_t, 9>& row) {
  return {Value(kMinAge + static_cast<int64_t>(row[0])),
          Name(kWorkclass, row[1]),
          Name(kEducation, row[2]),
          Name(kMarital, row[3]),
          Name(kOccupation, row[4]),
          Name(kRace, row[5]),
          Name(kSex, row[6]),
          Name(kCountry, row[7]),
          Value(std::string(row[8] == 0 ? "<=50K" : ">50K"))};
}

}  // namespace

std::string AdultsSchemaDecl() {
  return "age:int,workclass:str,education:str,marital-status:str,"
         "occupation:str,race:str,sex:str,native-country:str,salary:str";
}

absl::StatusOr<Relation> MakeAdultsSurrogate(uint64_t seed, uint64_t n) {
  constexpr std::array<size_t, 9> kSizes = {
      kMaxAge - kMinAge + 1, kWorkclass.size(), kEducation.size(),
      kMarital.size(),       kOccupation.size(), kRace.size(),
      kSex.size(),           kCountry.size(),    2};
  const size_t widest = *std::max_element(kSizes.begin(), kSizes.end());
  if (n < widest) {
    return absl::InvalidArgumentError(
        "surrogate needs at least 72 rows to cover every value");
  }
  absl::StatusOr<Schema> schema = ParseSchemaDecl(AdultsSchemaDecl());
  if (!schema.ok()) return schema.status();

  std::mt19937_64 engine = StreamEngine(seed, Stream::kSurrogate);
  Sampler sampler;
  std::set<std::array<size_t, 9>> rows;
  // Coverage rows: row i carries value i mod |D_a| on every attribute, so
  // every value occurs and the rows are distinct by age.
  for (size_t i = 0; i < widest; ++i) {
    std::array<size_t, 9> row;
    for (size_t a = 0; a < kSizes.size(); ++a) row[a] = i % kSizes[a];
    rows.insert(row);
  }
  while (rows.size() < n) rows.insert(sampler.Draw(engine));

  std::vector<Tuple> tuples;
  tuples.reserve(rows.size());
  for (const auto& row : rows) tuples.push_back(ToTuple(row));
  return Relation::Create(*std::move(schema), std::move(tuples));
}

}  // namespace anonview::harness
