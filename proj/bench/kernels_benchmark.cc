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

// Serial reference kernels against their OpenMP versions.

#include <cstdint>
#include <random>
#include <vector>

#include "anonview/core_model.h"
#include "anonview/kernels.h"
#include "benchmark/benchmark.h"

namespace anonview {
namespace {

DomainDescriptor Grid() {
  Schema schema = Schema::Create({{"a", ValueKind::kInteger},
                                  {"b", ValueKind::kInteger},
                                  {"c", ValueKind::kInteger}})
                      .value();
  std::vector<Value> axis;
  for (int64_t i = 0; i < 200; ++i) axis.push_back(Value(i));
  return DomainDescriptor::Create(schema, {axis, axis, axis}).value();
}

std::vector<DomainIndex> RandomCodes(const DomainDescriptor& domain,
                                     size_t count) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<DomainIndex> code(0, domain.size() - 1);
  std::vector<DomainIndex> codes(count);
  for (DomainIndex& c : codes) c = code(rng);
  return codes;
}

CompiledQuery BoxQuery(const DomainDescriptor& domain) {
  ConjunctiveQuery q =
      ConjunctiveQuery::Create(domain.schema(),
                               {Predicate(RangePredicate{10, 120}),
                                std::nullopt, Predicate(RangePredicate{50, 60})})
          .value();
  return CompiledQuery::Compile(q, domain).value();
}

template <bool kParallel>
void BM_CountMatches(benchmark::State& state) {
  const DomainDescriptor domain = Grid();
  const std::vector<DomainIndex> codes = RandomCodes(domain, state.range(0));
  const CompiledQuery query = BoxQuery(domain);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kParallel
                                 ? kernels::CountMatches(query, codes)
                                 : kernels::CountMatchesSerial(query, codes));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool kParallel>
void BM_RetainMask(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kParallel ? kernels::RetainMask(7, state.range(0), 0.5)
                  : kernels::RetainMaskSerial(7, state.range(0), 0.5));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool kParallel>
void BM_MarginalHistogram(benchmark::State& state) {
  const DomainDescriptor domain = Grid();
  const std::vector<DomainIndex> codes = RandomCodes(domain, state.range(0));
  const std::vector<size_t> attributes = {0, 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kParallel
            ? kernels::MarginalHistogram(domain, attributes, codes)
            : kernels::MarginalHistogramSerial(domain, attributes, codes));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool kParallel>
void BM_MixtureViewDistribution(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::vector<uint32_t> instances;
  for (uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (__builtin_popcount(mask) == 2) instances.push_back(mask);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kParallel
            ? kernels::MixtureViewDistribution(m, instances, 0.7, 0.2)
            : kernels::MixtureViewDistributionSerial(m, instances, 0.7, 0.2));
  }
}

BENCHMARK(BM_CountMatches<false>)->Arg(1 << 20);
BENCHMARK(BM_CountMatches<true>)->Arg(1 << 20);
BENCHMARK(BM_RetainMask<false>)->Arg(1 << 20);
BENCHMARK(BM_RetainMask<true>)->Arg(1 << 20);
BENCHMARK(BM_MarginalHistogram<false>)->Arg(1 << 20);
BENCHMARK(BM_MarginalHistogram<true>)->Arg(1 << 20);
BENCHMARK(BM_MixtureViewDistribution<false>)->Arg(12);
BENCHMARK(BM_MixtureViewDistribution<true>)->Arg(12);

}  // namespace
}  // namespace anonview

BENCHMARK_MAIN();
