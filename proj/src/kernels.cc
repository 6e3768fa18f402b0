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

#include "anonview/kernels.h"

#include <bit>
#include <cmath>

#include "anonview/rng.h"

namespace anonview::kernels {
namespace {

// Powers a^k for k = 0..m, so a view likelihood is a table lookup per
// popcount rather than m multiplications.
std::vector<double> PowerTable(double base, int m) {
  std::vector<double> table(m + 1, 1.0);
  for (int k = 1; k <= m; ++k) table[k] = table[k - 1] * base;
  return table;
}

struct ViewLikelihood {
  ViewLikelihood(int m, double alpha, double beta)
      : m(m),
        keep(PowerTable(alpha, m)),
        drop(PowerTable(1.0 - alpha, m)),
        insert(PowerTable(beta, m)),
        skip(PowerTable(1.0 - beta, m)) {}

  double operator()(uint32_t instance, uint32_t view) const {
    const int n = std::popcount(instance);
    const int kept = std::popcount(instance & view);
    const int inserted = std::popcount(view & ~instance);
    return keep[kept] * drop[n - kept] * insert[inserted] *
           skip[m - n - inserted];
  }

  int m;
  std::vector<double> keep, drop, insert, skip;
};

std::vector<uint64_t> HistogramStrides(const DomainDescriptor& domain,
                                       std::span<const size_t> attributes,
                                       uint64_t& cells) {
  std::vector<uint64_t> strides(attributes.size(), 1);
  cells = 1;
  for (size_t k = attributes.size(); k-- > 0;) {
    strides[k] = cells;
    cells *= domain.attribute_size(attributes[k]);
  }
  return strides;
}

}  // namespace

uint64_t CountMatchesSerial(const CompiledQuery& query,
                            std::span<const DomainIndex> codes) {
  uint64_t count = 0;
  for (DomainIndex code : codes) {
    if (query.Matches(code)) ++count;
  }
  return count;
}

uint64_t CountMatches(const CompiledQuery& query,
                      std::span<const DomainIndex> codes) {
  uint64_t count = 0;
  const int64_t size = static_cast<int64_t>(codes.size());
#pragma omp parallel for reduction(+ : count) schedule(static)
  for (int64_t i = 0; i < size; ++i) {
    if (query.Matches(codes[i])) ++count;
  }
  return count;
}

std::vector<uint8_t> RetainMaskSerial(uint64_t seed, size_t count,
                                      double alpha) {
  std::vector<uint8_t> mask(count);
  for (size_t i = 0; i < count; ++i) {
    mask[i] = UniformDouble(seed, Stream::kRemoval, i) < alpha ? 1 : 0;
  }
  return mask;
}

std::vector<uint8_t> RetainMask(uint64_t seed, size_t count, double alpha) {
  std::vector<uint8_t> mask(count);
  const int64_t size = static_cast<int64_t>(count);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < size; ++i) {
    mask[i] = UniformDouble(seed, Stream::kRemoval, i) < alpha ? 1 : 0;
  }
  return mask;
}

std::vector<uint64_t> MarginalHistogramSerial(
    const DomainDescriptor& domain, std::span<const size_t> attributes,
    std::span<const DomainIndex> codes) {
  uint64_t cells = 0;
  const std::vector<uint64_t> strides =
      HistogramStrides(domain, attributes, cells);
  std::vector<uint64_t> histogram(cells, 0);
  for (DomainIndex code : codes) {
    uint64_t cell = 0;
    for (size_t k = 0; k < attributes.size(); ++k) {
      cell += domain.Digit(code, attributes[k]) * strides[k];
    }
    ++histogram[cell];
  }
  return histogram;
}

std::vector<uint64_t> MarginalHistogram(const DomainDescriptor& domain,
                                        std::span<const size_t> attributes,
                                        std::span<const DomainIndex> codes) {
  uint64_t cells = 0;
  const std::vector<uint64_t> strides =
      HistogramStrides(domain, attributes, cells);
  std::vector<uint64_t> histogram(cells, 0);
  const int64_t size = static_cast<int64_t>(codes.size());
#pragma omp parallel
  {
    std::vector<uint64_t> local(cells, 0);
#pragma omp for schedule(static) nowait
    for (int64_t i = 0; i < size; ++i) {
      uint64_t cell = 0;
      for (size_t k = 0; k < attributes.size(); ++k) {
        cell += domain.Digit(codes[i], attributes[k]) * strides[k];
      }
      ++local[cell];
    }
#pragma omp critical
    for (uint64_t c = 0; c < cells; ++c) histogram[c] += local[c];
  }
  return histogram;
}

std::vector<double> MixtureViewDistributionSerial(
    int m, std::span<const uint32_t> instances, double alpha, double beta) {
  const ViewLikelihood likelihood(m, alpha, beta);
  const uint32_t views = uint32_t{1} << m;
  const double weight = 1.0 / static_cast<double>(instances.size());
  std::vector<double> distribution(views, 0.0);
  for (uint32_t v = 0; v < views; ++v) {
    double sum = 0.0;
    for (uint32_t instance : instances) sum += likelihood(instance, v);
    distribution[v] = sum * weight;
  }
  return distribution;
}

std::vector<double> MixtureViewDistribution(int m,
                                            std::span<const uint32_t> instances,
                                            double alpha, double beta) {
  const ViewLikelihood likelihood(m, alpha, beta);
  const int64_t views = int64_t{1} << m;
  const double weight = 1.0 / static_cast<double>(instances.size());
  std::vector<double> distribution(views, 0.0);
#pragma omp parallel for schedule(static)
  for (int64_t v = 0; v < views; ++v) {
    double sum = 0.0;
    for (uint32_t instance : instances) {
      sum += likelihood(instance, static_cast<uint32_t>(v));
    }
    distribution[v] = sum * weight;
  }
  return distribution;
}

}  // namespace anonview::kernels
