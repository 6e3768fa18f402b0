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

// Data-parallel inner loops. Each kernel has an OpenMP version and a plain
// serial reference with the same signature; the two must agree exactly and
// the tests hold them to that.

#ifndef ANONVIEW_KERNELS_H_
#define ANONVIEW_KERNELS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "anonview/core_model.h"

namespace anonview::kernels {

// Number of codes matched by `query`.
uint64_t CountMatches(const CompiledQuery& query,
                      std::span<const DomainIndex> codes);
uint64_t CountMatchesSerial(const CompiledQuery& query,
                            std::span<const DomainIndex> codes);

// Removal pass: flag i is 1 iff item i survives, with probability `alpha`,
// decided by the (seed, removal stream, i) draw.
std::vector<uint8_t> RetainMask(uint64_t seed, size_t count, double alpha);
std::vector<uint8_t> RetainMaskSerial(uint64_t seed, size_t count,
                                      double alpha);

// Joint histogram of `codes` projected onto `attributes`, laid out in mixed
// radix over the listed attributes (last fastest).
std::vector<uint64_t> MarginalHistogram(const DomainDescriptor& domain,
                                        std::span<const size_t> attributes,
                                        std::span<const DomainIndex> codes);
std::vector<uint64_t> MarginalHistogramSerial(
    const DomainDescriptor& domain, std::span<const size_t> attributes,
    std::span<const DomainIndex> codes);

// Tiny-domain view law. Bit j of a mask stands for domain tuple j. For each
// view V (all 2^m masks) returns the average over `instances` of
//   prod_{t in I} (alpha if t in V else 1-alpha)
//   * prod_{t not in I} (beta if t in V else 1-beta).
std::vector<double> MixtureViewDistribution(int m,
                                            std::span<const uint32_t> instances,
                                            double alpha, double beta);
std::vector<double> MixtureViewDistributionSerial(
    int m, std::span<const uint32_t> instances, double alpha, double beta);

}  // namespace anonview::kernels

#endif  // ANONVIEW_KERNELS_H_
