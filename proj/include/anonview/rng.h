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

// Seed derivation. Every randomized step draws from a stream named by
// (seed, stream id); per-item draws are a pure function of
// (seed, stream id, item index), so they do not depend on thread schedule or
// on how many draws other streams consumed.

#ifndef ANONVIEW_RNG_H_
#define ANONVIEW_RNG_H_

#include <cstdint>
#include <random>

namespace anonview {

enum class Stream : uint64_t {
  kRemoval = 1,
  kInsertionCount = 2,
  kInsertionSample = 3,
  kShuffle = 4,
  kQuerySample = 5,
  kSurrogate = 6,
  kExperiment = 7,
};

uint64_t SplitMix64(uint64_t x);

uint64_t DeriveSeed(uint64_t seed, Stream stream, uint64_t index = 0);

// Uniform double in [0, 1) with 53 random bits.
double UniformDouble(uint64_t seed, Stream stream, uint64_t index);

// Sequential engine for draws that are inherently ordered.
inline std::mt19937_64 StreamEngine(uint64_t seed, Stream stream,
                                    uint64_t index = 0) {
  return std::mt19937_64(DeriveSeed(seed, stream, index));
}

}  // namespace anonview

#endif  // ANONVIEW_RNG_H_
