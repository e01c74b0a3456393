// Copyright 2026 The qstance Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Hashing and seeded randomness with platform-independent output.
// std::mt19937_64 is fully specified by the standard, but the standard
// distributions are not, so bounded draws and shuffles are done here.

#ifndef QSTANCE_UTIL_RANDOM_H_
#define QSTANCE_UTIL_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace qstance {

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view data, uint64_t seed = 0xcbf29ce484222325ULL);

// SplitMix64 finalizer; good for turning a hash into well-mixed bits.
uint64_t Mix64(uint64_t x);

// Uniform double in [0, 1) from 53 high bits.
double UnitInterval(uint64_t bits);

class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  uint64_t UniformBelow(uint64_t bound);

  double UniformUnit() { return UnitInterval(engine_()); }

  template <typename T>
  void Shuffle(std::vector<T> &items) {
    for (size_t i = items.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(UniformBelow(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // Uniform k-subset of [0, n) as ascending indices (selection sampling,
  // single pass). k is clamped to n.
  std::vector<size_t> SampleIndices(size_t n, size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace qstance

#endif  // QSTANCE_UTIL_RANDOM_H_
