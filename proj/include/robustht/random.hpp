// Copyright 2026 The robustht Authors
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

// Keyed random streams. A stream is a function of (seed, key) only, so trials
// can run in any order or on any thread.

#ifndef ROBUSTHT_RANDOM_HPP_
#define ROBUSTHT_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace robustht {

class KeyedRng {
 public:
  KeyedRng(std::uint64_t seed, std::uint64_t key) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(key),
                      static_cast<std::uint32_t>(key >> 32)};
    engine_.seed(seq);
  }

  // Uniform on [0, 1) from the top 53 bits. Written out rather than using
  // std::uniform_real_distribution, whose output is not portable.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Exponential(1), i.e. Gamma(1).
  double Exponential() { return -std::log1p(-Uniform()); }

  // Dirichlet(1, ..., 1) on k points.
  std::vector<double> FlatDirichlet(std::size_t k) {
    std::vector<double> x(k);
    double s = 0.0;
    for (double& v : x) {
      v = Exponential();
      s += v;
    }
    for (double& v : x) v /= s;
    return x;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace robustht

#endif  // ROBUSTHT_RANDOM_HPP_
