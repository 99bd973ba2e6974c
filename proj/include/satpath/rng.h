// Copyright 2026 The Satpath Authors
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

#ifndef SATPATH_RNG_H_
#define SATPATH_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace satpath {

// All randomness derives from one 64-bit seed.  Substreams are keyed by a
// path of integers (e.g. {seed, restart}) and mixed with SplitMix64, so a
// worker's stream depends only on its key and never on scheduling.
std::uint64_t SplitMix64(std::uint64_t x);
std::uint64_t DeriveSeed(std::uint64_t seed,
                         std::initializer_list<std::uint64_t> path);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(SplitMix64(seed)) {}
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
      : engine_(DeriveSeed(seed, path)) {}

  // Uniform on [0, 1) with 53 random bits.  Not delegated to
  // std::uniform_real_distribution, whose output differs across standard
  // libraries.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }
  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n);
  // Index drawn from an (unnormalized is fine) probability vector.
  int Categorical(const std::vector<double>& probs);
  // Uniform point on the probability simplex with `dim` vertices.
  std::vector<double> SimplexPoint(int dim);

 private:
  std::mt19937_64 engine_;
};

}  // namespace satpath

#endif  // SATPATH_RNG_H_
