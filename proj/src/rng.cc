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

#include "satpath/rng.h"

#include <cmath>

namespace satpath {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t seed,
                         std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = SplitMix64(seed);
  for (std::uint64_t key : path) h = SplitMix64(SplitMix64(h + 0x632be59bd9b4e019ULL) ^ key);
  return h;
}

std::uint64_t Rng::Below(std::uint64_t n) {
  // Rejection sampling keeps the draw unbiased for any n.
  const std::uint64_t limit = ~0ULL - (~0ULL % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

int Rng::Categorical(const std::vector<double>& probs) {
  double total = 0.0;
  for (double p : probs) total += p;
  double u = Uniform01() * total;
  int last_positive = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    last_positive = static_cast<int>(k);
    if (u < probs[k]) return last_positive;
    u -= probs[k];
  }
  return last_positive;
}

std::vector<double> Rng::SimplexPoint(int dim) {
  // Normalized exponential spacings give the uniform (flat Dirichlet) law.
  std::vector<double> x(dim);
  double sum = 0.0;
  for (double& v : x) {
    v = -std::log(1.0 - Uniform01());
    sum += v;
  }
  for (double& v : x) v /= sum;
  return x;
}

}  // namespace satpath
