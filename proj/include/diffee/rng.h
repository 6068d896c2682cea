// Copyright 2026 The DIFFEE Authors.
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

#ifndef DIFFEE_RNG_H_
#define DIFFEE_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace diffee {

// Portable seeded generator. The raw stream is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; the variates below are derived
// in-house because the standard distributions are implementation-defined.
// A given seed therefore yields the same numbers on every conforming
// platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer on [0, bound), rejection-sampled so it is unbiased.
  std::uint64_t UniformInt(std::uint64_t bound);

  bool Bernoulli(double probability) { return Uniform() < probability; }

  // Standard normal via the Marsaglia polar method.
  double Normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// One SplitMix64 step: advances state x by the golden gamma and mixes.
std::uint64_t MixBits(std::uint64_t x);

// Child seed for a named sub-stream: MixBits over the parent seed combined
// with an FNV-1a hash of `stream`. Each generated matrix and each sampled
// condition draws from its own child seed, e.g. DeriveSeed(seed, "x_c").
std::uint64_t DeriveSeed(std::uint64_t parent, std::string_view stream);

}  // namespace diffee

#endif  // DIFFEE_RNG_H_
