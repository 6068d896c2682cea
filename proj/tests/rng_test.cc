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

#include "diffee/rng.h"

#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"

namespace diffee {
namespace {

TEST_CASE("raw stream is the standard 64-bit Mersenne Twister") {
  // The standard fixes the 10000th output for the default seed.
  Rng rng(5489);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.NextU64();
  CHECK(x == 9981545732273789042ULL);
}

TEST_CASE("same seed, same stream") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.Normal();
    CHECK(x == b.Normal());
    differs |= x != c.Normal();
  }
  CHECK(differs);
}

TEST_CASE("uniform variates stay in range with the right moments") {
  Rng rng(1);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.Uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum_sq += u * u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sum_sq / n - (sum / n) * (sum / n) == doctest::Approx(1.0 / 12).epsilon(0.02));

  for (int i = 0; i < 1000; ++i) {
    const double u = rng.Uniform(-2.0, 5.0);
    REQUIRE(u >= -2.0);
    REQUIRE(u < 5.0);
  }
}

TEST_CASE("normal variates have mean 0 and variance 1") {
  Rng rng(2);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0, sum_4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.Normal();
    sum += z;
    sum_sq += z * z;
    sum_4 += z * z * z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sum_4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("uniform integers cover the range evenly") {
  Rng rng(3);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t k = rng.UniformInt(7);
    REQUIRE(k < 7);
    ++counts[k];
  }
  for (int c : counts) CHECK(std::abs(c - n / 7) < 400);
  CHECK(rng.UniformInt(1) == 0);
}

TEST_CASE("bernoulli rate") {
  Rng rng(4);
  int hits = 0;
  for (int i = 0; i < 100000; ++i) hits += rng.Bernoulli(0.1);
  CHECK(std::abs(hits - 10000) < 400);
  CHECK_FALSE(rng.Bernoulli(0.0));
}

TEST_CASE("derived seeds separate streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t parent : {0ULL, 1ULL, 2ULL, 1000ULL}) {
    for (const char* tag : {"truth", "x_c", "x_d", "graph", "values", "B_c", "B_d", "B_S"}) {
      seen.insert(DeriveSeed(parent, tag));
    }
  }
  CHECK(seen.size() == 32);
  CHECK(DeriveSeed(7, "x_c") == DeriveSeed(7, "x_c"));
}

TEST_CASE("splitmix reference values") {
  // First two SplitMix64 outputs from state 0.
  CHECK(MixBits(0) == 0xE220A8397B1DCDAFULL);
  CHECK(MixBits(0x9E3779B97F4A7C15ULL) == 0x6E789E6AA1B965F4ULL);
}

}  // namespace
}  // namespace diffee
