// Copyright 2026 The loccn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "loccn/linalg.hpp"

namespace loccn {

// Seeded substreams: stream (seed, index) is derived by splitmix64 mixing so
// per-sample streams are independent of iteration order and thread count.
// Variates are generated by hand from raw 64-bit draws; distribution results
// are therefore identical across standard library implementations.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t index) : engine_(mix(seed, index)) {}

  explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}

  /// Uniform on [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Complex cnormal() { return Complex(normal(), normal()); }

  /// Uniform in the solid ball of the given radius: Gaussian direction times
  /// cbrt of a uniform radius variate.
  BlochVec ball(double radius) {
    BlochVec dir{normal(), normal(), normal()};
    double n = dir.norm();
    while (n <= 1e-12) {
      dir = {normal(), normal(), normal()};
      n = dir.norm();
    }
    const double r = radius * std::cbrt(uniform01());
    return dir * (r / n);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace loccn
