/*
 * Copyright 2026 The dbamsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Counter-based random streams. Every draw is a pure function of
// (seed, stream key, counter), so generation order and thread count never
// affect results.

#include <cstdint>
#include <string_view>

namespace dbam {

std::uint64_t mix64(std::uint64_t x) noexcept;

/// FNV-1a over the bytes of `s`.
std::uint64_t hash_string(std::string_view s) noexcept;

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::string_view purpose,
             std::uint64_t index = 0) noexcept;

  std::uint64_t bits(std::uint64_t counter) const noexcept;

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform(std::uint64_t counter) const noexcept;

  /// Standard normal via Box-Muller on two derived uniforms.
  double gaussian(std::uint64_t counter) const noexcept;

 private:
  std::uint64_t key_;
};

/// Sequential splitmix64 engine for procedures that naturally consume a
/// stream (shuffles, synthetic data). Bounded draws use rejection so the
/// output is identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;
  std::uint64_t below(std::uint64_t bound) noexcept;
  double uniform() noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace dbam
