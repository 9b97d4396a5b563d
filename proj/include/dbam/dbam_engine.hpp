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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dbam/packing.hpp"

namespace dbam {

/// Gaussian threshold-voltage variation on stored reference cells.
struct NoiseModel {
  double sigma_vt = 0.2;       // volts
  double memory_window = 6.5;  // volts
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

struct DbamConfig {
  double alpha_pos = 1.5;  // level units
  double alpha_neg = 1.5;
  std::uint32_t m = 4;     // wordlines sensed together
  std::uint32_t pf = 3;
  std::optional<NoiseModel> noise;

  void validate() const;
  friend bool operator==(const DbamConfig&, const DbamConfig&) = default;
};

struct ScoreResult {
  std::uint64_t score = 0;
  std::uint64_t ubc_passes = 0;
  std::uint64_t lbc_passes = 0;
  std::uint64_t num_subsets = 0;
};

/// Uniform spacing of the pf + 1 levels across the memory window.
double level_to_voltage(int level, std::uint32_t pf, double memory_window);

std::size_t num_subsets(std::size_t length, std::uint32_t m);

/// Serial-string upper-bound check: 1 iff every r_i <= q_i + alpha_pos.
bool ubc_subset(std::span<const std::uint8_t> q,
                std::span<const std::uint8_t> r, double alpha_pos);

/// Lower-bound check: 0 iff every r_i < q_i - alpha_neg.
bool lbc_subset(std::span<const std::uint8_t> q,
                std::span<const std::uint8_t> r, double alpha_neg);

/// Query-side bounds prepared once and reused against every reference.
/// Noiseless bounds are exact integer thresholds; with noise the bounds are
/// wordline voltages.
class QueryBounds {
 public:
  QueryBounds(const PackedVector& q, const DbamConfig& cfg);

  std::size_t length() const noexcept { return length_; }
  std::uint32_t pf() const noexcept { return pf_; }
  const DbamConfig& config() const noexcept { return cfg_; }

  /// `reference_key` selects the noise stream of the stored vector; it is
  /// ignored for noiseless configurations.
  ScoreResult score(const PackedVector& r, std::uint64_t reference_key) const;

 private:
  ScoreResult score_exact(const PackedVector& r) const;
  ScoreResult score_noisy(const PackedVector& r, std::uint64_t key) const;

  DbamConfig cfg_;
  std::uint32_t pf_;
  std::size_t length_;
  std::vector<std::int16_t> upper_;  // pass iff r <= upper
  std::vector<std::int16_t> lower_;  // pass iff r >= lower
  std::vector<double> upper_v_;
  std::vector<double> lower_v_;
};

ScoreResult score(const PackedVector& q, const PackedVector& r,
                  const DbamConfig& cfg, std::uint64_t reference_key = 0);

/// Stored-cell voltage of element `index` after variation, clamped to the
/// memory window.
double noisy_cell_voltage(std::uint8_t level, std::uint32_t pf,
                          const NoiseModel& noise, std::uint64_t reference_key,
                          std::size_t index);

}  // namespace dbam
