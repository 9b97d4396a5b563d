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

#include "dbam/dbam_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dbam/error.hpp"
#include "dbam/rng.hpp"

namespace dbam {

void NoiseModel::validate() const {
  if (!(sigma_vt >= 0.0))
    fail(ErrorCode::kConfig, "noise: sigma_vt must be non-negative");
  if (!(memory_window > 0.0))
    fail(ErrorCode::kConfig, "noise: memory_window must be positive");
}

void DbamConfig::validate() const {
  if (!(alpha_pos >= 0.0) || !(alpha_neg >= 0.0))
    fail(ErrorCode::kConfig, "dbam: alpha must be non-negative");
  if (m < 1) fail(ErrorCode::kConfig, "dbam: m must be at least 1");
  if (pf < 1 || pf > kMaxPackingFactor)
    fail(ErrorCode::kConfig, "dbam: packing factor out of range");
  if (noise) noise->validate();
}

double level_to_voltage(int level, std::uint32_t pf, double memory_window) {
  require(pf >= 1, "packing factor must be at least 1");
  if (level < 0 || level > static_cast<int>(pf))
    fail(ErrorCode::kInvalidArgument,
         "level " + std::to_string(level) + " outside [0, " +
             std::to_string(pf) + "]");
  return static_cast<double>(level) * memory_window / pf;
}

std::size_t num_subsets(std::size_t length, std::uint32_t m) {
  require(m >= 1, "m must be at least 1");
  return (length + m - 1) / m;
}

bool ubc_subset(std::span<const std::uint8_t> q,
                std::span<const std::uint8_t> r, double alpha_pos) {
  require(q.size() == r.size(), "UBC subset length mismatch");
  for (std::size_t i = 0; i < q.size(); ++i)
    if (!(r[i] <= q[i] + alpha_pos)) return false;
  return true;
}

bool lbc_subset(std::span<const std::uint8_t> q,
                std::span<const std::uint8_t> r, double alpha_neg) {
  require(q.size() == r.size(), "LBC subset length mismatch");
  for (std::size_t i = 0; i < q.size(); ++i)
    if (!(r[i] < q[i] - alpha_neg)) return true;
  return false;
}

namespace {

double cell_voltage(std::uint8_t level, std::uint32_t pf,
                    const NoiseModel& noise, const CounterRng& rng,
                    std::size_t index) {
  const double v = level * noise.memory_window / pf +
                   noise.sigma_vt * rng.gaussian(index);
  return std::clamp(v, 0.0, noise.memory_window);
}


// Integer equivalent of a real tolerance; anything above the largest level
// span behaves identically.
std::int16_t alpha_floor(double alpha) {
  return static_cast<std::int16_t>(std::min(std::floor(alpha), 1024.0));
}
}  // namespace

double noisy_cell_voltage(std::uint8_t level, std::uint32_t pf,
                          const NoiseModel& noise, std::uint64_t reference_key,
                          std::size_t index) {
  return cell_voltage(level, pf, noise,
                      CounterRng(noise.seed, "vt-noise", reference_key), index);
}

QueryBounds::QueryBounds(const PackedVector& q, const DbamConfig& cfg)
    : cfg_(cfg), pf_(q.pf), length_(q.levels.size()) {
  cfg.validate();
  if (cfg.pf != q.pf)
    fail(ErrorCode::kMismatch,
         "query packed with pf " + std::to_string(q.pf) +
             " but configuration uses pf " + std::to_string(cfg.pf));
  if (cfg.noise) {
    const double scale = cfg.noise->memory_window / pf_;
    upper_v_.resize(length_);
    lower_v_.resize(length_);
    for (std::size_t i = 0; i < length_; ++i) {
      upper_v_[i] = (q.levels[i] + cfg.alpha_pos) * scale;
      lower_v_[i] = (q.levels[i] - cfg.alpha_neg) * scale;
    }
  } else {
    // r <= q + a  <=>  r <= q + floor(a);  r < q - a  <=>  r < q - floor(a)
    const auto up = alpha_floor(cfg.alpha_pos);
    const auto down = alpha_floor(cfg.alpha_neg);
    upper_.resize(length_);
    lower_.resize(length_);
    for (std::size_t i = 0; i < length_; ++i) {
      upper_[i] = static_cast<std::int16_t>(q.levels[i] + up);
      lower_[i] = static_cast<std::int16_t>(q.levels[i] - down);
    }
  }
}

ScoreResult QueryBounds::score(const PackedVector& r,
                               std::uint64_t reference_key) const {
  if (r.pf != pf_ || r.levels.size() != length_)
    fail(ErrorCode::kMismatch,
         "reference (pf " + std::to_string(r.pf) + ", length " +
             std::to_string(r.levels.size()) + ") does not match query (pf " +
             std::to_string(pf_) + ", length " + std::to_string(length_) +
             ")");
  return cfg_.noise ? score_noisy(r, reference_key) : score_exact(r);
}

ScoreResult QueryBounds::score_exact(const PackedVector& r) const {
  ScoreResult res;
  res.num_subsets = num_subsets(length_, cfg_.m);
  const std::uint8_t* rv = r.levels.data();
  const std::int16_t* up = upper_.data();
  const std::int16_t* lo = lower_.data();

  if (cfg_.m == 1) {
    std::uint64_t ubc = 0;
    std::uint64_t lbc = 0;
    for (std::size_t i = 0; i < length_; ++i) {
      ubc += rv[i] <= up[i];
      lbc += rv[i] >= lo[i];
    }
    res.ubc_passes = ubc;
    res.lbc_passes = lbc;
  } else {
    for (std::size_t start = 0; start < length_; start += cfg_.m) {
      const std::size_t end = std::min(length_, start + cfg_.m);
      bool all_below = true;
      bool any_above = false;
      for (std::size_t i = start; i < end; ++i) {
        all_below &= rv[i] <= up[i];
        any_above |= rv[i] >= lo[i];
      }
      res.ubc_passes += all_below;
      res.lbc_passes += any_above;
    }
  }
  res.score = res.ubc_passes + res.lbc_passes;
  return res;
}

ScoreResult QueryBounds::score_noisy(const PackedVector& r,
                                     std::uint64_t key) const {
  ScoreResult res;
  res.num_subsets = num_subsets(length_, cfg_.m);
  const NoiseModel& noise = *cfg_.noise;
  const CounterRng rng(noise.seed, "vt-noise", key);
  for (std::size_t start = 0; start < length_; start += cfg_.m) {
    const std::size_t end = std::min(length_, start + cfg_.m);
    bool all_below = true;
    bool any_above = false;
    for (std::size_t i = start; i < end; ++i) {
      const double v = cell_voltage(r.levels[i], pf_, noise, rng, i);
      all_below &= v <= upper_v_[i];
      any_above |= !(v < lower_v_[i]);
    }
    res.ubc_passes += all_below;
    res.lbc_passes += any_above;
  }
  res.score = res.ubc_passes + res.lbc_passes;
  return res;
}

ScoreResult score(const PackedVector& q, const PackedVector& r,
                  const DbamConfig& cfg, std::uint64_t reference_key) {
  return QueryBounds(q, cfg).score(r, reference_key);
}

}  // namespace dbam
