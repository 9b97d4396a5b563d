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
#include <vector>

namespace dbam {

struct ArrayGeometry {
  std::uint32_t wordlines = 32;  // cells per vertical string
  std::uint32_t bitlines = 5462; // strings per block
  std::uint32_t blocks = 128;    // per plane
  std::uint32_t planes = 23;

  void validate() const;
  std::uint64_t total_strings() const noexcept {
    return std::uint64_t{planes} * blocks * bitlines;
  }
  friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;
};

struct StringAddress {
  std::uint32_t plane = 0;
  std::uint32_t block = 0;
  std::uint32_t bitline = 0;

  friend auto operator<=>(const StringAddress&, const StringAddress&) = default;
};

/// Placement of folded reference vectors onto vertical strings.
class ArrayLayout {
 public:
  ArrayLayout(ArrayGeometry g, std::size_t references, std::size_t folds_per_hv,
              std::vector<StringAddress> assignment)
      : geometry_(g),
        references_(references),
        folds_per_hv_(folds_per_hv),
        assignment_(std::move(assignment)) {}

  const ArrayGeometry& geometry() const noexcept { return geometry_; }
  std::size_t references() const noexcept { return references_; }
  std::size_t folds_per_hv() const noexcept { return folds_per_hv_; }
  std::size_t strings_used() const noexcept { return assignment_.size(); }

  const StringAddress& at(std::size_t reference, std::size_t fold) const {
    return assignment_.at(reference * folds_per_hv_ + fold);
  }

 private:
  ArrayGeometry geometry_;
  std::size_t references_;
  std::size_t folds_per_hv_;
  std::vector<StringAddress> assignment_;
};

std::size_t folds_per_hv(std::size_t packed_length, std::uint32_t wordlines);

/// Round-robin placement: fold f of reference r targets block
/// f mod blocks in plane r mod planes, taking the next free bitline. A full
/// target block spills to the next block with room, then the next plane.
/// Throws CapacityError when the library needs more strings than exist.
ArrayLayout map_library(std::size_t references, std::size_t packed_length,
                        const ArrayGeometry& g);

struct OpCounters {
  std::uint64_t sensing_reads = 0;
  std::uint64_t wordline_activations = 0;
  std::uint64_t subsets_evaluated = 0;

  OpCounters& operator+=(const OpCounters& o) noexcept {
    sensing_reads += o.sensing_reads;
    wordline_activations += o.wordline_activations;
    subsets_evaluated += o.subsets_evaluated;
    return *this;
  }
  OpCounters scaled(std::uint64_t k) const noexcept {
    return {sensing_reads * k, wordline_activations * k, subsets_evaluated * k};
  }
  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

/// Per-reference D-BAM sensing: one UBC and one LBC read per m-subset.
OpCounters count_ops_dbam(std::uint64_t dimension, std::uint32_t pf,
                          std::uint32_t m);

/// Per-reference conventional MLC read-out: 2^pf - 1 sensing steps per
/// cell row.
OpCounters count_ops_mlc_baseline(std::uint64_t dimension, std::uint32_t pf);

/// Closed-form read-count ratio m (2^pf - 1) / 2.
double speedup(std::uint32_t m, std::uint32_t pf);

struct CostParams {
  double t_read = 25e-9;   // seconds per sensing read
  double e_read = 1e-12;   // joules per sensing read
  double z_scale_k = 4.0;  // reported only

  void validate() const;
  friend bool operator==(const CostParams&, const CostParams&) = default;
};

struct CostEstimate {
  double latency = 0.0;  // seconds
  double energy = 0.0;   // joules
};

/// `per_reference` holds the counters for scoring one reference. Strings
/// sense concurrently; references beyond `parallel_strings` serialize.
CostEstimate cost_report(const OpCounters& per_reference, const CostParams& p,
                         std::uint64_t references,
                         std::uint64_t parallel_strings);

}  // namespace dbam
