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
#include <string>

#include "dbam/dbam_engine.hpp"
#include "dbam/fenand_array.hpp"
#include "dbam/hdc.hpp"
#include "dbam/spectra_io.hpp"
#include "dbam/sweep.hpp"
#include "dbam/synth.hpp"

namespace dbam {

struct PathsConfig {
  std::string mgf;
  std::string queries;
  std::string library;
  std::string raw;
  std::string out;
  friend bool operator==(const PathsConfig&, const PathsConfig&) = default;
};

/// Everything a CLI run needs. The ID and level counts of the encoder come
/// from the preprocessing block (number of bins, intensity levels).
struct RunConfig {
  std::uint32_t dimension = 8192;
  std::uint64_t seed = 42;
  PreprocessConfig preprocess;
  DbamConfig dbam;
  ArrayGeometry geometry;
  double t_read_ns = 25.0;
  double e_read_pj = 1.0;
  double z_scale_k = 4.0;
  PathsConfig paths;
  std::size_t k = 10;
  unsigned threads = 1;
  std::optional<SynthParams> synth;
  SweepGrid sweep;
  std::size_t sweep_trials = 1;

  void validate() const;
  HdcParams hdc_params() const;
  CostParams cost_params() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Strict parse: unknown keys and wrong types raise Error(kConfig) naming
/// the offending key. Missing keys keep their defaults.
RunConfig parse_run_config(const std::string& json_text);

/// Full config with every key present; parses back to an equal RunConfig.
std::string dump_run_config(const RunConfig& cfg);

}  // namespace dbam
