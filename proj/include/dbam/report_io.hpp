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

#include <span>
#include <string>

#include "dbam/search.hpp"
#include "dbam/sweep.hpp"

namespace dbam {

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

/// Columns: query_id, rank, reference_id, score, oracle_similarity. When
/// any report carries oracle results a trailing oracle_top1_agree column is
/// added.
std::string reports_to_csv(std::span<const SearchReport> reports);
std::string reports_to_json(std::span<const SearchReport> reports);

std::string sweep_to_csv(std::span<const SweepRow> rows);

/// Per packing factor, an alphas x ms matrix of recall@1 and
/// identification counts.
std::string sweep_heatmap_json(std::span<const SweepRow> rows,
                               const SweepGrid& grid);

/// Shortest round-trip decimal form of `v`.
std::string format_double(double v);

}  // namespace dbam
