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

#include "dbam/run_config.hpp"

#include <set>

#include <json.hpp>

#include "dbam/error.hpp"

namespace dbam {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object())
    fail(ErrorCode::kConfig, "config: '" + where + "' must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!keys.count(key))
      fail(ErrorCode::kConfig, "config: unknown key '" +
                                   (where.empty() ? key : where + "." + key) +
                                   "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    if constexpr (std::is_unsigned_v<T>) {
      if (!it->is_number_unsigned()) throw std::invalid_argument("type");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!it->is_number()) throw std::invalid_argument("type");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) throw std::invalid_argument("type");
    }
    out = it->get<T>();
  } catch (const std::exception&) {
    fail(ErrorCode::kConfig, "config: key '" + where + "." + key +
                                 "' has the wrong type");
  }
}

template <typename T>
void read_list(const json& obj, const char* key, const std::string& where,
               std::vector<T>& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_array())
    fail(ErrorCode::kConfig,
         "config: key '" + where + "." + key + "' must be an array");
  std::vector<T> values;
  for (const auto& v : *it) {
    const bool ok = std::is_floating_point_v<T> ? v.is_number()
                                                : v.is_number_unsigned();
    if (!ok)
      fail(ErrorCode::kConfig,
           "config: key '" + where + "." + key + "' has a wrong element type");
    values.push_back(v.get<T>());
  }
  out = std::move(values);
}

}  // namespace

void RunConfig::validate() const {
  preprocess.validate();
  hdc_params().validate();
  dbam.validate();
  geometry.validate();
  cost_params().validate();
  if (k < 1) fail(ErrorCode::kConfig, "config: k must be at least 1");
  if (threads < 1) fail(ErrorCode::kConfig, "config: threads must be >= 1");
  if (synth) synth->validate(preprocess.num_bins());
  sweep.validate();
  if (sweep_trials < 1)
    fail(ErrorCode::kConfig, "config: sweep.trials must be at least 1");
}

HdcParams RunConfig::hdc_params() const {
  return {dimension, preprocess.num_bins(), preprocess.intensity_levels, seed};
}

CostParams RunConfig::cost_params() const {
  return {t_read_ns * 1e-9, e_read_pj * 1e-12, z_scale_k};
}

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kConfig, std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig c;
  reject_unknown(root, "",
                 {"hdc", "preprocess", "dbam", "geometry", "cost", "paths", "k",
                  "threads", "synth", "sweep"});

  if (root.contains("hdc")) {
    const auto& o = root["hdc"];
    reject_unknown(o, "hdc", {"dimension", "seed"});
    read(o, "dimension", "hdc", c.dimension);
    read(o, "seed", "hdc", c.seed);
  }
  if (root.contains("preprocess")) {
    const auto& o = root["preprocess"];
    reject_unknown(o, "preprocess",
                   {"mz_min", "mz_max", "bin_width", "max_peaks",
                    "min_intensity_frac", "intensity_levels"});
    auto& p = c.preprocess;
    read(o, "mz_min", "preprocess", p.mz_min);
    read(o, "mz_max", "preprocess", p.mz_max);
    read(o, "bin_width", "preprocess", p.bin_width);
    read(o, "max_peaks", "preprocess", p.max_peaks);
    read(o, "min_intensity_frac", "preprocess", p.min_intensity_frac);
    read(o, "intensity_levels", "preprocess", p.intensity_levels);
  }
  if (root.contains("dbam")) {
    const auto& o = root["dbam"];
    reject_unknown(o, "dbam", {"alpha_pos", "alpha_neg", "m", "pf", "noise"});
    read(o, "alpha_pos", "dbam", c.dbam.alpha_pos);
    read(o, "alpha_neg", "dbam", c.dbam.alpha_neg);
    read(o, "m", "dbam", c.dbam.m);
    read(o, "pf", "dbam", c.dbam.pf);
    if (o.contains("noise") && !o["noise"].is_null()) {
      const auto& n = o["noise"];
      reject_unknown(n, "dbam.noise", {"sigma_vt", "memory_window", "seed"});
      NoiseModel nm;
      read(n, "sigma_vt", "dbam.noise", nm.sigma_vt);
      read(n, "memory_window", "dbam.noise", nm.memory_window);
      read(n, "seed", "dbam.noise", nm.seed);
      c.dbam.noise = nm;
    }
  }
  if (root.contains("geometry")) {
    const auto& o = root["geometry"];
    reject_unknown(o, "geometry", {"wordlines", "bitlines", "blocks", "planes"});
    read(o, "wordlines", "geometry", c.geometry.wordlines);
    read(o, "bitlines", "geometry", c.geometry.bitlines);
    read(o, "blocks", "geometry", c.geometry.blocks);
    read(o, "planes", "geometry", c.geometry.planes);
  }
  if (root.contains("cost")) {
    const auto& o = root["cost"];
    reject_unknown(o, "cost", {"t_read_ns", "e_read_pj", "z_scale_k"});
    read(o, "t_read_ns", "cost", c.t_read_ns);
    read(o, "e_read_pj", "cost", c.e_read_pj);
    read(o, "z_scale_k", "cost", c.z_scale_k);
  }
  if (root.contains("paths")) {
    const auto& o = root["paths"];
    reject_unknown(o, "paths", {"mgf", "queries", "library", "raw", "out"});
    read(o, "mgf", "paths", c.paths.mgf);
    read(o, "queries", "paths", c.paths.queries);
    read(o, "library", "paths", c.paths.library);
    read(o, "raw", "paths", c.paths.raw);
    read(o, "out", "paths", c.paths.out);
  }
  read(root, "k", "", c.k);
  read(root, "threads", "", c.threads);
  if (root.contains("synth") && !root["synth"].is_null()) {
    const auto& o = root["synth"];
    reject_unknown(o, "synth",
                   {"library_size", "num_queries", "peaks", "drop_rate",
                    "add_rate", "jitter_rate", "jitter_max"});
    SynthParams s;
    read(o, "library_size", "synth", s.library_size);
    read(o, "num_queries", "synth", s.num_queries);
    read(o, "peaks", "synth", s.peaks);
    read(o, "drop_rate", "synth", s.drop_rate);
    read(o, "add_rate", "synth", s.add_rate);
    read(o, "jitter_rate", "synth", s.jitter_rate);
    read(o, "jitter_max", "synth", s.jitter_max);
    c.synth = s;
  }
  if (root.contains("sweep")) {
    const auto& o = root["sweep"];
    reject_unknown(o, "sweep", {"alphas", "ms", "pfs", "trials"});
    read_list(o, "alphas", "sweep", c.sweep.alphas);
    read_list(o, "ms", "sweep", c.sweep.ms);
    read_list(o, "pfs", "sweep", c.sweep.pfs);
    read(o, "trials", "sweep", c.sweep_trials);
  }
  c.validate();
  return c;
}

std::string dump_run_config(const RunConfig& c) {
  json noise = nullptr;
  if (c.dbam.noise)
    noise = {{"sigma_vt", c.dbam.noise->sigma_vt},
             {"memory_window", c.dbam.noise->memory_window},
             {"seed", c.dbam.noise->seed}};
  json synth = nullptr;
  if (c.synth)
    synth = {{"library_size", c.synth->library_size},
             {"num_queries", c.synth->num_queries},
             {"peaks", c.synth->peaks},
             {"drop_rate", c.synth->drop_rate},
             {"add_rate", c.synth->add_rate},
             {"jitter_rate", c.synth->jitter_rate},
             {"jitter_max", c.synth->jitter_max}};
  const json root = {
      {"hdc", {{"dimension", c.dimension}, {"seed", c.seed}}},
      {"preprocess",
       {{"mz_min", c.preprocess.mz_min},
        {"mz_max", c.preprocess.mz_max},
        {"bin_width", c.preprocess.bin_width},
        {"max_peaks", c.preprocess.max_peaks},
        {"min_intensity_frac", c.preprocess.min_intensity_frac},
        {"intensity_levels", c.preprocess.intensity_levels}}},
      {"dbam",
       {{"alpha_pos", c.dbam.alpha_pos},
        {"alpha_neg", c.dbam.alpha_neg},
        {"m", c.dbam.m},
        {"pf", c.dbam.pf},
        {"noise", noise}}},
      {"geometry",
       {{"wordlines", c.geometry.wordlines},
        {"bitlines", c.geometry.bitlines},
        {"blocks", c.geometry.blocks},
        {"planes", c.geometry.planes}}},
      {"cost",
       {{"t_read_ns", c.t_read_ns},
        {"e_read_pj", c.e_read_pj},
        {"z_scale_k", c.z_scale_k}}},
      {"paths",
       {{"mgf", c.paths.mgf},
        {"queries", c.paths.queries},
        {"library", c.paths.library},
        {"raw", c.paths.raw},
        {"out", c.paths.out}}},
      {"k", c.k},
      {"threads", c.threads},
      {"synth", synth},
      {"sweep",
       {{"alphas", c.sweep.alphas},
        {"ms", c.sweep.ms},
        {"pfs", c.sweep.pfs},
        {"trials", c.sweep_trials}}}};
  return root.dump(2) + "\n";
}

}  // namespace dbam
