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

#include "dbam/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dbam/error.hpp"

namespace dbam {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

nlohmann::json counters_json(const OpCounters& c) {
  return {{"sensing_reads", c.sensing_reads},
          {"wordline_activations", c.wordline_activations},
          {"subsets_evaluated", c.subsets_evaluated}};
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIo, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) fail(ErrorCode::kIo, "failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::kIo, "cannot move output into place at '" + path + "'");
  }
}

std::string reports_to_csv(std::span<const SearchReport> reports) {
  bool oracle = false;
  for (const auto& r : reports) oracle |= r.oracle_ranked.has_value();

  std::ostringstream out;
  out << "query_id,rank,reference_id,score,oracle_similarity";
  if (oracle) out << ",oracle_top1_agree";
  out << '\n';
  for (const auto& r : reports) {
    bool agree = false;
    if (r.oracle_ranked && !r.oracle_ranked->empty() && !r.ranked.empty())
      agree = r.oracle_ranked->front().id == r.ranked.front().id;
    for (std::size_t i = 0; i < r.ranked.size(); ++i) {
      const auto& hit = r.ranked[i];
      out << csv_field(r.query_id) << ',' << (i + 1) << ','
          << csv_field(hit.id) << ',' << hit.score << ',';
      if (hit.oracle_similarity) out << *hit.oracle_similarity;
      if (oracle) out << ',' << (r.oracle_ranked ? (agree ? "1" : "0") : "");
      out << '\n';
    }
  }
  return out.str();
}

std::string reports_to_json(std::span<const SearchReport> reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json ranked = nlohmann::json::array();
    for (const auto& h : r.ranked) {
      nlohmann::json hit = {{"id", h.id}, {"score", h.score}};
      if (h.oracle_similarity) hit["oracle_similarity"] = *h.oracle_similarity;
      ranked.push_back(std::move(hit));
    }
    nlohmann::json obj = {{"query_id", r.query_id},
                          {"k", r.k},
                          {"ranked", std::move(ranked)},
                          {"counters", counters_json(r.counters)}};
    if (r.oracle_ranked) {
      nlohmann::json oracle = nlohmann::json::array();
      for (const auto& h : *r.oracle_ranked)
        oracle.push_back({{"id", h.id}, {"similarity", h.similarity}});
      obj["oracle_ranked"] = std::move(oracle);
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string sweep_to_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "pf,alpha,m,recall_at_1,recall_at_k,identification_count,"
         "total_queries,dbam_reads,mlc_reads,read_ratio,speedup\n";
  for (const auto& r : rows) {
    out << r.pf << ',' << format_double(r.alpha) << ',' << r.m << ','
        << format_double(r.recall_at_1) << ',' << format_double(r.recall_at_k)
        << ',' << r.identification_count << ',' << r.total_queries << ','
        << r.dbam_reads << ',' << r.mlc_reads << ','
        << format_double(r.read_ratio) << ',' << format_double(r.speedup)
        << '\n';
  }
  return out.str();
}

std::string sweep_heatmap_json(std::span<const SweepRow> rows,
                               const SweepGrid& grid) {
  nlohmann::json panels = nlohmann::json::array();
  for (auto pf : grid.pfs) {
    nlohmann::json recall = nlohmann::json::array();
    nlohmann::json idents = nlohmann::json::array();
    for (double a : grid.alphas) {
      nlohmann::json rrow = nlohmann::json::array();
      nlohmann::json irow = nlohmann::json::array();
      for (auto m : grid.ms) {
        for (const auto& r : rows) {
          if (r.pf == pf && r.alpha == a && r.m == m) {
            rrow.push_back(r.recall_at_1);
            irow.push_back(r.identification_count);
            break;
          }
        }
      }
      recall.push_back(std::move(rrow));
      idents.push_back(std::move(irow));
    }
    panels.push_back({{"pf", pf},
                      {"speedup", [&] {
                         nlohmann::json s = nlohmann::json::array();
                         for (auto m : grid.ms) s.push_back(speedup(m, pf));
                         return s;
                       }()},
                      {"recall_at_1", std::move(recall)},
                      {"identification_count", std::move(idents)}});
  }
  nlohmann::json doc = {{"alphas", grid.alphas},
                        {"ms", grid.ms},
                        {"panels", std::move(panels)}};
  return doc.dump(2) + "\n";
}

}  // namespace dbam
