// Copyright 2026 The VoiceBench Authors
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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "benchmark.hpp"
#include "error.hpp"

namespace voicebench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::optional<json> read_json_if_present(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::Format, path.string() + ": " + e.what());
  }
  return j;
}

std::string fmt3(double v) {
  char buf[32];
  snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string fmt_p(double p) {
  char buf[32];
  snprintf(buf, sizeof buf, "%.2e", p);
  return buf;
}

const char* kMetricKeys[] = {"balanced_accuracy", "sensitivity", "specificity", "auroc"};
const char* kMetricLabels[] = {"Balanced Accuracy", "Sensitivity", "Specificity", "AUROC"};

struct CellFiles {
  std::string model_id;
  bool ok = false;
  std::string error;
  std::map<std::string, json> metrics;  // test set -> metrics json
  std::optional<json> fairness;
  std::optional<std::string> timing_summary;
};

}  // namespace

std::string render_report(const std::string& run_dir) {
  const fs::path dir(run_dir);
  const auto summary = read_json_if_present(dir / "run_summary.json");
  if (!summary) fail(ErrorCode::Io, run_dir + ": no run_summary.json (not a benchmark run dir?)");

  std::vector<std::string> test_sets;
  for (const auto& s : summary->at("test_sets")) test_sets.push_back(s.get<std::string>());

  const json& config = summary->at("config");
  std::vector<std::string> algorithms, features, variants;
  for (const auto& a : config.at("algorithms")) algorithms.push_back(a.get<std::string>());
  for (const auto& f : config.at("feature_sets")) features.push_back(f.get<std::string>());
  for (const auto& v : config.at("variants")) variants.push_back(v.get<std::string>());

  // Load every cell's files.
  std::map<std::string, CellFiles> cells;
  for (const auto& cj : summary->at("cells")) {
    CellFiles cell;
    cell.model_id = cj.at("model_id").get<std::string>();
    cell.ok = cj.at("ok").get<bool>();
    if (cj.contains("error")) cell.error = cj.at("error").get<std::string>();
    const fs::path cell_dir = dir / "cells" / cell.model_id;
    for (const auto& set : test_sets) {
      if (auto m = read_json_if_present(cell_dir / ("metrics_" + set + ".json"))) {
        cell.metrics[set] = *m;
      }
    }
    cell.fairness = read_json_if_present(cell_dir / "fairness_holdout.json");
    {
      std::ifstream timing(cell_dir / "timing.csv");
      if (timing) {
        std::ostringstream lines;
        std::string line;
        while (std::getline(timing, line)) {
          if (line.rfind("# summary", 0) == 0 || line.rfind("# cpu", 0) == 0) lines << line << '\n';
        }
        cell.timing_summary = lines.str();
      }
    }
    cells[cell.model_id] = std::move(cell);
  }

  std::ostringstream out;
  out << "# Benchmark report\n\n";
  out << "- cells: " << cells.size() << " (" << algorithms.size() << " algorithms x "
      << features.size() << " feature sets x " << variants.size() << " input variants)\n";
  out << "- test sets: ";
  for (size_t i = 0; i < test_sets.size(); ++i) out << (i ? ", " : "") << test_sets[i];
  out << "\n- seed: " << config.at("seed") << "\n";
  out << "- scoring: balanced accuracy, 5-fold stratified CV grid search\n";
  out << "- confidence intervals: percentile bootstrap, "
      << config.at("bootstrap_resamples").get<int>() << " resamples\n\n";

  if (summary->contains("deviation_notes")) {
    out << "Notes:\n";
    for (const auto& note : summary->at("deviation_notes")) {
      out << "- " << note.get<std::string>() << "\n";
    }
    out << "\n";
  }

  // ---- Metric tables -------------------------------------------------------
  for (const auto& set : test_sets) {
    out << "## Classification metrics: " << set << "\n\n";

    // Best point value per metric across the whole test set (emphasized).
    std::map<std::string, double> best;
    for (const char* key : kMetricKeys) best[key] = -1.0;
    for (const auto& [id, cell] : cells) {
      const auto it = cell.metrics.find(set);
      if (it == cell.metrics.end()) continue;
      for (const char* key : kMetricKeys) {
        best[key] = std::max(best[key], it->second.at(key).at("point").get<double>());
      }
    }

    out << "| Algorithm | Inputs | Metric |";
    for (const auto& f : features) out << ' ' << f << " |";
    out << "\n|---|---|---|";
    for (size_t i = 0; i < features.size(); ++i) out << "---|";
    out << "\n";

    for (const auto& a : algorithms) {
      for (const auto& v : variants) {
        for (size_t mi = 0; mi < 4; ++mi) {
          out << "| " << a << " | ";
          std::string vv = v;
          for (auto& c : vv) {
            if (c == '_') c = '+';
          }
          out << vv << " | " << kMetricLabels[mi] << " |";
          for (const auto& f : features) {
            const std::string id = a + "_" + f + "_" + v;
            const auto cell_it = cells.find(id);
            if (cell_it == cells.end() || !cell_it->second.metrics.count(set)) {
              // Missing cell: blank with a status marker.
              out << (cell_it != cells.end() && !cell_it->second.ok ? " (failed) |" : "  |");
              continue;
            }
            const json& m = cell_it->second.metrics.at(set).at(kMetricKeys[mi]);
            const double point = m.at("point").get<double>();
            std::string text = fmt3(point) + "<br>(" + fmt3(m.at("ci_low").get<double>()) + ", " +
                               fmt3(m.at("ci_high").get<double>()) + ")";
            if (point == best[kMetricKeys[mi]]) text = "**" + fmt3(point) + "**<br>(" +
                                                       fmt3(m.at("ci_low").get<double>()) + ", " +
                                                       fmt3(m.at("ci_high").get<double>()) + ")";
            out << ' ' << text << " |";
          }
          out << "\n";
        }
      }
    }
    out << "\n";
  }

  // ---- Fairness tables -------------------------------------------------------
  auto fairness_table = [&](const char* title, const char* group, const char* test_key,
                            const char* inner) {
    out << "## " << title << "\n\n| Algorithm | Inputs |";
    for (const auto& f : features) out << ' ' << f << " |";
    out << "\n|---|---|";
    for (size_t i = 0; i < features.size(); ++i) out << "---|";
    out << "\n";
    for (const auto& a : algorithms) {
      for (const auto& v : variants) {
        out << "| " << a << " | ";
        std::string vv = v;
        for (auto& c : vv) {
          if (c == '_') c = '+';
        }
        out << vv << " |";
        for (const auto& f : features) {
          const std::string id = a + "_" + f + "_" + v;
          const auto cell_it = cells.find(id);
          if (cell_it == cells.end() || !cell_it->second.fairness) {
            out << "  |";
            continue;
          }
          const json& t = cell_it->second.fairness->at(group).at(test_key);
          if (!t.at("computable").get<bool>()) {
            out << " n/a |";
          } else {
            out << ' ' << fmt_p(t.at(inner).get<double>()) << " |";
          }
        }
        out << "\n";
      }
    }
    out << "\n";
  };
  fairness_table("Fairness: gender vs correctness (Fisher exact p, holdout)", "gender", "fisher",
                 "p_value");
  fairness_table("Fairness: age vs correctness (Welch t-test p, holdout)", "age", "welch_t",
                 "p_value");

  // ---- Timing -----------------------------------------------------------------
  bool any_timing = false;
  for (const auto& [id, cell] : cells) {
    if (cell.timing_summary && !cell.timing_summary->empty()) {
      if (!any_timing) {
        out << "## Prediction timing (per-file medians)\n\n";
        any_timing = true;
      }
      out << "### " << id << "\n```\n" << *cell.timing_summary << "```\n\n";
    }
  }

  // ---- Status ------------------------------------------------------------------
  bool any_issue = false;
  for (const auto& cj : summary->at("cells")) {
    const bool ok = cj.at("ok").get<bool>();
    std::vector<std::string> notes;
    if (!ok) notes.push_back("failed: " + cj.value("error", std::string("unknown error")));
    for (const auto& e : cj.at("evaluations")) {
      if (!e.at("evaluated").get<bool>()) {
        notes.push_back(e.at("test_set").get<std::string>() + " skipped: " +
                        e.value("skip_reason", std::string()));
      }
    }
    if (!notes.empty()) {
      if (!any_issue) {
        out << "## Cell status notes\n\n";
        any_issue = true;
      }
      out << "- " << cj.at("model_id").get<std::string>() << ": ";
      for (size_t i = 0; i < notes.size(); ++i) out << (i ? "; " : "") << notes[i];
      out << "\n";
    }
  }
  if (any_issue) out << "\n";
  return out.str();
}

}  // namespace voicebench
