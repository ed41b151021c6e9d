// Copyright 2026 The sr-select Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tools/commands.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "srsel/ballot_io.h"
#include "srsel/ensemble.h"
#include "srsel/external_scores.h"
#include "srsel/image_io.h"
#include "srsel/resample.h"
#include "srsel/sample_store.h"

namespace srsel::cli {
namespace fs = std::filesystem;
namespace {

using nlohmann::json;

std::map<std::string, fs::path> PngsByStem(const fs::path& dir) {
  std::map<std::string, fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      out.emplace(entry.path().stem().string(), entry.path());
    }
  }
  return out;
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) return fields;
    start = comma + 1;
  }
}

std::optional<double> ParseDouble(const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return v;
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string CommandSummary::ToJson() const {
  json j;
  j["command"] = command;
  j["succeeded"] = succeeded;
  j["failed"] = failures.size();
  j["failures"] = json::array();
  for (const auto& f : failures) {
    j["failures"].push_back({{"item", f.item}, {"message", f.message}});
  }
  j["outputs"] = outputs;
  j["exit_code"] = exit_code();
  return j.dump(2);
}

std::string CommandSummary::ToText() const {
  std::ostringstream out;
  out << command << ": " << succeeded << " ok, " << failures.size()
      << " failed\n";
  for (const auto& f : failures) {
    out << "  FAIL " << f.item << ": " << f.message << "\n";
  }
  for (const auto& o : outputs) out << "  wrote " << o << "\n";
  return out.str();
}

CommandSummary RunDegrade(const DegradeOptions& options) {
  CommandSummary summary;
  summary.command = "degrade";
  const ScaleFactor factor(options.factor);
  fs::create_directories(options.out_dir);
  std::vector<fs::path> inputs = options.inputs;
  std::sort(inputs.begin(), inputs.end());
  for (const fs::path& input : inputs) {
    try {
      const Image lr = Degrade(LoadPng(input), factor);
      const fs::path out =
          options.out_dir / (input.stem().string() + "_x" +
                             std::to_string(options.factor) + "_lr.png");
      SavePng(lr, out);
      summary.outputs.push_back(out.string());
      ++summary.succeeded;
    } catch (const std::exception& e) {
      summary.failures.push_back({input.string(), e.what()});
    }
  }
  return summary;
}

std::string ReportCsvHeader(const std::vector<std::string>& external_names) {
  std::string header = "image_id,psnr_db,ssim,mse,lr_consistency_db";
  for (const auto& name : external_names) header += "," + name;
  return header;
}

std::string ReportCsvRow(const MetricReport& report,
                         const std::vector<std::string>& external_names) {
  std::string row = report.image_id + "," + FormatDouble(report.psnr_db) +
                    "," + FormatDouble(report.ssim) + "," +
                    FormatDouble(report.mse) + "," +
                    FormatDouble(report.lr_consistency_db);
  for (const auto& name : external_names) {
    row += ",";
    if (const auto it = report.external.find(name);
        it != report.external.end()) {
      row += FormatDouble(it->second);
    }
  }
  return row;
}

CommandSummary RunMetrics(const MetricsOptions& options) {
  CommandSummary summary;
  summary.command = "metrics";
  const ScaleFactor factor(options.factor);
  ExternalScoreTable external;
  if (options.external_scores) {
    external = LoadExternalScores(*options.external_scores);
  }
  const auto sr = PngsByStem(options.sr_dir);
  const auto hr = PngsByStem(options.hr_dir);
  const auto lr = PngsByStem(options.lr_dir);

  std::set<std::string> stems;
  for (const auto* dir : {&sr, &hr, &lr}) {
    for (const auto& [stem, path] : *dir) stems.insert(stem);
  }
  std::vector<MetricReport> reports;
  for (const std::string& stem : stems) {
    if (!sr.contains(stem) || !hr.contains(stem) || !lr.contains(stem)) {
      std::string missing;
      if (!sr.contains(stem)) missing += " sr";
      if (!hr.contains(stem)) missing += " hr";
      if (!lr.contains(stem)) missing += " lr";
      summary.failures.push_back({stem, "unmatched stem, missing in:" + missing});
      continue;
    }
    try {
      reports.push_back(BuildReport(stem, LoadPng(sr.at(stem)),
                                    LoadPng(hr.at(stem)), LoadPng(lr.at(stem)),
                                    factor, external, options.psnr_mode));
      ++summary.succeeded;
    } catch (const std::exception& e) {
      summary.failures.push_back({stem, e.what()});
    }
  }

  const auto name_set = external.ScoreNames();
  const std::vector<std::string> names(name_set.begin(), name_set.end());
  std::string csv = ReportCsvHeader(names) + "\n";
  for (const auto& r : reports) csv += ReportCsvRow(r, names) + "\n";
  if (!reports.empty()) {
    MetricReport mean;
    mean.image_id = kMeanRowId;
    std::map<std::string, int> counts;
    for (const auto& r : reports) {
      mean.psnr_db += r.psnr_db;
      mean.ssim += r.ssim;
      mean.mse += r.mse;
      mean.lr_consistency_db += r.lr_consistency_db;
      for (const auto& [name, v] : r.external) {
        mean.external[name] += v;
        ++counts[name];
      }
    }
    const double n = static_cast<double>(reports.size());
    mean.psnr_db /= n;
    mean.ssim /= n;
    mean.mse /= n;
    mean.lr_consistency_db /= n;
    for (auto& [name, v] : mean.external) v /= counts[name];
    csv += ReportCsvRow(mean, names) + "\n";
  }
  WriteFile(options.out, csv);
  summary.outputs.push_back(options.out.string());
  return summary;
}

fs::path TallyPathFor(const fs::path& png_out) {
  fs::path p = png_out;
  p.replace_extension(".tally.json");
  return p;
}

CommandSummary RunEnsemble(const EnsembleOptions& options) {
  CommandSummary summary;
  summary.command = "ensemble";
  const LoadedSet set = LoadSetDirectory(options.set_dir);
  const std::string& set_id = set.manifest.set_id;

  std::vector<Ballot> ballots;
  std::map<std::string, int> first_line_by_voter;
  for (const LoggedBallot& rec : ReadBallotLog(options.ballots)) {
    const Ballot& b = rec.ballot;
    if (b.set_id != set_id) continue;
    if (options.label && (!b.label || *b.label != *options.label)) continue;
    const std::string where = options.ballots.string() + ":" +
                              std::to_string(rec.line);
    const BallotStatus status =
        CheckSelections(b.selections, set.samples.size(), options.max_select);
    if (status != BallotStatus::kAccepted) {
      summary.failures.push_back(
          {where, "voter '" + b.voter_id + "': " +
                      std::string(BallotStatusCode(status))});
      continue;
    }
    const auto [it, fresh] = first_line_by_voter.emplace(b.voter_id, rec.line);
    if (!fresh) {
      summary.failures.push_back(
          {where, "duplicate ballot from voter '" + b.voter_id +
                      "' (first at line " + std::to_string(it->second) + ")"});
      continue;
    }
    ballots.push_back(b);
  }
  if (!summary.failures.empty()) return summary;

  const TallyResult tally = Tally(ballots, set.samples, options.max_select);
  const EnsembleResult result = EnsembleFromTally(set.samples, tally, options.k);
  if (options.out.has_parent_path()) {
    fs::create_directories(options.out.parent_path());
  }
  SavePng(result.image, options.out);
  const fs::path tally_path = TallyPathFor(options.out);
  WriteFile(tally_path, TallyToJson(tally) + "\n");
  summary.succeeded = static_cast<int>(ballots.size());
  summary.outputs = {options.out.string(), tally_path.string()};
  return summary;
}

CommandSummary RunPdPlane(const PdPlaneOptions& options) {
  CommandSummary summary;
  summary.command = "pd-plane";
  std::string csv = "method,image_id,fidelity,perception\n";
  std::vector<std::string> centroids;
  for (const fs::path& path : options.reports) {
    std::ifstream in(path);
    if (!in) {
      summary.failures.push_back({path.string(), "cannot open"});
      continue;
    }
    const std::string method = path.stem().string();
    std::string line;
    if (!std::getline(in, line)) {
      summary.failures.push_back({path.string(), "empty file, no header"});
      continue;
    }
    const auto header = SplitCsvLine(line);
    const auto find_column = [&](const std::string& name) -> int {
      const auto it = std::find(header.begin(), header.end(), name);
      return it == header.end() ? -1 : static_cast<int>(it - header.begin());
    };
    const int id_col = find_column("image_id");
    const int fid_col = find_column(options.fidelity_column);
    const int per_col = find_column(options.perception_column);
    std::string missing;
    if (id_col < 0) missing += " image_id";
    if (fid_col < 0) missing += " " + options.fidelity_column;
    if (per_col < 0) missing += " " + options.perception_column;
    if (!missing.empty()) {
      summary.failures.push_back({path.string(), "missing column:" + missing});
      continue;
    }
    double sum_fid = 0.0;
    double sum_per = 0.0;
    int rows = 0;
    int line_no = 1;
    bool ok = true;
    std::string method_rows;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line == "\r") continue;
      const auto fields = SplitCsvLine(line);
      if (fields.size() != header.size()) {
        summary.failures.push_back(
            {path.string() + ":" + std::to_string(line_no),
             "expected " + std::to_string(header.size()) + " fields"});
        ok = false;
        break;
      }
      if (fields[id_col] == kMeanRowId) continue;
      const std::string& fid = fields[fid_col];
      const std::string& per = fields[per_col];
      if (fid.empty() || per.empty()) continue;  // metric not available
      const auto fv = ParseDouble(fid);
      const auto pv = ParseDouble(per);
      if (!fv || !pv) {
        summary.failures.push_back(
            {path.string() + ":" + std::to_string(line_no),
             "non-numeric metric value"});
        ok = false;
        break;
      }
      method_rows += method + "," + fields[id_col] + "," + fid + "," + per + "\n";
      sum_fid += *fv;
      sum_per += *pv;
      ++rows;
    }
    if (!ok) continue;
    csv += method_rows;
    if (rows > 0) {
      centroids.push_back(method + "," + kCentroidRowId + "," +
                          FormatDouble(sum_fid / rows) + "," +
                          FormatDouble(sum_per / rows) + "\n");
    }
    ++summary.succeeded;
  }
  for (const auto& c : centroids) csv += c;
  WriteFile(options.out, csv);
  summary.outputs.push_back(options.out.string());
  return summary;
}

CommandSummary RunIngest(const IngestOptions& options) {
  CommandSummary summary;
  summary.command = "ingest";
  const IngestDelta delta = IngestSamples(options.store_root, options.source);
  summary.succeeded =
      static_cast<int>(delta.added.size() + delta.unchanged.size());
  for (const auto& id : delta.added) {
    summary.outputs.push_back((options.store_root / "sets" / id).string());
  }
  return summary;
}

}  // namespace srsel::cli
