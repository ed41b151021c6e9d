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

#ifndef SRSEL_TOOLS_COMMANDS_H_
#define SRSEL_TOOLS_COMMANDS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "srsel/metrics.h"

namespace srsel::cli {

struct ItemFailure {
  std::string item;
  std::string message;
};

// Outcome of one batch command. Exit code is 0 iff there are no failures.
struct CommandSummary {
  std::string command;
  int succeeded = 0;
  std::vector<ItemFailure> failures;
  std::vector<std::string> outputs;  // files written

  int exit_code() const { return failures.empty() ? 0 : 1; }
  std::string ToJson() const;
  std::string ToText() const;
};

struct DegradeOptions {
  std::vector<std::filesystem::path> inputs;
  int factor = 4;
  std::filesystem::path out_dir;
};
// Writes <stem>_x<factor>_lr.png per input.
CommandSummary RunDegrade(const DegradeOptions& options);

struct MetricsOptions {
  std::filesystem::path sr_dir;
  std::filesystem::path hr_dir;
  std::filesystem::path lr_dir;
  int factor = 4;
  std::optional<std::filesystem::path> external_scores;
  std::filesystem::path out;
  PsnrMode psnr_mode = PsnrMode::kRgbJoint;
};
// One report row per stem present in all three directories, then a "mean"
// row.
CommandSummary RunMetrics(const MetricsOptions& options);

inline constexpr const char* kMeanRowId = "mean";

// Report CSV: image_id,psnr_db,ssim,mse,lr_consistency_db,<external...>.
std::string ReportCsvHeader(const std::vector<std::string>& external_names);
std::string ReportCsvRow(const MetricReport& report,
                         const std::vector<std::string>& external_names);

struct EnsembleOptions {
  std::filesystem::path set_dir;
  std::filesystem::path ballots;
  int k = 5;
  int max_select = 2;
  std::optional<std::string> label;
  std::filesystem::path out;
};
// Writes the ensembled PNG at `out` and the tally next to it as
// <out-stem>.tally.json.
CommandSummary RunEnsemble(const EnsembleOptions& options);
std::filesystem::path TallyPathFor(const std::filesystem::path& png_out);

struct PdPlaneOptions {
  std::vector<std::filesystem::path> reports;  // method name = file stem
  std::string fidelity_column = "psnr_db";
  std::string perception_column = "DISTS";
  std::filesystem::path out;
};
// Scatter rows `method,image_id,fidelity,perception` (values copied
// verbatim), followed by one `method,centroid,...` row per method.
CommandSummary RunPdPlane(const PdPlaneOptions& options);

inline constexpr const char* kCentroidRowId = "centroid";

struct IngestOptions {
  std::filesystem::path store_root;
  std::filesystem::path source;
};
CommandSummary RunIngest(const IngestOptions& options);

// Shortest representation that round-trips to the same double.
std::string FormatDouble(double v);

}  // namespace srsel::cli

#endif  // SRSEL_TOOLS_COMMANDS_H_
