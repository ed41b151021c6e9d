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

// srsel: batch pipeline and rating service for human-selected SR ensembles.

#include <signal.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "srsel/server.h"
#include "srsel/study.h"
#include "tools/commands.h"

namespace {

namespace fs = std::filesystem;
using srsel::cli::CommandSummary;

int Report(const CommandSummary& summary, bool as_json) {
  if (as_json) {
    std::cout << summary.ToJson() << "\n";
  } else {
    std::cout << summary.ToText();
  }
  return summary.exit_code();
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw srsel::Error(srsel::ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<std::string, int> SplitHostPort(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) {
    throw CLI::ValidationError("--bind", "expected host:port");
  }
  return {bind.substr(0, colon), std::stoi(bind.substr(colon + 1))};
}

int Serve(const fs::path& study_path, const fs::path& store_root,
          const std::string& bind, const std::optional<fs::path>& web_root) {
  // Block termination signals in every thread; one thread waits for them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  srsel::Server server(srsel::StudyConfigFromJson(ReadText(study_path)),
                       store_root);
  const auto [host, port] = SplitHostPort(bind);
  srsel::ServerOptions options;
  options.host = host;
  options.port = port;
  options.web_root = web_root;
  const int bound = server.Bind(options);
  std::printf("listening on http://%s:%d\n", host.c_str(), bound);
  std::fflush(stdout);

  std::thread waiter([&server, signals] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.Stop();
  });
  server.Run();
  // Run() also returns if the listener fails; wake the waiter either way.
  kill(getpid(), SIGTERM);
  waiter.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Human-in-the-loop selection and ensembling of SR samples"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Print a machine-readable summary");

  srsel::cli::DegradeOptions degrade;
  auto* degrade_cmd =
      app.add_subcommand("degrade", "Antialiased bicubic downscaling to LR");
  degrade_cmd->add_option("inputs", degrade.inputs, "Input PNG files")
      ->required()
      ->check(CLI::ExistingFile);
  degrade_cmd->add_option("--factor", degrade.factor, "Scale factor")
      ->capture_default_str();
  degrade_cmd->add_option("--out", degrade.out_dir, "Output directory")
      ->required();

  srsel::cli::MetricsOptions metrics;
  std::string external_scores;
  bool luma = false;
  auto* metrics_cmd = app.add_subcommand(
      "metrics", "PSNR/SSIM/MSE/LR-consistency report over SR/HR/LR dirs");
  metrics_cmd->add_option("sr_dir", metrics.sr_dir)->required()->check(CLI::ExistingDirectory);
  metrics_cmd->add_option("hr_dir", metrics.hr_dir)->required()->check(CLI::ExistingDirectory);
  metrics_cmd->add_option("lr_dir", metrics.lr_dir)->required()->check(CLI::ExistingDirectory);
  metrics_cmd->add_option("--factor", metrics.factor)->capture_default_str();
  metrics_cmd->add_option("--external-scores", external_scores,
                          "CSV of externally computed scores")
      ->check(CLI::ExistingFile);
  metrics_cmd->add_flag("--luma", luma, "Compute PSNR on Rec.601 luma");
  metrics_cmd->add_option("--out", metrics.out, "Report CSV")->required();

  srsel::cli::EnsembleOptions ensemble;
  std::string label;
  auto* ensemble_cmd = app.add_subcommand(
      "ensemble", "Tally a ballot log and average the top-k candidates");
  ensemble_cmd->add_option("set_dir", ensemble.set_dir)->required()->check(CLI::ExistingDirectory);
  ensemble_cmd->add_option("ballots", ensemble.ballots, "Ballot JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  ensemble_cmd->add_option("--k", ensemble.k)->required();
  ensemble_cmd->add_option("--max-select", ensemble.max_select)->required();
  ensemble_cmd->add_option("--label", label,
                           "Only count ballots with this label");
  ensemble_cmd->add_option("--out", ensemble.out, "Output PNG")->required();

  srsel::cli::PdPlaneOptions pd;
  auto* pd_cmd = app.add_subcommand(
      "pd-plane", "Export perception-distortion scatter data");
  pd_cmd->add_option("reports", pd.reports, "Report CSVs, one per method")
      ->required();
  pd_cmd->add_option("--fidelity", pd.fidelity_column)->capture_default_str();
  pd_cmd->add_option("--perception", pd.perception_column)
      ->capture_default_str();
  pd_cmd->add_option("--out", pd.out)->required();

  srsel::cli::IngestOptions ingest;
  auto* ingest_cmd =
      app.add_subcommand("ingest", "Register sample-set directories in a store");
  ingest_cmd->add_option("source", ingest.source)->required()->check(CLI::ExistingDirectory);
  ingest_cmd->add_option("--store", ingest.store_root)->required();

  fs::path study_path;
  fs::path store_root;
  std::string bind = "127.0.0.1:8080";
  std::string web_root;
  auto* serve_cmd = app.add_subcommand("serve", "Run the rating service");
  serve_cmd->add_option("--study", study_path, "StudyConfig JSON")
      ->required()
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--store", store_root)->required()->check(CLI::ExistingDirectory);
  serve_cmd->add_option("--bind", bind, "host:port (port 0 = any)")
      ->capture_default_str();
  serve_cmd->add_option("--web-root", web_root, "Static UI bundle");

  std::string config_set;
  std::vector<std::string> config_sets;
  std::vector<std::string> config_labels;
  std::uint64_t seed = 0;
  fs::path config_out;
  auto* config_cmd = app.add_subcommand(
      "config", "Write a StudyConfig for one of the built-in protocols");
  config_cmd->require_subcommand(1);
  auto* task1_cmd = config_cmd->add_subcommand(
      "task1", "Label-and-select: 2 picks per rater, top-5 ensemble");
  task1_cmd->add_option("--store", store_root)->required()->check(CLI::ExistingDirectory);
  task1_cmd->add_option("--set", config_set)->required();
  task1_cmd->add_option("--labels", config_labels, "Closed label set")
      ->delimiter(',');
  task1_cmd->add_option("--seed", seed);
  task1_cmd->add_option("--out", config_out)->required();
  auto* task2_cmd = config_cmd->add_subcommand(
      "task2", "Select-only: 15 candidates, at most 3 picks, top-3 ensemble");
  task2_cmd->add_option("--store", store_root)->required()->check(CLI::ExistingDirectory);
  task2_cmd->add_option("--sets", config_sets)->required()->delimiter(',');
  task2_cmd->add_option("--seed", seed);
  task2_cmd->add_option("--out", config_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*degrade_cmd) return Report(srsel::cli::RunDegrade(degrade), as_json);
    if (*metrics_cmd) {
      if (!external_scores.empty()) metrics.external_scores = external_scores;
      if (luma) metrics.psnr_mode = srsel::PsnrMode::kLuma;
      return Report(srsel::cli::RunMetrics(metrics), as_json);
    }
    if (*ensemble_cmd) {
      if (!label.empty()) ensemble.label = label;
      return Report(srsel::cli::RunEnsemble(ensemble), as_json);
    }
    if (*pd_cmd) return Report(srsel::cli::RunPdPlane(pd), as_json);
    if (*ingest_cmd) return Report(srsel::cli::RunIngest(ingest), as_json);
    if (*serve_cmd) {
      std::optional<fs::path> root;
      if (!web_root.empty()) root = web_root;
      return Serve(study_path, store_root, bind, root);
    }
    if (*config_cmd) {
      const srsel::Store store(store_root);
      const auto catalog = store.Catalog();
      const auto lookup = [&](const std::string& id) {
        const auto it = catalog.find(id);
        if (it == catalog.end()) {
          throw srsel::Error(srsel::ErrorCode::kNotFound,
                             "unknown set '" + id + "'");
        }
        return it->second;
      };
      srsel::StudyConfig config;
      if (*task1_cmd) {
        std::optional<std::vector<std::string>> labels;
        if (!config_labels.empty()) labels = config_labels;
        config = srsel::MakeTask1Config(lookup(config_set), labels, seed);
      } else {
        std::vector<srsel::SetSummary> sets;
        for (const auto& id : config_sets) sets.push_back(lookup(id));
        config = srsel::MakeTask2Config(sets, seed);
      }
      srsel::ValidateStudyConfig(config, catalog);
      std::ofstream(config_out) << srsel::StudyConfigToJson(config) << "\n";
      std::cout << "wrote " << config_out.string() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
