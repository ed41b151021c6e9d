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

#ifndef SRSEL_SAMPLE_STORE_H_
#define SRSEL_SAMPLE_STORE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srsel/ensemble.h"
#include "srsel/study.h"

namespace srsel {

// <set_id>/manifest.json. Candidate file names are listed in canonical index
// order; the store writes them as cand_0000.png, cand_0001.png, ...
struct SetManifest {
  std::string set_id;
  int factor = 1;
  std::optional<std::string> label_question;
  std::vector<std::string> candidates;
  std::optional<std::string> hr;  // never served to raters

  friend bool operator==(const SetManifest&, const SetManifest&) = default;
};

std::string ManifestToJson(const SetManifest& manifest);
SetManifest ManifestFromJson(const std::string& text);

std::string CandidateFileName(int index);

// Letters, digits, '.', '_' and '-'; must not start with '.'.
bool IsValidSetId(std::string_view set_id);

// 16 lowercase hex digits of FNV-1a/64 over the bytes.
std::string ContentHash(std::span<const std::uint8_t> bytes);

struct LoadedSet {
  std::filesystem::path dir;
  SetManifest manifest;
  SampleSet samples;
  std::vector<std::string> candidate_hashes;  // canonical order
};

// Loads and validates a set directory that has a manifest.json. Every
// referenced file must exist and decode; errors name the offending file.
LoadedSet LoadSetDirectory(const std::filesystem::path& dir);

SetSummary Summarize(const LoadedSet& set);

struct IngestDelta {
  std::vector<std::string> added;
  std::vector<std::string> unchanged;
};

// Copies sample sets from `source` into `<store_root>/sets/`. `source` may be
// one set directory (it contains lr.png) or a directory of set directories.
// Without a manifest the set id is the directory name, candidates are the
// sorted cand_*.png files and the factor is inferred from the sizes.
// Re-ingesting identical content is a no-op; a known set_id with different
// content is rejected.
IngestDelta IngestSamples(const std::filesystem::path& store_root,
                          const std::filesystem::path& source);

}  // namespace srsel

#endif  // SRSEL_SAMPLE_STORE_H_
