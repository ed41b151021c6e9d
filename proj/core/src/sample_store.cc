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

#include "srsel/sample_store.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "srsel/image_io.h"

namespace srsel {
namespace fs = std::filesystem;
namespace {

using nlohmann::json;

std::string ReadText(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

Image LoadNamed(const fs::path& path) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kNotFound, "missing image file " + path.string());
  }
  return LoadPng(path);
}

// A set as found in an ingest source, before it is copied into the store.
struct SourceSet {
  fs::path dir;
  SetManifest manifest;  // file names relative to dir
};

SourceSet DescribeSource(const fs::path& dir) {
  SourceSet src{dir, {}};
  const fs::path manifest_path = dir / "manifest.json";
  if (fs::exists(manifest_path)) {
    src.manifest = ManifestFromJson(ReadText(manifest_path));
    return src;
  }
  SetManifest& m = src.manifest;
  m.set_id = dir.filename().string();
  if (!IsValidSetId(m.set_id)) {
    throw Error(ErrorCode::kInvalidArgument,
                dir.string() + ": directory name is not a valid set id");
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.starts_with("cand_") && name.ends_with(".png")) {
      m.candidates.push_back(name);
    }
  }
  std::sort(m.candidates.begin(), m.candidates.end());
  if (fs::exists(dir / "hr.png")) m.hr = "hr.png";
  if (m.candidates.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                dir.string() + ": no cand_*.png files");
  }
  const Image lr = LoadNamed(dir / "lr.png");
  const Image first = LoadNamed(dir / m.candidates.front());
  if (first.width() % lr.width() != 0 ||
      first.width() / lr.width() != first.height() / lr.height() ||
      first.height() % lr.height() != 0) {
    throw Error(ErrorCode::kShapeMismatch,
                (dir / m.candidates.front()).string() +
                    ": size is not an integer multiple of lr.png");
  }
  m.factor = first.width() / lr.width();
  return src;
}

std::vector<fs::path> FindSetDirectories(const fs::path& source) {
  if (fs::exists(source / "lr.png") || fs::exists(source / "manifest.json")) {
    return {source};
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(source)) {
    if (entry.is_directory() && (fs::exists(entry.path() / "lr.png") ||
                                 fs::exists(entry.path() / "manifest.json"))) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

// Validates a source set, naming the first bad file.
void CheckSourceImages(const SourceSet& src) {
  const SetManifest& m = src.manifest;
  const Image lr = LoadNamed(src.dir / "lr.png");
  for (const std::string& name : m.candidates) {
    const fs::path path = src.dir / name;
    const Image c = LoadNamed(path);
    if (c.width() != lr.width() * m.factor ||
        c.height() != lr.height() * m.factor ||
        c.channels() != lr.channels()) {
      throw Error(ErrorCode::kShapeMismatch,
                  path.string() + ": candidate is " +
                      std::to_string(c.width()) + "x" +
                      std::to_string(c.height()) + "x" +
                      std::to_string(c.channels()) + ", expected " +
                      std::to_string(lr.width() * m.factor) + "x" +
                      std::to_string(lr.height() * m.factor) + "x" +
                      std::to_string(lr.channels()));
    }
  }
  if (m.hr) LoadNamed(src.dir / *m.hr);
}

bool SameBytes(const fs::path& a, const fs::path& b) {
  return fs::exists(a) && fs::exists(b) && ReadFileBytes(a) == ReadFileBytes(b);
}

bool SameContent(const SourceSet& src, const fs::path& dest) {
  const SetManifest stored = ManifestFromJson(ReadText(dest / "manifest.json"));
  const SetManifest& m = src.manifest;
  if (stored.factor != m.factor || stored.label_question != m.label_question ||
      stored.candidates.size() != m.candidates.size() ||
      stored.hr.has_value() != m.hr.has_value()) {
    return false;
  }
  if (!SameBytes(src.dir / "lr.png", dest / "lr.png")) return false;
  for (std::size_t i = 0; i < m.candidates.size(); ++i) {
    if (!SameBytes(src.dir / m.candidates[i], dest / stored.candidates[i])) {
      return false;
    }
  }
  return !m.hr || SameBytes(src.dir / *m.hr, dest / *stored.hr);
}

}  // namespace

std::string ManifestToJson(const SetManifest& m) {
  json j;
  j["set_id"] = m.set_id;
  j["factor"] = m.factor;
  j["label_question"] = m.label_question ? json(*m.label_question) : json(nullptr);
  j["candidates"] = m.candidates;
  j["hr"] = m.hr ? json(*m.hr) : json(nullptr);
  return j.dump(2);
}

SetManifest ManifestFromJson(const std::string& text) {
  SetManifest m;
  try {
    const json j = json::parse(text);
    m.set_id = j.at("set_id").get<std::string>();
    m.factor = j.at("factor").get<int>();
    if (j.contains("label_question") && !j["label_question"].is_null()) {
      m.label_question = j["label_question"].get<std::string>();
    }
    m.candidates = j.at("candidates").get<std::vector<std::string>>();
    if (j.contains("hr") && !j["hr"].is_null()) {
      m.hr = j["hr"].get<std::string>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad manifest: ") + e.what());
  }
  if (!IsValidSetId(m.set_id)) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid set_id '" + m.set_id + "'");
  }
  if (m.factor < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                m.set_id + ": factor must be >= 1");
  }
  return m;
}

std::string CandidateFileName(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "cand_%04d.png", index);
  return buf;
}

bool IsValidSetId(std::string_view set_id) {
  if (set_id.empty() || set_id.front() == '.') return false;
  return std::all_of(set_id.begin(), set_id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
  });
}

std::string ContentHash(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

LoadedSet LoadSetDirectory(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw Error(ErrorCode::kNotFound,
                "missing manifest " + manifest_path.string());
  }
  SetManifest manifest = ManifestFromJson(ReadText(manifest_path));
  Image lr = LoadNamed(dir / "lr.png");
  std::vector<Image> candidates;
  std::vector<std::string> hashes;
  for (const std::string& name : manifest.candidates) {
    const fs::path path = dir / name;
    if (!fs::exists(path)) {
      throw Error(ErrorCode::kNotFound, "missing image file " + path.string());
    }
    const auto bytes = ReadFileBytes(path);
    try {
      candidates.push_back(DecodePng(bytes));
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ": " + e.what());
    }
    hashes.push_back(ContentHash(bytes));
  }
  if (manifest.hr) LoadNamed(dir / *manifest.hr);
  SampleSet samples(manifest.set_id, std::move(lr), std::move(candidates),
                    ScaleFactor(manifest.factor), manifest.label_question);
  return {dir, std::move(manifest), std::move(samples), std::move(hashes)};
}

SetSummary Summarize(const LoadedSet& set) {
  return {set.manifest.set_id, set.samples.size(),
          set.manifest.label_question};
}

IngestDelta IngestSamples(const fs::path& store_root, const fs::path& source) {
  if (!fs::is_directory(source)) {
    throw Error(ErrorCode::kNotFound,
                "ingest source " + source.string() + " is not a directory");
  }
  IngestDelta delta;
  const fs::path sets_root = store_root / "sets";
  fs::create_directories(sets_root);
  for (const fs::path& dir : FindSetDirectories(source)) {
    const SourceSet src = DescribeSource(dir);
    CheckSourceImages(src);
    const SetManifest& m = src.manifest;
    const fs::path dest = sets_root / m.set_id;
    if (fs::exists(dest / "manifest.json")) {
      if (!SameContent(src, dest)) {
        throw Error(ErrorCode::kDuplicate,
                    "set '" + m.set_id + "' already exists with different content");
      }
      delta.unchanged.push_back(m.set_id);
      continue;
    }
    const fs::path staging = sets_root / ("." + m.set_id + ".staging");
    fs::remove_all(staging);
    fs::create_directories(staging);
    SetManifest stored = m;
    fs::copy_file(dir / "lr.png", staging / "lr.png");
    for (std::size_t i = 0; i < m.candidates.size(); ++i) {
      stored.candidates[i] = CandidateFileName(static_cast<int>(i));
      fs::copy_file(dir / m.candidates[i], staging / stored.candidates[i]);
    }
    if (m.hr) {
      stored.hr = "hr.png";
      fs::copy_file(dir / *m.hr, staging / "hr.png");
    }
    WriteText(staging / "manifest.json", ManifestToJson(stored));
    fs::rename(staging, dest);
    delta.added.push_back(m.set_id);
  }
  return delta;
}

}  // namespace srsel
