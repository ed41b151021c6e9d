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

#ifndef SRSEL_EXTERNAL_SCORES_H_
#define SRSEL_EXTERNAL_SCORES_H_

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

namespace srsel {

// Externally computed per-image scores (LPIPS, DISTS, PieAPP, NRQM, ...).
// The library never computes these; it only carries them into reports.
class ExternalScoreTable {
 public:
  // Throws kDuplicate if (image_id, score_name) is already present, or
  // kInvalidArgument for empty names / non-finite values.
  void Insert(const std::string& image_id, const std::string& score_name,
              double value);

  std::optional<double> Lookup(const std::string& image_id,
                               const std::string& score_name) const;
  // All scores recorded for one image; empty if the image is unknown.
  std::map<std::string, double> ScoresFor(const std::string& image_id) const;
  std::set<std::string> ScoreNames() const;

  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

 private:
  std::map<std::pair<std::string, std::string>, double> rows_;
};

// CSV with header `image_id,score_name,value`. Errors carry the 1-based line
// number of the offending row.
ExternalScoreTable ParseExternalScores(std::istream& in);
ExternalScoreTable LoadExternalScores(const std::filesystem::path& path);

}  // namespace srsel

#endif  // SRSEL_EXTERNAL_SCORES_H_
