// Copyright 2026 The belldrift Authors
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

#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "belldrift/core.hpp"
#include "belldrift/harness.hpp"
#include "belldrift/mitigation.hpp"

namespace belldrift::io {

/// Counts file contents: one record per (context, bin), plus any calibration
/// snapshots embedded in a JSON counts file.
struct IngestedCounts {
    BinnedCounts counts;
    std::vector<mitigation::AssignmentMatrix> calibrations;
};

/// CSV columns: experiment_id,context,bin,n00,n01,n10,n11,shots
void write_counts_csv(const BinnedCounts &counts, std::ostream &out);
BinnedCounts read_counts_csv(std::istream &in);

/// {"experiment_id", "shots_per_bin", "num_bins", "records": [{"context", "bin", "counts": [4], "shots"}],
///  "calibration": [[[4x4 row-major]], ...] (optional)}
nlohmann::json counts_to_json(const BinnedCounts &counts, const std::vector<mitigation::AssignmentMatrix> &cal = {});
IngestedCounts counts_from_json(const nlohmann::json &j);

/// Dispatches on extension: .json is JSON, anything else CSV. Errors carry line or record numbers.
IngestedCounts ingest_counts(const std::filesystem::path &path);
void write_counts(const BinnedCounts &counts, const std::filesystem::path &path);

/// 4x4 row-major numeric table, whitespace or comma separated, '#' comments.
/// Loading rejects matrices that are not column-stochastic.
mitigation::AssignmentMatrix read_calibration(std::istream &in);
mitigation::AssignmentMatrix read_calibration(const std::filesystem::path &path);
void write_calibration(const mitigation::AssignmentMatrix &m, std::ostream &out);
void write_calibration(const mitigation::AssignmentMatrix &m, const std::filesystem::path &path);

nlohmann::json config_to_json(const harness::ExperimentConfig &config);
/// Keys mirror ExperimentConfig fields. `seed`, `shots_per_bin` and `num_bins` have no defaults.
harness::ExperimentConfig config_from_json(const nlohmann::json &j);
harness::ExperimentConfig read_config(const std::filesystem::path &path);

nlohmann::json record_to_json(const harness::RunRecord &record, bool include_timing = true);
harness::RunRecord record_from_json(const nlohmann::json &j);
harness::RunRecord read_record(const std::filesystem::path &path);
void write_record(const harness::RunRecord &record, const std::filesystem::path &path);

/// Writes `text` to `path`, throwing ValidationError when the destination is unwritable.
void write_text(const std::filesystem::path &path, const std::string &text);

}  // namespace belldrift::io
