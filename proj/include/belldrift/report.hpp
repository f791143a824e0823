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
#include <span>
#include <string>
#include <vector>

#include "belldrift/harness.hpp"

// Byte-stable CSV tables and SVG figures. Figures are rendered from CSV text
// only, never from in-memory results.
namespace belldrift::report {

/// Fixed-precision decimal rendering used by every table ("%.6f"; "nan"/"inf" spelled out).
std::string fmt(double x, int precision = 6);

/// Schedule,S_r,δ_op(global),δ_ens,δ_ens(outcome),δ_sched - one row per record.
/// δ_ens columns are the model's λ-level and outcome-level values; empty for sources without a model.
std::string schedule_table_csv(std::span<const harness::RunRecord> records);

/// Dataset,Version,max|ΔP|,min p,min p_Bonf - raw row, plus a mitigated row when present.
std::string no_signaling_table_csv(std::span<const harness::RunRecord> records);

/// Version,context,delta_op,null_mean,null_std,null_q025,null_q975,null_q99,p_value,stars
/// with a "global" row per version.
std::string drift_csv(const harness::RunRecord &record);

/// Version,context,E,standard_error plus an "S" row.
std::string chsh_csv(const harness::RunRecord &record);

/// quantity,value rows: certificate, exposure, model divergence and the Hall threshold note.
std::string certificate_csv(const harness::RunRecord &record);

/// B,theta_max,schedule,observed,observed_std,null_mean,null_std,null_q99,p_value,stars
std::string bin_scan_csv(std::span<const harness::BinScanRow> rows);
std::vector<harness::BinScanRow> parse_bin_scan_csv(const std::string &csv);

/// Observed vs null bars (null mean with 1 std whisker and q99 tick), stars above significant bars.
std::string drift_svg_from_csv(const std::string &drift_csv_text);
std::string bin_scan_svg_from_csv(const std::string &bin_scan_csv_text);

/// Writes <stem>_drift.csv, _chsh.csv, _certificate.csv, _schedule.csv, _nosignaling.csv
/// (and _drift.svg) into `dir`. Returns the paths written, in order.
std::vector<std::filesystem::path> write_record_report(const harness::RunRecord &record,
                                                       const std::filesystem::path &dir, const std::string &stem,
                                                       bool svg);

}  // namespace belldrift::report
