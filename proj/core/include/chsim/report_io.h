// Copyright 2026 The chsim Authors
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

// Delimited-text export of CH reports, partition reports, and scan tables.
// Column layouts are listed in docs/formats.md.

#include <filesystem>
#include <string>
#include <string_view>

#include "chsim/analysis.h"
#include "chsim/inequality.h"
#include "chsim/scan.h"

namespace chsim {

enum class ReportFormat { kCsv, kTsv };

std::string_view to_string(ReportFormat format);
/// Accepts csv, tsv. Throws NotFoundError otherwise.
ReportFormat parse_report_format(std::string_view text);
/// tsv for a .tsv extension, csv otherwise.
ReportFormat report_format_for(const std::filesystem::path &path);

/// Shortest text that reads back to the same double.
std::string format_double(double value);

/// Header plus one row per variant: variant,value,violated.
std::string render_report(const CHReport &report, ReportFormat format = ReportFormat::kCsv);
/// Header, one row per partition, then summary rows (fraction, mean, standard_error,
/// chance_band, overall).
std::string render_report(const PartitionReport &report, ReportFormat format = ReportFormat::kCsv);
/// Long format: one row per (cell, variant).
std::string render_report(const ScanTable &table, ReportFormat format = ReportFormat::kCsv);

/// Atomic file writes of the renderings above. Throws IoError.
void export_report(const CHReport &report, const std::filesystem::path &path, ReportFormat format);
void export_report(const PartitionReport &report, const std::filesystem::path &path, ReportFormat format);
void export_report(const ScanTable &table, const std::filesystem::path &path, ReportFormat format);

}  // namespace chsim
