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

// Line-oriented trial record files (delimited text and JSON lines). See docs/formats.md.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chsim/records.h"

namespace chsim {

enum class TrialFormat { kCsv, kJsonl };

std::string_view to_string(TrialFormat format);
/// Accepts csv, jsonl. Throws NotFoundError otherwise.
TrialFormat parse_trial_format(std::string_view text);
/// jsonl for a .jsonl/.ndjson extension, csv otherwise.
TrialFormat trial_format_for(const std::filesystem::path &path);

/// Writes `path` through a sibling temporary file renamed into place once `body`
/// returns, so readers never see a partial file. Throws IoError.
void write_atomically(const std::filesystem::path &path, const std::function<void(std::ostream &)> &body);

void write_trial_header(std::ostream &out, TrialFormat format);
void write_trial(std::ostream &out, const TrialRecord &record, TrialFormat format);

void write_trials(std::span<const TrialRecord> records, const std::filesystem::path &path, TrialFormat format);

/// Pulls records one line at a time. The format is taken from the first nonblank line:
/// '{' starts JSON lines, anything else is delimited text with a mandatory header.
/// Malformed lines raise ParseError with the 1-based line number; indices must increase.
class TrialReader {
   public:
    explicit TrialReader(std::istream &in);

    std::optional<TrialRecord> next();
    std::size_t line() const {
        return line_;
    }

   private:
    bool read_line(std::string &line);
    TrialRecord parse_csv(std::string_view line) const;
    TrialRecord parse_json(std::string_view line) const;

    std::istream &in_;
    std::size_t line_ = 0;
    std::optional<TrialFormat> format_;
    std::size_t columns_ = 0;
    std::optional<std::uint64_t> last_index_;
};

std::vector<TrialRecord> read_trials(std::istream &in);
/// Throws IoError if the file cannot be opened. An empty file yields no records.
std::vector<TrialRecord> read_trials(const std::filesystem::path &path);

}  // namespace chsim
