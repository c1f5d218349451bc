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


#include "chsim/trial_io.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>
#include <unistd.h>

#include "json.hpp"

#include "chsim/errors.h"

namespace chsim {

namespace {

constexpr std::string_view kHeader7 = "index,a_setting,b_setting,a_detect,b_detect,a_minus,b_minus";
constexpr std::string_view kHeader5 = "index,a_setting,b_setting,a_detect,b_detect";

bool blank(std::string_view s) {
    return s.find_first_not_of(" \t") == std::string_view::npos;
}

Click click_from(std::uint64_t detect, std::uint64_t minus, std::size_t line, const char *side) {
    if (detect && minus) {
        throw ParseError(line, std::string(side) + " cannot click on both ports");
    }
    return detect ? Click::kPlus : minus ? Click::kMinus : Click::kNone;
}

}  // namespace

std::string_view to_string(TrialFormat format) {
    return format == TrialFormat::kCsv ? "csv" : "jsonl";
}

TrialFormat parse_trial_format(std::string_view text) {
    if (text == "csv") {
        return TrialFormat::kCsv;
    }
    if (text == "jsonl") {
        return TrialFormat::kJsonl;
    }
    throw NotFoundError("unknown trial format '" + std::string(text) + "' (expected csv or jsonl)");
}

TrialFormat trial_format_for(const std::filesystem::path &path) {
    auto ext = path.extension();
    return ext == ".jsonl" || ext == ".ndjson" ? TrialFormat::kJsonl : TrialFormat::kCsv;
}

void write_atomically(const std::filesystem::path &path, const std::function<void(std::ostream &)> &body) {
    std::filesystem::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write '" + path.string() + "'");
        }
        try {
            body(out);
        } catch (...) {
            out.close();
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw;
        }
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw IoError("write to '" + path.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw IoError("cannot move output into '" + path.string() + "': " + ec.message());
    }
}

void write_trial_header(std::ostream &out, TrialFormat format) {
    if (format == TrialFormat::kCsv) {
        out << kHeader7 << '\n';
    }
}

void write_trial(std::ostream &out, const TrialRecord &r, TrialFormat format) {
    int ad = r.alice == Click::kPlus;
    int bd = r.bob == Click::kPlus;
    int am = r.alice == Click::kMinus;
    int bm = r.bob == Click::kMinus;
    if (format == TrialFormat::kCsv) {
        out << r.index << ',' << int(r.alice_setting) << ',' << int(r.bob_setting) << ',' << ad << ',' << bd << ','
            << am << ',' << bm << '\n';
    } else {
        out << "{\"index\":" << r.index << ",\"a_setting\":" << int(r.alice_setting)
            << ",\"b_setting\":" << int(r.bob_setting) << ",\"a_detect\":" << ad << ",\"b_detect\":" << bd
            << ",\"a_minus\":" << am << ",\"b_minus\":" << bm << "}\n";
    }
}

void write_trials(std::span<const TrialRecord> records, const std::filesystem::path &path, TrialFormat format) {
    write_atomically(path, [&](std::ostream &out) {
        write_trial_header(out, format);
        for (const auto &r : records) {
            write_trial(out, r, format);
        }
    });
}

TrialReader::TrialReader(std::istream &in) : in_(in) {
}

bool TrialReader::read_line(std::string &line) {
    while (std::getline(in_, line)) {
        ++line_;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!blank(line)) {
            return true;
        }
    }
    return false;
}

std::optional<TrialRecord> TrialReader::next() {
    std::string line;
    if (!read_line(line)) {
        return std::nullopt;
    }
    if (!format_) {
        if (line.front() == '{') {
            format_ = TrialFormat::kJsonl;
        } else {
            format_ = TrialFormat::kCsv;
            if (line == kHeader7) {
                columns_ = 7;
            } else if (line == kHeader5) {
                columns_ = 5;
            } else {
                throw ParseError(line_, "expected header '" + std::string(kHeader7) + "'");
            }
            if (!read_line(line)) {
                return std::nullopt;
            }
        }
    }
    TrialRecord record = *format_ == TrialFormat::kCsv ? parse_csv(line) : parse_json(line);
    if (last_index_ && record.index <= *last_index_) {
        throw ParseError(line_, "trial index " + std::to_string(record.index) + " does not increase");
    }
    last_index_ = record.index;
    return record;
}

TrialRecord TrialReader::parse_csv(std::string_view text) const {
    std::array<std::uint64_t, 7> v{};
    std::size_t n = 0;
    const char *p = text.data();
    const char *end = text.data() + text.size();
    while (true) {
        if (n == columns_) {
            throw ParseError(line_, "expected " + std::to_string(columns_) + " fields");
        }
        auto [ptr, ec] = std::from_chars(p, end, v[n]);
        if (ec != std::errc() || ptr == p) {
            throw ParseError(line_, "field " + std::to_string(n + 1) + " is not a nonnegative integer");
        }
        ++n;
        p = ptr;
        if (p == end) {
            break;
        }
        if (*p != ',') {
            throw ParseError(line_, "unexpected character '" + std::string(1, *p) + "'");
        }
        ++p;
    }
    if (n != columns_) {
        throw ParseError(line_, "expected " + std::to_string(columns_) + " fields, got " + std::to_string(n));
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (v[i] > 1) {
            throw ParseError(line_, "field " + std::to_string(i + 1) + " must be 0 or 1");
        }
    }
    TrialRecord r;
    r.index = v[0];
    r.alice_setting = static_cast<std::uint8_t>(v[1]);
    r.bob_setting = static_cast<std::uint8_t>(v[2]);
    r.alice = click_from(v[3], columns_ == 7 ? v[5] : 0, line_, "alice");
    r.bob = click_from(v[4], columns_ == 7 ? v[6] : 0, line_, "bob");
    return r;
}

TrialRecord TrialReader::parse_json(std::string_view text) const {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(line_, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ParseError(line_, "expected a JSON object");
    }
    static const std::array<const char *, 7> kKeys{"index",    "a_setting", "b_setting", "a_detect",
                                                   "b_detect", "a_minus",   "b_minus"};
    for (const auto &item : j.items()) {
        if (std::find_if(kKeys.begin(), kKeys.end(), [&](const char *k) { return item.key() == k; }) ==
            kKeys.end()) {
            throw ParseError(line_, "unknown key '" + item.key() + "'");
        }
    }
    auto field = [&](std::size_t i, bool required) -> std::uint64_t {
        auto it = j.find(kKeys[i]);
        if (it == j.end()) {
            if (required) {
                throw ParseError(line_, std::string("missing key '") + kKeys[i] + "'");
            }
            return 0;
        }
        if (!it->is_number_unsigned() || (i > 0 && it->get<std::uint64_t>() > 1)) {
            throw ParseError(line_, std::string("bad value for '") + kKeys[i] + "'");
        }
        return it->get<std::uint64_t>();
    };
    TrialRecord r;
    r.index = field(0, true);
    r.alice_setting = static_cast<std::uint8_t>(field(1, true));
    r.bob_setting = static_cast<std::uint8_t>(field(2, true));
    r.alice = click_from(field(3, true), field(5, false), line_, "alice");
    r.bob = click_from(field(4, true), field(6, false), line_, "bob");
    return r;
}

std::vector<TrialRecord> read_trials(std::istream &in) {
    TrialReader reader(in);
    std::vector<TrialRecord> records;
    while (auto r = reader.next()) {
        records.push_back(*r);
    }
    return records;
}

std::vector<TrialRecord> read_trials(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open trials file '" + path.string() + "'");
    }
    return read_trials(in);
}

}  // namespace chsim
