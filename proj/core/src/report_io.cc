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


#include "chsim/report_io.h"

#include <charconv>
#include <ostream>
#include <vector>

#include "chsim/errors.h"
#include "chsim/trial_io.h"

namespace chsim {

namespace {

class Table {
   public:
    explicit Table(ReportFormat format) : sep_(format == ReportFormat::kCsv ? ',' : '\t') {
    }

    void row(const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                text_ += sep_;
            }
            text_ += cells[i];
        }
        text_ += '\n';
    }

    std::string str() && {
        return std::move(text_);
    }

   private:
    char sep_;
    std::string text_;
};

std::string flag(bool b) {
    return b ? "1" : "0";
}

template <typename T>
void export_text(const T &report, const std::filesystem::path &path, ReportFormat format) {
    std::string text = render_report(report, format);
    write_atomically(path, [&](std::ostream &out) { out << text; });
}

}  // namespace

std::string_view to_string(ReportFormat format) {
    return format == ReportFormat::kCsv ? "csv" : "tsv";
}

ReportFormat parse_report_format(std::string_view text) {
    if (text == "csv") {
        return ReportFormat::kCsv;
    }
    if (text == "tsv") {
        return ReportFormat::kTsv;
    }
    throw NotFoundError("unknown report format '" + std::string(text) + "' (expected csv or tsv)");
}

ReportFormat report_format_for(const std::filesystem::path &path) {
    return path.extension() == ".tsv" ? ReportFormat::kTsv : ReportFormat::kCsv;
}

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) {
        throw ContractViolation("double formatting failed");
    }
    return std::string(buf, ptr);
}

std::string render_report(const CHReport &report, ReportFormat format) {
    Table t(format);
    t.row({"variant", "value", "violated"});
    for (std::size_t v = 0; v < kVariantCount; ++v) {
        t.row({std::to_string(v), format_double(report.values[v]), flag(report.violated[v])});
    }
    return std::move(t).str();
}

std::string render_report(const PartitionReport &report, ReportFormat format) {
    Table t(format);
    t.row({"row", "ch0", "ch1", "ch2", "ch3", "any"});
    auto values = [](const std::string &name, const std::array<double, kVariantCount> &v, const std::string &any) {
        return std::vector<std::string>{name, format_double(v[0]), format_double(v[1]), format_double(v[2]),
                                        format_double(v[3]), any};
    };
    for (std::size_t j = 0; j < report.partitions.size(); ++j) {
        const auto &p = report.partitions[j];
        t.row(values(std::to_string(j), p.values, flag(p.any_violated)));
    }
    t.row(values("fraction", report.violation_fraction, format_double(report.any_violation_fraction)));
    t.row(values("mean", report.mean, ""));
    t.row(values("standard_error", report.standard_error, ""));
    double band = report.chance_band();
    t.row(values("chance_band", {band, band, band, band}, ""));
    t.row(values("overall", report.overall.values, flag(report.overall.any_violated)));
    return std::move(t).str();
}

std::string render_report(const ScanTable &table, ReportFormat format) {
    Table t(format);
    t.row({"r", "eta", "variant", "value", "expected", "mean", "standard_error", "fraction", "violating", "persistent",
           "alpha", "alpha_prime", "beta", "beta_prime"});
    for (const auto &cell : table.cells) {
        for (std::size_t v = 0; v < kVariantCount; ++v) {
            t.row({format_double(cell.r), format_double(cell.eta), std::to_string(v),
                   format_double(cell.report.overall.values[v]), format_double(cell.expected[v]),
                   format_double(cell.report.mean[v]), format_double(cell.report.standard_error[v]),
                   format_double(cell.report.violation_fraction[v]), flag(cell.violating(v)),
                   flag(cell.persistent(v)), format_double(cell.angles.alice[0]),
                   format_double(cell.angles.alice[1]), format_double(cell.angles.bob[0]),
                   format_double(cell.angles.bob[1])});
        }
    }
    return std::move(t).str();
}

void export_report(const CHReport &report, const std::filesystem::path &path, ReportFormat format) {
    export_text(report, path, format);
}

void export_report(const PartitionReport &report, const std::filesystem::path &path, ReportFormat format) {
    export_text(report, path, format);
}

void export_report(const ScanTable &table, const std::filesystem::path &path, ReportFormat format) {
    export_text(table, path, format);
}

}  // namespace chsim
