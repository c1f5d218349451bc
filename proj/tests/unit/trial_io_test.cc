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


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chsim/errors.h"
#include "chsim/simulation.h"
#include "chsim/trial_io.h"

namespace chsim {
namespace {

namespace fs = std::filesystem;

class TrialIo : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("chsim_trial_io_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override {
        fs::remove_all(dir_);
    }
    fs::path dir_;
};

std::vector<TrialRecord> sample_records() {
    Experiment e;
    e.source = make_model("detection-biased");
    e.n_trials = 10000;
    return simulate_trials(e);
}

std::size_t parse_error_line(const std::string &text) {
    std::istringstream in(text);
    try {
        read_trials(in);
    } catch (const ParseError &e) {
        return e.line();
    }
    return 0;
}

TEST_F(TrialIo, RoundTripBothFormats) {
    auto records = sample_records();
    bool saw_minus = false;
    for (const auto &r : records) {
        saw_minus |= r.alice == Click::kMinus;
    }
    ASSERT_TRUE(saw_minus);
    for (TrialFormat f : {TrialFormat::kCsv, TrialFormat::kJsonl}) {
        fs::path path = dir_ / (std::string("t.") + std::string(to_string(f)));
        write_trials(records, path, f);
        EXPECT_EQ(read_trials(path), records) << to_string(f);
    }
}

TEST_F(TrialIo, EmptyFile) {
    fs::path path = dir_ / "empty.csv";
    std::ofstream(path).close();
    EXPECT_TRUE(read_trials(path).empty());
    write_trials({}, dir_ / "none.csv", TrialFormat::kCsv);
    EXPECT_TRUE(read_trials(dir_ / "none.csv").empty());
}

TEST_F(TrialIo, MissingFile) {
    EXPECT_THROW(read_trials(dir_ / "absent.csv"), IoError);
    EXPECT_THROW(write_trials({}, dir_ / "no" / "such" / "dir.csv", TrialFormat::kCsv), IoError);
}

TEST_F(TrialIo, TruncationReportsTheLine) {
    auto records = sample_records();
    fs::path path = dir_ / "t.csv";
    write_trials(records, path, TrialFormat::kCsv);
    std::ifstream in(path);
    std::stringstream whole;
    whole << in.rdbuf();
    std::string text = whole.str();
    // Cut in the middle of data line 501 (file line 502 counting the header).
    std::size_t pos = 0;
    for (int i = 0; i < 501; ++i) {
        pos = text.find('\n', pos) + 1;
    }
    EXPECT_EQ(parse_error_line(text.substr(0, pos + 4)), 502u);

    std::ostringstream json;
    for (const auto &r : records) {
        write_trial(json, r, TrialFormat::kJsonl);
    }
    std::string jtext = json.str();
    pos = 0;
    for (int i = 0; i < 99; ++i) {
        pos = jtext.find('\n', pos) + 1;
    }
    EXPECT_EQ(parse_error_line(jtext.substr(0, pos + 20)), 100u);
}

TEST(TrialParse, FiveColumnVariant) {
    std::istringstream in("index,a_setting,b_setting,a_detect,b_detect\n0,1,0,1,0\n5,0,1,0,1\n");
    auto r = read_trials(in);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0], (TrialRecord{0, 1, 0, Click::kPlus, Click::kNone}));
    EXPECT_EQ(r[1], (TrialRecord{5, 0, 1, Click::kNone, Click::kPlus}));
}

TEST(TrialParse, MalformedLines) {
    const std::string h = "index,a_setting,b_setting,a_detect,b_detect,a_minus,b_minus\n";
    EXPECT_EQ(parse_error_line("0,1,0,1,0,0,0\n"), 1u);
    EXPECT_EQ(parse_error_line(h + "0,1,0,1,0,0,0\n1,2,0,1,0,0,0\n"), 3u);
    EXPECT_EQ(parse_error_line(h + "0,1,0,1,0,1,0\n"), 2u);
    EXPECT_EQ(parse_error_line(h + "0,1,0,1,0,0,0,0\n"), 2u);
    EXPECT_EQ(parse_error_line(h + "0,1,0,x,0,0,0\n"), 2u);
    EXPECT_EQ(parse_error_line(h + "3,1,0,1,0,0,0\n3,1,0,1,0,0,0\n"), 3u);
    EXPECT_EQ(parse_error_line("{\"index\":0,\"a_setting\":1,\"b_setting\":0,\"a_detect\":1}\n"), 1u);
    EXPECT_EQ(parse_error_line("{\"index\":0,\"a_setting\":1,\"b_setting\":0,\"a_detect\":1,\"b_detect\":0,\"c\":1}\n"),
              1u);
    EXPECT_EQ(parse_error_line("{\"index\":0,\"a_setting\":1,\"b_setting\":0,\"a_detect\":true,\"b_detect\":0}\n"), 1u);
}

TEST(TrialParse, BlankLinesAndCrlf) {
    std::istringstream in("index,a_setting,b_setting,a_detect,b_detect,a_minus,b_minus\r\n\r\n0,1,0,0,0,1,0\r\n\n");
    auto r = read_trials(in);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].alice, Click::kMinus);
}

TEST(TrialParse, StreamingReader) {
    std::istringstream in("{\"index\":0,\"a_setting\":1,\"b_setting\":0,\"a_detect\":1,\"b_detect\":0}\n"
                          "{\"index\":2,\"a_setting\":0,\"b_setting\":1,\"a_detect\":0,\"b_detect\":0,\"b_minus\":1}\n");
    TrialReader reader(in);
    auto first = reader.next();
    ASSERT_TRUE(first);
    EXPECT_EQ(reader.line(), 1u);
    auto second = reader.next();
    ASSERT_TRUE(second);
    EXPECT_EQ(second->bob, Click::kMinus);
    EXPECT_FALSE(reader.next());
}

TEST(TrialFormat, Names) {
    EXPECT_EQ(parse_trial_format("jsonl"), TrialFormat::kJsonl);
    EXPECT_THROW(parse_trial_format("parquet"), NotFoundError);
    EXPECT_EQ(trial_format_for("x/run.jsonl"), TrialFormat::kJsonl);
    EXPECT_EQ(trial_format_for("x/run.txt"), TrialFormat::kCsv);
}

}  // namespace
}  // namespace chsim
