/*
   Copyright 2026 The modeswitch Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "modeswitch/cli.hpp"

namespace cli = modeswitch::cli;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream s(line);
    for (std::string cell; std::getline(s, cell, ',');) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::vector<std::string> data_rows(const std::string& text) {
    std::vector<std::string> out;
    for (auto& l : lines_of(text)) {
        if (!l.empty() && l[0] != '#') out.push_back(l);
    }
    return out;
}

int run(const cli::RunConfig& c, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int rc = cli::run(c, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}

}  // namespace

TEST(Config, FileAndOverrides) {
    std::istringstream file(
        "# doppler sweep\n"
        "[scenario]\n"
        "nt = 4\n"
        "fd_ts = 0.05   # normalized Doppler\n"
        "bits = inf\n"
        "snr_min = -5\n"
        "format = \"json-lines\"\n");
    cli::RunConfig c;
    cli::load_config(file, c);
    EXPECT_EQ(c.n_t, 4);
    EXPECT_DOUBLE_EQ(*c.fd_ts, 0.05);
    EXPECT_FALSE(c.bits.has_value());
    EXPECT_DOUBLE_EQ(*c.snr_min, -5.0);
    EXPECT_EQ(c.format, cli::Format::json_lines);
    cli::apply_setting(c, "bits", "12");
    EXPECT_EQ(*c.bits, 12);
}

TEST(Config, PhysicalDoppler) {
    cli::RunConfig c;
    EXPECT_NEAR(c.resolved_fd_ts(), 0.0185313, 1e-7);
    c.velocity_kmh = 30.0;
    EXPECT_NEAR(c.resolved_fd_ts(), 3.0 * 0.01853134, 1e-7);
    c.fd_ts = 0.01;
    try {
        c.validate();
        FAIL();
    } catch (const cli::ConfigError& e) {
        EXPECT_EQ(e.field(), "fdts");
    }
}

TEST(Config, ErrorsNameTheField) {
    cli::RunConfig c;
    auto field_of = [](auto&& fn) -> std::string {
        try {
            fn();
        } catch (const cli::ConfigError& e) {
            return e.field();
        }
        return "";
    };
    EXPECT_EQ(field_of([&] { cli::apply_setting(c, "nt", "four"); }), "nt");
    EXPECT_EQ(field_of([&] { cli::apply_setting(c, "snr_step", "1x"); }), "snr-step");
    EXPECT_EQ(field_of([&] { cli::apply_setting(c, "format", "xml"); }), "format");
    EXPECT_EQ(field_of([&] { cli::apply_setting(c, "colour", "red"); }), "colour");
    std::istringstream bad("nt 4\n");
    EXPECT_EQ(field_of([&] { cli::load_config(bad, c); }), "config");

    cli::RunConfig d;
    d.n_t = 0;
    std::string err;
    EXPECT_EQ(run(d, nullptr, &err), cli::kConfigError);
    EXPECT_NE(err.find("nt"), std::string::npos);
    d = {};
    d.bits = 0;
    EXPECT_EQ(run(d, nullptr, &err), cli::kConfigError);
    EXPECT_NE(err.find("bits"), std::string::npos);
    d = {};
    d.snr_step = 0.0;
    EXPECT_EQ(run(d), cli::kConfigError);
}

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(cli::format_number(0.1), "0.1");
    EXPECT_EQ(cli::format_number(-2.5e-7), "-2.5e-07");
    EXPECT_EQ(cli::format_number(30.0), "30");
    const double x = 0.1 + 0.2;
    EXPECT_EQ(std::stod(cli::format_number(x)), x);
}

TEST(CmdRates, DefaultGridShape) {
    cli::RunConfig c;
    c.trials = 0;
    std::string out;
    ASSERT_EQ(run(c, &out), cli::kOk);
    const auto rows = data_rows(out);
    ASSERT_EQ(rows.size(), 1u + 31u * 4u);
    EXPECT_EQ(rows[0], "snr_db,M,rate_analytic,rate_sim_mean,rate_sim_stderr,selected");
    int selected = 0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto cells = split(rows[k]);
        ASSERT_EQ(cells.size(), 6u) << rows[k];
        EXPECT_EQ(cells[3], "");
        selected += cells[5] == "true";
        EXPECT_GE(std::stod(cells[2]), 0.0);
    }
    EXPECT_EQ(selected, 31);
    EXPECT_NE(out.find("# envelope"), std::string::npos);
}

TEST(CmdRates, SimulationColumnsAndDeterminism) {
    cli::RunConfig c;
    c.trials = 2000;
    c.snr_min = 0.0;
    c.snr_max = 10.0;
    c.snr_step = 5.0;
    c.threads = 1;
    std::string a, b;
    ASSERT_EQ(run(c, &a), cli::kOk);
    c.threads = 3;
    ASSERT_EQ(run(c, &b), cli::kOk);
    EXPECT_EQ(a, b);
    for (std::size_t k = 1; k < data_rows(a).size(); ++k) {
        const auto cells = split(data_rows(a)[k]);
        const double analytic = std::stod(cells[2]);
        const double sim = std::stod(cells[3]);
        const double se = std::stod(cells[4]);
        EXPECT_GT(se, 0.0);
        EXPECT_LT(std::abs(analytic - sim), std::max(0.05 * sim, 3.0 * se)) << data_rows(a)[k];
    }
}

TEST(CmdRates, JsonLinesUsesSameFields) {
    cli::RunConfig c;
    c.trials = 0;
    c.snr_min = 10.0;
    c.snr_max = 10.0;
    c.format = cli::Format::json_lines;
    std::string out;
    ASSERT_EQ(run(c, &out), cli::kOk);
    int rows = 0;
    for (const auto& line : lines_of(out)) {
        const auto j = nlohmann::ordered_json::parse(line);
        if (j.contains("meta")) continue;
        ++rows;
        std::vector<std::string> keys;
        for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
        EXPECT_EQ(keys, (std::vector<std::string>{"snr_db", "M", "rate_analytic", "rate_sim_mean", "rate_sim_stderr",
                                                  "selected"}));
        EXPECT_TRUE(j["rate_sim_mean"].is_null());
        EXPECT_TRUE(j["selected"].is_boolean());
    }
    EXPECT_EQ(rows, 4);
}

TEST(CmdRegions, SingleCell) {
    cli::RunConfig c;
    c.command = cli::Command::regions;
    c.snr_min = 10.0;
    c.snr_max = 10.0;
    c.y_min = 0.0185;
    c.y_max = 0.0185;
    c.y_points = 1;
    std::string out;
    ASSERT_EQ(run(c, &out), cli::kOk);
    const auto rows = data_rows(out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "snr_db,y_value,m_star,rate_m1,rate_m2,rate_m3,rate_m4");
    EXPECT_EQ(split(rows[1])[2], "3");
    EXPECT_NE(out.find("# threshold mode=3 present=true"), std::string::npos);
}

TEST(CmdValidate, ReportShapeAndCorruptedTolerance) {
    cli::RunConfig c;
    c.command = cli::Command::validate;
    c.trials = 4000;
    const auto checks = cli::run_validation_checks(c);
    std::string out;
    const int rc = run(c, &out);
    EXPECT_TRUE(rc == cli::kOk || rc == cli::kValidationFailed);
    const auto rows = data_rows(out);
    ASSERT_EQ(rows.size(), checks.size() + 1);
    EXPECT_EQ(rows[0], "check,status,measured,target,tolerance,tolerance_kind");
    for (std::size_t k = 0; k < checks.size(); ++k) {
        const auto cells = split(rows[k + 1]);
        EXPECT_EQ(cells[0], checks[k].name);
        EXPECT_EQ(cells[1], checks[k].passed() ? "PASS" : "FAIL");
    }
    c.tolerance_scale = 0.0;
    EXPECT_EQ(run(c), cli::kValidationFailed);
}
