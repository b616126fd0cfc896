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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "modeswitch/cli.hpp"

namespace ms = modeswitch::cli;

int main(int argc, char** argv) {
    CLI::App app{"Ergodic rates and transmission-mode selection for MU-MIMO with delayed, quantized CSIT"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default(false);

    // Flags are collected as raw strings and applied after the config file,
    // so the command line always overrides it.
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    auto flag = [&](CLI::App* sub, const std::string& name, const std::string& help) {
        sub->add_option_function<std::string>(
            "--" + name, [&overrides, name](const std::string& v) { overrides.emplace_back(name, v); }, help);
    };

    std::string command;
    for (const char* name : {"rates", "regions", "validate"}) {
        auto* sub = app.add_subcommand(name);
        sub->callback([&command, name] { command = name; });
        sub->add_option("--config", config_path, "flat key = value file; flags override it");
        flag(sub, "nt", "transmit antennas");
        flag(sub, "users", "user pool size U (default: nt)");
        flag(sub, "snr-min", "lowest SNR in dB");
        flag(sub, "snr-max", "highest SNR in dB");
        flag(sub, "snr-step", "SNR step in dB");
        flag(sub, "fdts", "normalized Doppler f_d T_s");
        flag(sub, "velocity", "user speed in km/h");
        flag(sub, "carrier", "carrier frequency in GHz");
        flag(sub, "symbol-time", "feedback delay / symbol time in ms");
        flag(sub, "bits", "feedback bits per user, or inf");
        flag(sub, "trials", "Monte Carlo trials per point (0: analytic only)");
        flag(sub, "seed", "master seed");
        flag(sub, "out", "output path (default: stdout)");
        flag(sub, "format", "csv | json-lines");
        flag(sub, "threads", "worker cap (default: MODESWITCH_THREADS or hardware)");
        flag(sub, "codebook", "fresh | explicit | fixed");
        if (std::string(name) == "regions") {
            flag(sub, "y-axis", "doppler | bits");
            flag(sub, "y-min", "lowest y value");
            flag(sub, "y-max", "highest y value");
            flag(sub, "y-points", "number of Doppler points (log-spaced)");
        }
        if (std::string(name) == "validate") flag(sub, "tolerance-scale", "multiplies every check tolerance");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : ms::kConfigError;
    }

    ms::RunConfig config;
    try {
        if (!config_path.empty()) ms::load_config_file(config_path, config);
        ms::apply_setting(config, "command", command);
        for (const auto& [key, value] : overrides) ms::apply_setting(config, key, value);
    } catch (const ms::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ms::kConfigError;
    }

    if (config.out.empty()) return ms::run(config, std::cout, std::cerr);
    std::ofstream out(config.out, std::ios::binary);
    if (!out) {
        std::cerr << "config error: out: cannot open '" << config.out << "'\n";
        return ms::kConfigError;
    }
    return ms::run(config, out, std::cerr);
}
