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

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "modeswitch/channel.hpp"
#include "modeswitch/errors.hpp"
#include "modeswitch/parallel.hpp"
#include "modeswitch/rates.hpp"

namespace modeswitch {

/// Throughput-maximizing mode; ties go to the smaller M (fewer users feed back).
inline int select_mode(const ModeRateTable& table) {
    if (table.rates.empty()) throw DomainError("select_mode: empty rate table");
    int best = 1;
    for (int m = 2; m <= table.max_mode(); ++m) {
        if (table.at(m) > table.at(best)) best = m;
    }
    return best;
}

/// Dual-mode baseline: the better of SU (M = 1) and full MU (M = N_t).
inline int select_mode_dual(const ModeRateTable& table) {
    if (table.rates.empty()) throw DomainError("select_mode_dual: empty rate table");
    const int full = table.max_mode();
    return table.at(full) > table.at(1) ? full : 1;
}

enum class AxisKind { doppler, bits };

/// SNR points (dB) on x, and either normalized Doppler or feedback bits on y.
struct AxisSpec {
    std::vector<double> snr_db;
    AxisKind kind = AxisKind::doppler;
    std::vector<double> y;
};

struct RegionGrid {
    std::vector<double> x_axis;
    AxisKind kind = AxisKind::doppler;
    std::vector<double> y_axis;
    std::vector<std::vector<int>> cells;             // cells[i][j]: M* at snr i, y j
    std::vector<std::vector<ModeRateTable>> rates;   // rates[i][j]
};

/// Where a mode stops appearing along y.
struct ModeThreshold {
    int mode = 0;
    bool present = false;  // mode selected somewhere on the grid
    bool bounded = false;  // a present/absent transition exists along y
    double lower = 0.0;    // adjacent grid values straddling the transition
    double upper = 0.0;
    double midpoint = 0.0;
    double refined = 0.0;  // bisection to 3 significant figures (doppler only)
};

inline std::vector<double> linear_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo) throw DomainError("linear_grid: need step > 0 and hi >= lo");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(lo + static_cast<double>(k) * step);
    return out;
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || hi < lo || points < 1) throw DomainError("log_grid: need 0 < lo <= hi and points >= 1");
    if (points == 1) return {lo};
    std::vector<double> out;
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int k = 0; k < points; ++k) out.push_back(std::pow(10.0, a + (b - a) * k / (points - 1)));
    return out;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Scenario for one grid cell.
inline ScenarioParams region_cell_params(const ScenarioParams& base, AxisKind kind, double snr_db, double y) {
    ScenarioParams p = base;
    p.snr = db_to_linear(snr_db);
    if (kind == AxisKind::doppler) {
        const auto f = clarke_rho(y);
        p.rho_sq = f.rho_sq();
        p.eps_sq = f.eps_sq();
    } else {
        if (y < 1.0 || y != std::floor(y)) throw DomainError("region_sweep: bits axis values must be integers >= 1");
        p.bits = static_cast<int>(y);
    }
    return p;
}

namespace detail {

inline void check_monotone(const std::vector<double>& v, const char* what) {
    if (v.empty()) throw DomainError(std::string("region_sweep: empty ") + what);
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (!(v[k] > v[k - 1])) throw DomainError(std::string("region_sweep: ") + what + " must be increasing");
    }
}

}  // namespace detail

/// Evaluates the analytic mode-rate table and M* at every (SNR, y) cell.
/// `base` supplies n_t, plus bits for a Doppler sweep or rho/eps for a bits sweep.
inline RegionGrid region_sweep(const AxisSpec& axis, const ScenarioParams& base, unsigned threads = 0,
                               const QuadratureSpec& spec = {}) {
    detail::check_monotone(axis.snr_db, "SNR axis");
    detail::check_monotone(axis.y, "y axis");
    RegionGrid grid;
    grid.x_axis = axis.snr_db;
    grid.kind = axis.kind;
    grid.y_axis = axis.y;
    const std::size_t nx = axis.snr_db.size();
    const std::size_t ny = axis.y.size();
    grid.cells.assign(nx, std::vector<int>(ny, 0));
    grid.rates.assign(nx, std::vector<ModeRateTable>(ny));
    parallel_for(nx * ny, threads, [&](std::size_t k) {
        const std::size_t i = k / ny;
        const std::size_t j = k % ny;
        auto table = mode_rate_table(region_cell_params(base, axis.kind, axis.snr_db[i], axis.y[j]), spec);
        grid.cells[i][j] = select_mode(table);
        grid.rates[i][j] = std::move(table);
    });
    return grid;
}

/// Extent of `mode` along y: the last y at which it is selected for some SNR
/// before it disappears. Doppler boundaries are refined by bisection on the
/// same SNR grid.
inline ModeThreshold extract_threshold(const RegionGrid& grid, int mode, const ScenarioParams& base,
                                       const QuadratureSpec& spec = {}) {
    ModeThreshold th;
    th.mode = mode;
    const std::size_t ny = grid.y_axis.size();
    std::vector<bool> present(ny, false);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < grid.x_axis.size(); ++i) present[j] = present[j] || grid.cells[i][j] == mode;
        th.present = th.present || present[j];
    }
    if (!th.present) return th;

    // Doppler: mode vanishes as fd_ts grows. Bits: mode appears as B grows.
    const bool doppler = grid.kind == AxisKind::doppler;
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        const bool edge = doppler ? (present[j] && !present[j + 1]) : (!present[j] && present[j + 1]);
        if (edge) {
            th.bounded = true;
            th.lower = grid.y_axis[j];
            th.upper = grid.y_axis[j + 1];
            th.midpoint = 0.5 * (th.lower + th.upper);
            th.refined = th.midpoint;
            if (!doppler) break;
        }
    }
    if (!th.bounded || !doppler) return th;

    auto present_at = [&](double y) {
        for (double snr_db : grid.x_axis) {
            if (select_mode(mode_rate_table(region_cell_params(base, grid.kind, snr_db, y), spec)) == mode) return true;
        }
        return false;
    };
    double lo = th.lower;
    double hi = th.upper;
    while ((hi - lo) > 5e-4 * lo) {
        const double mid = 0.5 * (lo + hi);
        (present_at(mid) ? lo : hi) = mid;
    }
    const double mid = 0.5 * (lo + hi);
    const double scale = std::pow(10.0, std::floor(std::log10(mid)) - 2.0);
    th.refined = std::round(mid / scale) * scale;
    return th;
}

}  // namespace modeswitch
