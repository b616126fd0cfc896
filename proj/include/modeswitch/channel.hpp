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
#include <complex>
#include <numbers>
#include <span>

#include <Eigen/Dense>

#include "modeswitch/errors.hpp"
#include "modeswitch/rng.hpp"
#include "modeswitch/specfun.hpp"

namespace modeswitch {

/// Length-N_t complex channel (or channel direction, or error) vector.
using ChannelVector = Eigen::VectorXcd;

/// U x N_t matrix whose rows are the conjugated user channels h_u^*.
using ChannelMatrix = Eigen::MatrixXcd;

/// Gauss-Markov fading: h[n] = rho h[n-1] + e[n], e ~ CN(0, eps_sq I).
class FadingParams {
public:
    /// Static channel.
    FadingParams() = default;

    /// Builds from the correlation coefficient; eps_sq = 1 - rho^2.
    static FadingParams from_rho(double rho) {
        if (!std::isfinite(rho)) throw DomainError("FadingParams: non-finite rho");
        FadingParams p;
        p.rho_ = std::clamp(rho, -1.0, 1.0);
        p.eps_sq_ = 1.0 - p.rho_ * p.rho_;
        return p;
    }

    double rho() const noexcept { return rho_; }
    double rho_sq() const noexcept { return rho_ * rho_; }
    double eps_sq() const noexcept { return eps_sq_; }

private:
    double rho_ = 1.0;
    double eps_sq_ = 0.0;
};

/// Clarke isotropic-scattering correlation rho = J0(2 pi fd Ts). The sign of
/// J0 is kept; rate formulas only consume rho^2.
inline FadingParams clarke_rho(double fd_ts) {
    if (!std::isfinite(fd_ts) || fd_ts < 0.0) throw DomainError("clarke_rho: fd_ts must be finite and >= 0");
    return FadingParams::from_rho(bessel_j0(2.0 * std::numbers::pi * fd_ts));
}

/// Normalized Doppler from mobility: fd Ts = v f_c T_s / c.
inline double normalized_doppler(double velocity_kmh, double carrier_ghz, double symbol_time_ms) {
    constexpr double c = 2.99792458e8;
    return (velocity_kmh / 3.6) * (carrier_ghz * 1e9) * (symbol_time_ms * 1e-3) / c;
}

/// i.i.d. CN(0, 1) entries.
inline ChannelVector draw_channel(int n_t, Rng& rng) {
    if (n_t < 1) throw DomainError("draw_channel: n_t must be >= 1");
    ChannelVector h(n_t);
    for (int i = 0; i < n_t; ++i) h[i] = rng.complex_normal();
    return h;
}

/// One step of the AR(1) process.
inline ChannelVector evolve_channel(const ChannelVector& h_prev, const FadingParams& params, Rng& rng) {
    ChannelVector h = params.rho() * h_prev;
    if (params.eps_sq() > 0.0) {
        for (Eigen::Index i = 0; i < h.size(); ++i) h[i] += rng.complex_normal(params.eps_sq());
    }
    return h;
}

/// Stacks user channels as conjugated rows.
inline ChannelMatrix stack_channels(std::span<const ChannelVector> users) {
    if (users.empty()) throw DomainError("stack_channels: need at least one user");
    const auto n_t = users.front().size();
    ChannelMatrix h(static_cast<Eigen::Index>(users.size()), n_t);
    for (std::size_t u = 0; u < users.size(); ++u) {
        if (users[u].size() != n_t) throw DomainError("stack_channels: inconsistent antenna counts");
        h.row(static_cast<Eigen::Index>(u)) = users[u].adjoint();
    }
    return h;
}

}  // namespace modeswitch
