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

// Closed-form and approximate ergodic rates (bits/s/Hz) for eigen-beamforming
// and zero-forcing under perfect, delayed, quantized, and delayed+quantized
// CSIT, plus the per-mode sum-rate table used by mode selection.

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <tuple>
#include <vector>

#include "modeswitch/errors.hpp"
#include "modeswitch/quadrature.hpp"
#include "modeswitch/specfun.hpp"

namespace modeswitch {

inline constexpr double kLog2e = std::numbers::log2e;

/// Feedback bits per user; nullopt means unquantized CSIT.
using FeedbackBits = std::optional<int>;

/// Mean quantization error 2^{-B/(N_t-1)}; zero for unquantized feedback.
inline double quantization_delta(int n_t, FeedbackBits bits) {
    if (!bits) return 0.0;
    if (n_t < 2) throw DomainError("quantization_delta: n_t must be >= 2");
    return std::exp2(-static_cast<double>(*bits) / (n_t - 1));
}

/// One homogeneous scenario at one transmission mode.
struct ScenarioParams {
    int n_t = 4;
    double snr = 1.0;  // P, linear; noise power is 1
    double rho_sq = 1.0;
    double eps_sq = 0.0;
    FeedbackBits bits;
    int mode = 1;

    bool delayed() const noexcept { return eps_sq > 0.0; }
    bool quantized() const noexcept { return bits.has_value(); }
    double delta() const { return quantization_delta(n_t, bits); }

    void validate() const {
        if (n_t < 1) throw DomainError("ScenarioParams: n_t must be >= 1");
        if (mode < 1 || mode > n_t) throw DomainError("ScenarioParams: need 1 <= M <= n_t");
        if (!(snr >= 0.0) || !std::isfinite(snr)) throw DomainError("ScenarioParams: snr must be finite and >= 0");
        if (!(rho_sq >= 0.0 && rho_sq <= 1.0) || !(eps_sq >= 0.0)) {
            throw DomainError("ScenarioParams: need 0 <= rho_sq <= 1 and eps_sq >= 0");
        }
        if (std::abs(rho_sq + eps_sq - 1.0) > 1e-12) throw DomainError("ScenarioParams: rho_sq + eps_sq must equal 1");
        if (bits && *bits < 1) throw DomainError("ScenarioParams: bits must be >= 1");
        if (bits && n_t < 2) throw DomainError("ScenarioParams: quantized feedback needs n_t >= 2");
    }
};

/// Sum rate per mode, M = 1..N_t.
struct ModeRateTable {
    std::vector<double> rates;  // rates[M-1]

    int max_mode() const noexcept { return static_cast<int>(rates.size()); }
    double at(int mode) const {
        if (mode < 1 || mode > max_mode()) throw DomainError("ModeRateTable: mode out of range");
        return rates[static_cast<std::size_t>(mode - 1)];
    }
};

/// E[log2(1 + gamma |h^* h~|^2)] with h ~ CN(0, I_{N_t}):
/// log2(e) sum_k e^{1/gamma} Gamma(-k, 1/gamma) / gamma^k.
inline double rate_bf_perfect(double gamma, int n_t) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("rate_bf_perfect: gamma must be finite and >= 0");
    if (n_t < 1) throw DomainError("rate_bf_perfect: n_t must be >= 1");
    if (gamma == 0.0) return 0.0;
    const double x = 1.0 / gamma;
    double sum = 0.0;
    for (int k = 0; k < n_t; ++k) sum += gamma_upper_scaled(-k, x) * std::pow(x, k);
    return kLog2e * sum;
}

/// Perfect-CSIT zero-forcing sum rate: M R_BF(P/M, N_t - M + 1).
inline double rate_zf_perfect(double snr, int mode, int n_t) {
    if (mode < 1 || mode > n_t) throw DomainError("rate_zf_perfect: need 1 <= M <= n_t");
    return mode * rate_bf_perfect(snr / mode, n_t - mode + 1);
}

/// Limited-feedback (RVQ, 2^B codewords) eigen-beamforming rate.
///
/// The quantization-loss integral is taken in y = 1 - x, where the codebook
/// weight (1 - y^{N_t-1})^{2^B} falls from 1 to 0 around y ~ 2^{-B/(N_t-1)};
/// panels are laid out geometrically from that scale.
inline double rate_bf_limited_feedback(double snr, int n_t, FeedbackBits bits, const QuadratureSpec& spec = {}) {
    if (!(snr >= 0.0) || !std::isfinite(snr)) throw DomainError("rate_bf_limited_feedback: snr must be finite and >= 0");
    if (!bits) return rate_bf_perfect(snr, n_t);
    if (*bits < 1) throw DomainError("rate_bf_limited_feedback: bits must be >= 1");
    if (n_t < 2) throw DomainError("rate_bf_limited_feedback: n_t must be >= 2");
    if (snr == 0.0) return 0.0;

    const double inv_snr = 1.0 / snr;
    double head = 0.0;
    for (int k = 0; k < n_t; ++k) head += expint_n_scaled(k + 1, inv_snr);

    const double log_codebook = *bits * std::numbers::ln2;
    const double dof = n_t - 1.0;
    auto integrand = [=](double y) {
        const double x = 1.0 - y;
        if (x <= 0.0 || y <= 0.0) return y <= 0.0 ? n_t * expint_n_scaled(n_t + 1, inv_snr) : 0.0;
        const double miss = -std::log1p(-std::pow(y, dof));  // -log(1 - y^{N_t-1})
        const double weight = std::exp(-std::exp(log_codebook + std::log(miss)));
        if (weight == 0.0) return 0.0;
        return weight * (n_t / x) * expint_n_scaled(n_t + 1, inv_snr / x);
    };
    const double scale = quantization_delta(n_t, bits);
    std::vector<QuadraturePiece> pieces;
    double lo = 0.0;
    double hi = std::min(scale, 1.0);
    while (true) {
        pieces.push_back({integrand, lo, hi});
        if (hi >= 1.0) break;
        lo = hi;
        hi = std::min(hi * 4.0, 1.0);
    }
    const double loss = integrate_pieces(pieces, spec).value;
    return kLog2e * std::max(head - loss, 0.0);
}

/// Beamforming with delayed and quantized CSIT: the limited-feedback rate at
/// the effective SNR rho^2 P.
inline double rate_bf_dq(double snr, double rho_sq, int n_t, FeedbackBits bits, const QuadratureSpec& spec = {}) {
    if (!(rho_sq >= 0.0 && rho_sq <= 1.0)) throw DomainError("rate_bf_dq: rho_sq must lie in [0, 1]");
    return rate_bf_limited_feedback(rho_sq * snr, n_t, bits, spec);
}

/// Mean residual inter-user interference seen by one user under ZF with
/// delayed, quantized CSIT.
inline double residual_interference_mean(double snr, int mode, double rho_sq, double eps_sq, int n_t,
                                         FeedbackBits bits) {
    if (mode < 1) throw DomainError("residual_interference_mean: mode must be >= 1");
    const double quant = bits ? rho_sq * (static_cast<double>(n_t) / (n_t - 1)) * quantization_delta(n_t, bits) : 0.0;
    return (1.0 - 1.0 / mode) * snr * (quant + eps_sq);
}

/// Partial-fraction coefficients of the density of a sum of L Exp(d1) and
/// L Exp(d2) variables: f(x) = sum_j sum_i a_i^{(j)} x^i e^{-x/d_j}.
struct Theorem1Coefficients {
    std::vector<double> first;   // a^{(1)}, length L
    std::vector<double> second;  // a^{(2)}, length L
    double delta1 = 0.0;         // scales actually used (after any perturbation)
    double delta2 = 0.0;
};

namespace detail {

// a_i for the component with scale `self` against `other`.
inline double t1_coefficient(double self, double other, int big_l, int i) {
    const double log_a = std::lgamma(2.0 * big_l - 1.0 - i) - std::lgamma(big_l) - std::lgamma(i + 1.0) -
                         std::lgamma(static_cast<double>(big_l - i));
    const double own = self / (self - other);
    const double cross = other / (other - self);
    return std::exp(log_a - (i + 1.0) * std::log(self)) * std::pow(own, big_l) * std::pow(cross, big_l - 1 - i);
}

}  // namespace detail

/// Coefficients for L = M - 1 interferers. When the scales coincide to 1e-6
/// relative they are pushed apart symmetrically by 1e-6 of the larger one.
inline Theorem1Coefficients theorem1_coefficients(double delta1, double delta2, int big_l) {
    if (!(delta1 > 0.0) || !(delta2 > 0.0) || !std::isfinite(delta1) || !std::isfinite(delta2)) {
        throw DomainError("theorem1_coefficients: scales must be finite and > 0");
    }
    if (big_l < 1) throw DomainError("theorem1_coefficients: L must be >= 1");
    const double top = std::max(delta1, delta2);
    if (std::abs(delta1 - delta2) < 1e-6 * top) {
        const double h = 1e-6 * top;
        if (delta1 >= delta2) {
            delta1 += h;
            delta2 -= h;
        } else {
            delta1 -= h;
            delta2 += h;
        }
    }
    Theorem1Coefficients c;
    c.delta1 = delta1;
    c.delta2 = delta2;
    c.first.resize(static_cast<std::size_t>(big_l));
    c.second.resize(static_cast<std::size_t>(big_l));
    for (int i = 0; i < big_l; ++i) {
        c.first[static_cast<std::size_t>(i)] = detail::t1_coefficient(delta1, delta2, big_l, i);
        c.second[static_cast<std::size_t>(i)] = detail::t1_coefficient(delta2, delta1, big_l, i);
    }
    return c;
}

namespace detail {

// The quadruple sum for fixed (alpha, d1, d2).
inline double theorem1_sum(double alpha, double d1, double d2, int n_t, int mode, const QuadratureSpec& spec) {
    const int big_l = mode - 1;
    const auto coeffs = theorem1_coefficients(d1, d2, big_l);
    const std::array<const std::vector<double>*, 2> a{&coeffs.first, &coeffs.second};
    const std::array<double, 2> scale{coeffs.delta1, coeffs.delta2};
    const double log_alpha = std::log(alpha);
    std::map<std::tuple<int, int, int>, double> cache;
    double total = 0.0;
    for (int i = 0; i <= n_t - big_l - 1; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < big_l; ++k) {
                for (int l = 0; l <= i; ++l) {
                    const int order = l + k + 1;
                    auto key = std::make_tuple(j, i, order);
                    auto it = cache.find(key);
                    if (it == cache.end()) {
                        it = cache.emplace(key, i_hat(1.0 / alpha, alpha / scale[static_cast<std::size_t>(j)], i, order, spec)).first;
                    }
                    const double log_w = std::lgamma(l + k + 1.0) - std::lgamma(l + 1.0) - std::lgamma(i - l + 1.0) +
                                         (l + k - i + 1.0) * log_alpha;
                    total += (*a[static_cast<std::size_t>(j)])[static_cast<std::size_t>(k)] * std::exp(log_w) * it->second;
                }
            }
        }
    }
    return kLog2e * total;
}

// Half-width (relative) of the band around d1 = d2 where the partial-fraction
// sum loses too many digits to cancellation; sized so the coefficient
// amplification ((1+t)/2t)^{2L-1} stays below 1e4.
inline double degeneracy_band(int big_l) {
    const double r = std::pow(1e4, 1.0 / (2.0 * big_l - 1.0));
    return std::clamp(1.0 / (2.0 * r - 1.0), 1e-3, 0.3);
}

}  // namespace detail

/// Per-user ZF rate with both delayed and quantized CSIT (M >= 2).
///
/// Inside the near-degenerate band |d1 - d2| / (d1 + d2) < tau the sum is
/// evaluated at t = tau, 1.5 tau, 2 tau on the symmetric path
/// d1,2 = c (1 +- t) and interpolated as a quadratic in t^2 (the rate is even
/// in t); the band edge reproduces the direct evaluation exactly.
inline double rate_zf_dq_user(const ScenarioParams& p, const QuadratureSpec& spec = {});

/// Per-user ZF rate with delayed (unquantized) CSIT (M >= 2).
inline double rate_zf_delay_only_user(double snr, int mode, double rho_sq, double eps_sq, int n_t,
                                      const QuadratureSpec& spec = {}) {
    if (mode < 2 || mode > n_t) throw DomainError("rate_zf_delay_only_user: need 2 <= M <= n_t");
    if (!(snr >= 0.0) || !(rho_sq >= 0.0) || !(eps_sq >= 0.0)) throw DomainError("rate_zf_delay_only_user: negative input");
    if (snr == 0.0 || rho_sq == 0.0) return 0.0;
    const double alpha = rho_sq * snr / mode;
    const double beta = eps_sq * snr / mode;
    const int div = n_t - mode + 1;
    if (beta == 0.0) return rate_bf_perfect(alpha, div);
    const int big_l = mode - 1;
    const double log_alpha = std::log(alpha);
    const double log_beta = std::log(beta);
    double total = 0.0;
    for (int i = 0; i <= n_t - big_l - 1; ++i) {
        for (int l = 0; l <= i; ++l) {
            const double log_w = std::lgamma(big_l + l + 0.0) - std::lgamma(l + 1.0) - std::lgamma(big_l + 0.0) +
                                 (big_l + l - i) * log_alpha - big_l * log_beta - std::lgamma(i - l + 1.0);
            total += std::exp(log_w) * i_hat(1.0 / alpha, alpha / beta, i, big_l + l, spec);
        }
    }
    return kLog2e * total;
}

inline double rate_zf_dq_user(const ScenarioParams& p, const QuadratureSpec& spec) {
    p.validate();
    if (p.mode < 2) throw DomainError("rate_zf_dq_user: requires M >= 2");
    if (!p.quantized()) throw DomainError("rate_zf_dq_user: requires finite feedback bits");
    if (p.snr == 0.0 || p.rho_sq == 0.0) return 0.0;
    const double alpha = p.rho_sq * p.snr / p.mode;
    const double d1 = alpha * p.delta();
    const double d2 = p.eps_sq * p.snr / p.mode;
    if (d2 == 0.0) {
        // Quantization only: delay-only form with eps^2 -> delta, rho^2 -> 1.
        return rate_zf_delay_only_user(p.snr, p.mode, 1.0, p.delta(), p.n_t, spec);
    }
    const double tau = detail::degeneracy_band(p.mode - 1);
    const double centre = 0.5 * (d1 + d2);
    const double t0 = (d1 - d2) / (d1 + d2);
    if (std::abs(t0) >= tau) return detail::theorem1_sum(alpha, d1, d2, p.n_t, p.mode, spec);

    const std::array<double, 3> ts{tau, 1.5 * tau, 2.0 * tau};
    std::array<double, 3> s{}, g{};
    for (std::size_t k = 0; k < 3; ++k) {
        s[k] = ts[k] * ts[k];
        g[k] = detail::theorem1_sum(alpha, centre * (1.0 + ts[k]), centre * (1.0 - ts[k]), p.n_t, p.mode, spec);
    }
    const double s0 = t0 * t0;
    double value = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        double w = 1.0;
        for (std::size_t q = 0; q < 3; ++q) {
            if (q != k) w *= (s0 - s[q]) / (s[k] - s[q]);
        }
        value += w * g[k];
    }
    return value;
}

/// Sum rate of one mode, dispatching on which impairments are active.
/// M = 1 uses the (quantized) beamforming rate at effective SNR rho^2 P.
inline double sum_rate(const ScenarioParams& p, const QuadratureSpec& spec = {}) {
    p.validate();
    const int n_t = p.n_t;
    const int m = p.mode;
    if (!p.delayed() && !p.quantized()) return rate_zf_perfect(p.snr, m, n_t);
    if (m == 1) return rate_bf_dq(p.snr, p.rho_sq, n_t, p.bits, spec);
    if (!p.quantized()) return m * rate_zf_delay_only_user(p.snr, m, p.rho_sq, p.eps_sq, n_t, spec);
    if (!p.delayed()) return m * rate_zf_delay_only_user(p.snr, m, 1.0, p.delta(), n_t, spec);
    return m * rate_zf_dq_user(p, spec);
}

/// Sum rates for every mode M = 1..N_t at the scenario's other parameters.
inline ModeRateTable mode_rate_table(ScenarioParams p, const QuadratureSpec& spec = {}) {
    ModeRateTable table;
    table.rates.reserve(static_cast<std::size_t>(p.n_t));
    for (int m = 1; m <= p.n_t; ++m) {
        p.mode = m;
        table.rates.push_back(sum_rate(p, spec));
    }
    return table;
}

}  // namespace modeswitch
