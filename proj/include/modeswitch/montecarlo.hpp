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

// Monte Carlo estimation of ergodic rates under the full physical model:
// one-symbol-delayed Gauss-Markov channels, RVQ feedback, ZF/eigen
// beamforming, and the exact SINR. Trial i always draws from
// Rng::stream(seed, i), and partial results are merged in fixed block order,
// so estimates do not depend on the number of worker threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "modeswitch/channel.hpp"
#include "modeswitch/errors.hpp"
#include "modeswitch/parallel.hpp"
#include "modeswitch/precoding.hpp"
#include "modeswitch/quantization.hpp"
#include "modeswitch/rates.hpp"
#include "modeswitch/rng.hpp"

namespace modeswitch {

struct Impairments {
    bool delay = true;
    bool quantization = true;
};

/// How RVQ codebooks are realized across trials.
enum class CodebookMode {
    fresh,           // new codebook every trial, sampled exactly without materializing it
    fresh_explicit,  // new codebook every trial, drawn and searched (small B only)
    fixed,           // one codebook per user for the whole run
};

struct TrialPlan {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    ScenarioParams scenario;
    Impairments impairments;
    CodebookMode codebook = CodebookMode::fresh;
    int users = 0;         // U; 0 means U = N_t
    unsigned threads = 0;  // 0: MODESWITCH_THREADS, else hardware concurrency

    void validate() const {
        if (trials < 1) throw DomainError("TrialPlan: trials must be >= 1");
        scenario.validate();
        if (users != 0 && users < scenario.mode) throw DomainError("TrialPlan: users must be >= mode");
    }
};

struct RateEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

struct SimulationResult {
    RateEstimate sum_rate;
    RateEstimate per_user;
    RateEstimate interference;   // mean (P/M) sum_{u' != u} |h_u^* f_u'|^2 per user
    RateEstimate signal_gain;    // mean |h_u^* f_u|^2 per user (power-free)
    std::uint64_t resampled = 0; // trials redrawn after a singular report
};

namespace detail {

// Streaming mean/variance with an order-fixed pairwise merge.
struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept {
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }

    static Moments merge(const Moments& a, const Moments& b) noexcept {
        if (a.n == 0.0) return b;
        if (b.n == 0.0) return a;
        Moments r;
        r.n = a.n + b.n;
        const double d = b.mean - a.mean;
        r.mean = a.mean + d * (b.n / r.n);
        r.m2 = a.m2 + b.m2 + d * d * (a.n * b.n / r.n);
        return r;
    }

    RateEstimate estimate(double scale = 1.0) const {
        RateEstimate e;
        e.trials = static_cast<std::uint64_t>(n);
        e.mean = scale * mean;
        e.std_error = n > 1.0 ? std::abs(scale) * std::sqrt(m2 / (n - 1.0) / n) : 0.0;
        return e;
    }
};

inline Moments merge_all(std::span<const Moments> parts) {
    if (parts.empty()) return {};
    if (parts.size() == 1) return parts[0];
    const auto half = parts.size() / 2;
    return Moments::merge(merge_all(parts.first(half)), merge_all(parts.subspan(half)));
}

inline constexpr std::uint64_t kBlockTrials = 1024;

// Per-trial channel gains, independent of transmit power.
struct TrialGains {
    std::vector<double> signal;        // |h_u^* f_u|^2
    std::vector<double> interference;  // sum_{u' != u} |h_u^* f_u'|^2
};

class TrialRunner {
public:
    explicit TrialRunner(const TrialPlan& plan) : plan_(plan) {
        const auto& sc = plan.scenario;
        quantize_ = plan.impairments.quantization && sc.bits.has_value();
        if (plan.impairments.delay) fading_ = FadingParams::from_rho(std::sqrt(sc.rho_sq));
        users_ = plan.users == 0 ? sc.n_t : plan.users;
        if (quantize_ && plan.codebook == CodebookMode::fixed) {
            for (int u = 0; u < users_; ++u) {
                auto rng = Rng::stream(~plan.seed, static_cast<std::uint64_t>(u));
                codebooks_.push_back(draw_codebook(sc.n_t, *sc.bits, rng));
            }
        }
    }

    TrialGains run(std::uint64_t trial, std::uint64_t& resampled) const {
        auto rng = Rng::stream(plan_.seed, trial);
        const auto& sc = plan_.scenario;
        const int m = sc.mode;
        const auto served = select_users(users_, m, rng);
        for (int attempt = 0; attempt < 1000; ++attempt) {
            ChannelMatrix now(m, sc.n_t);
            ChannelMatrix reported(m, sc.n_t);
            for (int u = 0; u < m; ++u) {
                const ChannelVector prev = draw_channel(sc.n_t, rng);
                now.row(u) = evolve_channel(prev, fading_, rng).adjoint();
                reported.row(u) = report(prev, served[static_cast<std::size_t>(u)], rng).adjoint();
            }
            try {
                const auto precoders = zf_precoders(reported);
                const Eigen::MatrixXd g = (now * precoders.vectors).cwiseAbs2();
                TrialGains out;
                out.signal.resize(static_cast<std::size_t>(m));
                out.interference.resize(static_cast<std::size_t>(m));
                for (int u = 0; u < m; ++u) {
                    out.signal[static_cast<std::size_t>(u)] = g(u, u);
                    out.interference[static_cast<std::size_t>(u)] = std::max(g.row(u).sum() - g(u, u), 0.0);
                }
                return out;
            } catch (const SingularityError&) {
                ++resampled;
            }
        }
        throw SingularityError("Monte Carlo: reported channels singular on 1000 consecutive draws");
    }

private:
    ChannelVector report(const ChannelVector& prev, int user, Rng& rng) const {
        if (!quantize_) return prev / prev.norm();
        const int bits = *plan_.scenario.bits;
        switch (plan_.codebook) {
        case CodebookMode::fresh:
            return sample_rvq_direction(prev, bits, rng);
        case CodebookMode::fresh_explicit: {
            const auto cb = draw_codebook(plan_.scenario.n_t, bits, rng);
            return cb.vectors.col(static_cast<Eigen::Index>(quantize(prev, cb).index));
        }
        case CodebookMode::fixed: {
            const auto& cb = codebooks_[static_cast<std::size_t>(user)];
            return cb.vectors.col(static_cast<Eigen::Index>(quantize(prev, cb).index));
        }
        }
        return prev / prev.norm();
    }

    TrialPlan plan_;
    bool quantize_ = false;
    FadingParams fading_;
    int users_ = 0;
    std::vector<Codebook> codebooks_;
};

}  // namespace detail

/// Runs the plan once and evaluates every SNR in `snrs` on the same channel
/// realizations (the precoders do not depend on P). The plan's own snr field
/// is ignored.
inline std::vector<SimulationResult> estimate_rate_sweep(const TrialPlan& plan, std::span<const double> snrs) {
    plan.validate();
    for (double p : snrs) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("estimate_rate_sweep: snr must be finite and >= 0");
    }
    const detail::TrialRunner runner(plan);
    const std::size_t n_snr = snrs.size();
    const double m = plan.scenario.mode;
    const std::uint64_t blocks = (plan.trials + detail::kBlockTrials - 1) / detail::kBlockTrials;

    struct Block {
        std::vector<detail::Moments> rate;
        detail::Moments interference;
        detail::Moments signal;
        std::uint64_t resampled = 0;
    };
    std::vector<Block> results(blocks);
    parallel_for(blocks, plan.threads, [&](std::size_t b) {
        Block blk;
        blk.rate.resize(n_snr);
        const std::uint64_t lo = b * detail::kBlockTrials;
        const std::uint64_t hi = std::min(plan.trials, lo + detail::kBlockTrials);
        for (std::uint64_t t = lo; t < hi; ++t) {
            const auto g = runner.run(t, blk.resampled);
            double sig = 0.0;
            double intf = 0.0;
            for (std::size_t u = 0; u < g.signal.size(); ++u) {
                sig += g.signal[u];
                intf += g.interference[u];
            }
            blk.signal.add(sig / m);
            blk.interference.add(intf / m);
            for (std::size_t k = 0; k < n_snr; ++k) {
                const double per_user = snrs[k] / m;
                double total = 0.0;
                for (std::size_t u = 0; u < g.signal.size(); ++u) {
                    total += std::log2(1.0 + per_user * g.signal[u] / (1.0 + per_user * g.interference[u]));
                }
                blk.rate[k].add(total);
            }
        }
        results[b] = std::move(blk);
    });

    std::vector<detail::Moments> parts(blocks);
    std::uint64_t resampled = 0;
    for (const auto& blk : results) resampled += blk.resampled;
    for (std::uint64_t b = 0; b < blocks; ++b) parts[b] = results[b].signal;
    const auto signal = detail::merge_all(parts);
    for (std::uint64_t b = 0; b < blocks; ++b) parts[b] = results[b].interference;
    const auto interference = detail::merge_all(parts);

    std::vector<SimulationResult> out(n_snr);
    for (std::size_t k = 0; k < n_snr; ++k) {
        for (std::uint64_t b = 0; b < blocks; ++b) parts[b] = results[b].rate[k];
        const auto rate = detail::merge_all(parts);
        auto& r = out[k];
        r.sum_rate = rate.estimate();
        r.per_user = rate.estimate(1.0 / m);
        r.interference = interference.estimate(snrs[k] / m);
        r.signal_gain = signal.estimate();
        r.resampled = resampled;
    }
    return out;
}

/// Ergodic rate (sum and per user) at the plan's SNR.
inline SimulationResult estimate_rate(const TrialPlan& plan) {
    const double snr = plan.scenario.snr;
    return estimate_rate_sweep(plan, std::span<const double>(&snr, 1)).front();
}

/// Mean residual interference per user at the plan's SNR.
inline RateEstimate estimate_interference_mean(const TrialPlan& plan) {
    if (plan.scenario.mode < 2) throw DomainError("estimate_interference_mean: requires M >= 2");
    return estimate_rate(plan).interference;
}

struct QuantizationErrorEstimate {
    RateEstimate sin_sq;   // 1 - |h~^* h_hat|^2
    RateEstimate leakage;  // |h^* f|^2 for a unit f orthogonal to h_hat, isotropic otherwise
};

/// RVQ quantization error and the interference leakage it causes, from
/// fresh codebooks sampled exactly.
inline QuantizationErrorEstimate estimate_quantization_error(int n_t, int bits, std::uint64_t trials,
                                                             std::uint64_t seed) {
    if (trials < 1) throw DomainError("estimate_quantization_error: trials must be >= 1");
    detail::Moments sin_sq;
    detail::Moments leakage;
    for (std::uint64_t t = 0; t < trials; ++t) {
        auto rng = Rng::stream(seed, t);
        const ChannelVector h = draw_channel(n_t, rng);
        double s = 0.0;
        const ChannelVector reported = sample_rvq_direction(h, bits, rng, &s);
        ChannelVector f = draw_channel(n_t, rng);
        f -= reported * reported.dot(f);
        f /= f.norm();
        sin_sq.add(s);
        leakage.add(std::norm(h.dot(f)));
    }
    return {sin_sq.estimate(), leakage.estimate()};
}

}  // namespace modeswitch
