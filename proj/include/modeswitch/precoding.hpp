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
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "modeswitch/channel.hpp"
#include "modeswitch/errors.hpp"
#include "modeswitch/rng.hpp"

namespace modeswitch {

/// Smallest-to-largest singular value ratio below which the reported
/// channel matrix is treated as singular.
inline constexpr double kSingularityRatio = 1e-10;

/// Unit-norm precoders stored as the columns of an N_t x M matrix.
struct PrecoderSet {
    Eigen::MatrixXcd vectors;

    int mode() const noexcept { return static_cast<int>(vectors.cols()); }
};

struct SinrSample {
    double signal = 0.0;
    double interference = 0.0;
    double sinr = 0.0;
};

/// Zero-forcing precoders from the pseudo-inverse of the reported channels
/// (rows are h_hat_u^*). Computed through an SVD, never through H H^*.
/// With M = 1 this is eigen-beamforming along the reported direction.
inline PrecoderSet zf_precoders(const ChannelMatrix& reported) {
    const auto m = reported.rows();
    const auto n_t = reported.cols();
    if (m < 1 || m > n_t) throw DomainError("zf_precoders: need 1 <= M <= N_t");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(reported, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (!(sv[m - 1] >= kSingularityRatio * sv[0])) {
        throw SingularityError("zf_precoders: reported channel matrix is rank deficient");
    }
    // H^+ = V S^-1 U^*
    Eigen::MatrixXcd f = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
    f.colwise().normalize();
    return PrecoderSet{std::move(f)};
}

/// Exact per-user SINR with equal power P/M and unit noise:
/// signal = (P/M)|h_u^* f_u|^2, interference = (P/M) sum_{u' != u} |h_u^* f_u'|^2.
inline std::vector<SinrSample> evaluate_sinr(const ChannelMatrix& h_true, const PrecoderSet& precoders,
                                             double snr) {
    const auto m = precoders.vectors.cols();
    if (h_true.rows() != m || h_true.cols() != precoders.vectors.rows()) {
        throw DomainError("evaluate_sinr: channel/precoder shape mismatch");
    }
    const Eigen::MatrixXd gains = (h_true * precoders.vectors).cwiseAbs2();
    const double per_user = snr / static_cast<double>(m);
    std::vector<SinrSample> out(static_cast<std::size_t>(m));
    for (Eigen::Index u = 0; u < m; ++u) {
        auto& s = out[static_cast<std::size_t>(u)];
        s.signal = per_user * gains(u, u);
        s.interference = per_user * (gains.row(u).sum() - gains(u, u));
        s.interference = std::max(s.interference, 0.0);
        s.sinr = s.signal / (1.0 + s.interference);
    }
    return out;
}

/// Perfect CSIT: precoders built from the true channels themselves.
inline std::vector<SinrSample> sinr_perfect_zf(const ChannelMatrix& h, double snr) {
    return evaluate_sinr(h, zf_precoders(h), snr);
}

/// Imperfect CSIT: precoders from delayed and/or quantized reports, evaluated
/// on the current channel.
inline std::vector<SinrSample> sinr_imperfect_zf(const ChannelMatrix& h_now, const PrecoderSet& precoders,
                                                 double snr) {
    return evaluate_sinr(h_now, precoders, snr);
}

/// Indices of the M users served this slot: first M of a seeded shuffle.
inline std::vector<int> select_users(int users, int mode, Rng& rng) {
    if (mode < 1 || mode > users) throw DomainError("select_users: need 1 <= M <= U");
    std::vector<int> ids(static_cast<std::size_t>(users));
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(static_cast<std::size_t>(mode));
    return ids;
}

}  // namespace modeswitch
