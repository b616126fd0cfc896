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
#include <cstddef>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "modeswitch/channel.hpp"
#include "modeswitch/errors.hpp"
#include "modeswitch/rng.hpp"

namespace modeswitch {

inline constexpr std::size_t kDefaultCodebookCap = std::size_t{1} << 22;

/// 2^B unit-norm codewords stored as the columns of an N_t x 2^B matrix.
struct Codebook {
    int bits = 0;
    Eigen::MatrixXcd vectors;

    std::size_t size() const noexcept { return static_cast<std::size_t>(vectors.cols()); }
    int n_t() const noexcept { return static_cast<int>(vectors.rows()); }
};

struct QuantizationResult {
    std::size_t index = 0;
    double alignment = 0.0;  // |h~^* c|^2 in [0, 1]
};

/// Random vector quantization codebook: normalized i.i.d. Gaussian vectors,
/// i.e. isotropic on the unit sphere.
inline Codebook draw_codebook(int n_t, int bits, Rng& rng, std::size_t max_vectors = kDefaultCodebookCap) {
    if (n_t < 2) throw DomainError("draw_codebook: n_t must be >= 2");
    if (bits < 1) throw DomainError("draw_codebook: bits must be >= 1");
    if (bits >= 63 || (std::size_t{1} << bits) > max_vectors) {
        throw ResourceError("draw_codebook: 2^" + std::to_string(bits) + " codewords exceeds the cap of " +
                            std::to_string(max_vectors));
    }
    const auto count = static_cast<Eigen::Index>(std::size_t{1} << bits);
    Codebook cb{bits, Eigen::MatrixXcd(n_t, count)};
    for (Eigen::Index l = 0; l < count; ++l) {
        auto col = cb.vectors.col(l);
        for (int i = 0; i < n_t; ++i) col[i] = rng.complex_normal();
        col /= col.norm();
    }
    return cb;
}

/// Closest codeword by inner-product magnitude; ties go to the lowest index.
inline QuantizationResult quantize(const ChannelVector& h, const Codebook& cb) {
    if (h.size() != cb.n_t()) throw DomainError("quantize: dimension mismatch");
    const double norm = h.norm();
    if (!(norm > 0.0)) throw DomainError("quantize: zero channel vector");
    const ChannelVector dir = h / norm;
    const Eigen::VectorXd gains = (cb.vectors.adjoint() * dir).cwiseAbs2();
    QuantizationResult best{0, gains[0]};
    for (Eigen::Index l = 1; l < gains.size(); ++l) {
        if (gains[l] > best.alignment) best = {static_cast<std::size_t>(l), gains[l]};
    }
    best.alignment = std::min(best.alignment, 1.0);
    return best;
}

/// Quantized direction under a freshly drawn RVQ codebook, sampled exactly
/// without materializing the codebook.
///
/// Each codeword's alignment with h~ is Beta(1, N_t-1), so the best of 2^B
/// has sin^2 = (1 - U^{2^-B})^{1/(N_t-1)} for U uniform, and the winner's
/// component orthogonal to h~ is isotropic in that complement.
inline ChannelVector sample_rvq_direction(const ChannelVector& h, int bits, Rng& rng,
                                          double* sin_sq_out = nullptr) {
    const auto n_t = h.size();
    if (n_t < 2) throw DomainError("sample_rvq_direction: n_t must be >= 2");
    if (bits < 1) throw DomainError("sample_rvq_direction: bits must be >= 1");
    const double norm = h.norm();
    if (!(norm > 0.0)) throw DomainError("sample_rvq_direction: zero channel vector");
    const ChannelVector dir = h / norm;

    const double log_u = std::log(rng.uniform());
    const double sin_sq = std::pow(-std::expm1(std::ldexp(log_u, -bits)), 1.0 / static_cast<double>(n_t - 1));

    ChannelVector g(n_t);
    for (Eigen::Index i = 0; i < n_t; ++i) g[i] = rng.complex_normal();
    g -= dir * dir.dot(g);
    g /= g.norm();

    if (sin_sq_out) *sin_sq_out = sin_sq;
    return std::sqrt(1.0 - sin_sq) * dir + std::sqrt(sin_sq) * g;
}

}  // namespace modeswitch
