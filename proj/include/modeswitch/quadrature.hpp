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
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "modeswitch/errors.hpp"

namespace modeswitch {

/// Kronrod extension used on each subinterval.
enum class KronrodRule { k15, k21 };

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 200;
    KronrodRule rule = KronrodRule::k15;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol >= 0.0) || max_subdivisions < 1) {
            throw DomainError("QuadratureSpec: need rel_tol > 0, abs_tol >= 0, max_subdivisions >= 1");
        }
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
};

namespace detail {

// Abscissae/weights from QUADPACK (qk15, qk21). Index 0 is the centre.
struct KronrodTable {
    std::span<const double> xk;  // Kronrod nodes, xk[0] = 0 for 15, descending density
    std::span<const double> wk;
    std::span<const double> wg;  // Gauss weights for the Gauss subset
    bool gauss_at_odd;           // Gauss nodes sit at odd indices of xk (k15) or even (k21)
};

inline constexpr std::array<double, 8> k15_x = {
    0.00000000000000000e+00, 2.07784955007898468e-01, 4.05845151377397167e-01,
    5.86087235467691130e-01, 7.41531185599394440e-01, 8.64864423359769073e-01,
    9.49107912342758525e-01, 9.91455371120812639e-01};
inline constexpr std::array<double, 8> k15_w = {
    2.09482141084727828e-01, 2.04432940075298892e-01, 1.90350578064785410e-01,
    1.69004726639267903e-01, 1.40653259715525919e-01, 1.04790010322250184e-01,
    6.30920926299785533e-02, 2.29353220105292250e-02};
// Gauss-7 weights for nodes xk[0], xk[2], xk[4], xk[6].
inline constexpr std::array<double, 4> g7_w = {
    4.17959183673469388e-01, 3.81830050505118945e-01, 2.79705391489276668e-01,
    1.29484966168869693e-01};

inline constexpr std::array<double, 11> k21_x = {
    0.00000000000000000e+00, 1.48874338981631211e-01, 2.94392862701460198e-01,
    4.33395394129247191e-01, 5.62757134668604683e-01, 6.79409568299024406e-01,
    7.80817726586416897e-01, 8.65063366688984511e-01, 9.30157491355708226e-01,
    9.73906528517171720e-01, 9.95657163025808081e-01};
inline constexpr std::array<double, 11> k21_w = {
    1.49445554002916906e-01, 1.47739104901338491e-01, 1.42775938577060081e-01,
    1.34709217311473326e-01, 1.23491976262065851e-01, 1.09387158802297642e-01,
    9.31254545836976055e-02, 7.50396748109199528e-02, 5.47558965743519960e-02,
    3.25581623079647275e-02, 1.16946388673718743e-02};
// Gauss-10 weights for nodes xk[1], xk[3], ..., xk[9].
inline constexpr std::array<double, 5> g10_w = {
    2.95524224714752870e-01, 2.69266719309996355e-01, 2.19086362515982044e-01,
    1.49451349150580593e-01, 6.66713443086881376e-02};

struct Segment {
    double lo, hi;
    double value, error;
    double roundoff;  // error floor set by cancellation in the panel sum
    std::size_t piece;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// One Gauss-Kronrod panel with the QUADPACK error heuristic.
template <class F>
Segment kronrod_panel(F& f, double lo, double hi, KronrodRule rule, std::size_t piece) {
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const bool k15 = rule == KronrodRule::k15;
    std::span<const double> xk = k15 ? std::span<const double>(k15_x) : std::span<const double>(k21_x);
    std::span<const double> wk = k15 ? std::span<const double>(k15_w) : std::span<const double>(k21_w);

    std::array<double, 11> fplus{}, fminus{};
    const double fc = f(centre);
    double kron = fc * wk[0];
    double gauss = k15 ? fc * g7_w[0] : 0.0;
    double resabs = std::abs(kron);
    for (std::size_t j = 1; j < xk.size(); ++j) {
        const double dx = half * xk[j];
        fplus[j] = f(centre + dx);
        fminus[j] = f(centre - dx);
        const double pair = fplus[j] + fminus[j];
        kron += wk[j] * pair;
        resabs += wk[j] * (std::abs(fplus[j]) + std::abs(fminus[j]));
        if (k15 && j % 2 == 0) gauss += g7_w[j / 2] * pair;
        if (!k15 && j % 2 == 1) gauss += g10_w[j / 2] * pair;
    }
    const double mean = 0.5 * kron;
    double resasc = wk[0] * std::abs(fc - mean);
    for (std::size_t j = 1; j < xk.size(); ++j) {
        resasc += wk[j] * (std::abs(fplus[j] - mean) + std::abs(fminus[j] - mean));
    }
    kron *= half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((kron - gauss * half));
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double roundoff = 50.0 * eps * resabs;
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(roundoff, err);
    return Segment{lo, hi, kron, err, roundoff, piece};
}

}  // namespace detail

/// A finite interval with its own integrand. Several pieces are refined
/// together under one global error budget.
struct QuadraturePiece {
    std::function<double(double)> f;
    double lo;
    double hi;
};

/// Globally adaptive Gauss-Kronrod over a set of pieces: the panel with the
/// largest error estimate is bisected until the summed error meets
/// max(abs_tol, rel_tol * |total|).
inline QuadratureResult integrate_pieces(std::span<const QuadraturePiece> pieces,
                                         const QuadratureSpec& spec) {
    spec.validate();
    std::priority_queue<detail::Segment> heap;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t p = 0; p < pieces.size(); ++p) {
        if (!(pieces[p].hi > pieces[p].lo)) continue;
        auto seg = detail::kronrod_panel(pieces[p].f, pieces[p].lo, pieces[p].hi, spec.rule, p);
        total += seg.value;
        total_err += seg.error;
        heap.push(seg);
    }
    int splits = 0;
    auto converged = [&] { return total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
    while (!heap.empty() && !converged()) {
        const auto worst = heap.top();
        // Every panel is at its roundoff floor: splitting cannot help.
        if (worst.error <= worst.roundoff) break;
        if (splits >= spec.max_subdivisions) {
            throw ConvergenceError("adaptive quadrature did not converge", total, total_err);
        }
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            throw ConvergenceError("adaptive quadrature hit interval resolution limit", total, total_err);
        }
        auto& f = pieces[worst.piece].f;
        const auto left = detail::kronrod_panel(f, worst.lo, mid, spec.rule, worst.piece);
        const auto right = detail::kronrod_panel(f, mid, worst.hi, spec.rule, worst.piece);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    // Re-sum from the panels to shed drift from the running updates.
    double value = 0.0;
    double err = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return QuadratureResult{value, err, splits};
}

template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
    const QuadraturePiece piece{std::forward<F>(f), lo, hi};
    return integrate_pieces(std::span<const QuadraturePiece>(&piece, 1), spec);
}

}  // namespace modeswitch
