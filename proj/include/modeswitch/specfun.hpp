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

// Special functions behind the closed-form rate expressions: J0 for the
// Clarke correlation, upper incomplete gamma at non-positive integer order,
// generalized exponential integrals, and the parameterized integral
//
//     I(a, b, m, n) = int_0^inf x^m e^{-a x} / ((x + b)^n (x + 1)) dx.
//
// Functions with a `_scaled` suffix return e^x times the plain value so that
// callers can form products like e^{1/P} * E_n(1/P) without overflow.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "modeswitch/errors.hpp"
#include "modeswitch/quadrature.hpp"

namespace modeswitch {

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kTiny = 1e-300;
inline constexpr int kMaxIter = 100000;

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

inline double j0_series(double x) {
    const double q = -0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Miller's backward recurrence normalized with J0 + 2 sum J_2k = 1.
inline double j0_miller(double x) {
    const int start = 2 * ((static_cast<int>(x + 6.0 * std::cbrt(x) + 30.0)) / 2);
    const double two_over_x = 2.0 / x;
    double next = 0.0;  // J_{k+1}
    double cur = 1e-30; // J_k
    double norm = 0.0;
    double j0 = 0.0;
    for (int k = start; k > 0; --k) {
        const double prev = k * two_over_x * cur - next;  // J_{k-1}
        next = cur;
        cur = prev;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
        }
    }
    j0 = cur;
    norm += j0;
    return j0 / norm;
}

// Hankel asymptotic expansion, accurate to double precision for x > 40.
inline double j0_asymptotic(double x) {
    double p = 0.0;
    double q = 0.0;
    double u = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
        if (k > 0) u *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        if (u > last || u < 1e-18) break;
        last = u;
        const int r = k % 4;
        // k even: P gets (-1)^(k/2); k odd: Q gets (-1)^((k+1)/2).
        if (r == 0) p += u;
        else if (r == 1) q -= u;
        else if (r == 2) p -= u;
        else q += u;
    }
    const double chi = x - 0.25 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

// e^x E_1(x) for 0 < x <= 1 by the power series.
inline double expint1_scaled_series(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < kMaxIter; ++k) {
        term *= -x / k;
        const double del = term / k;
        sum += del;
        if (std::abs(del) < kEps * std::abs(sum)) break;
    }
    return std::exp(x) * (-std::numbers::egamma - std::log(x) - sum);
}

// Modified Lentz evaluation of e^x Gamma(a, x) / x^a.
inline double gamma_upper_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("gamma_upper: continued fraction did not converge", h, std::abs(h));
}

// e^x E_n(x) for x > 1 by continued fraction.
inline double expint_cf_scaled(int n, double x) {
    double b = x + n;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (n - 1 + i);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("expint_n: continued fraction did not converge", h, std::abs(h));
}

// E_n(x) for 0 < x <= 1 by the power series (digamma branch at i = n-1).
inline double expint_series(int n, double x) {
    const int nm1 = n - 1;
    double ans = nm1 != 0 ? 1.0 / nm1 : -std::log(x) - std::numbers::egamma;
    double fact = 1.0;
    for (int i = 1; i < kMaxIter; ++i) {
        fact *= -x / i;
        double del = 0.0;
        if (i != nm1) {
            del = -fact / (i - nm1);
        } else {
            double psi = -std::numbers::egamma;
            for (int ii = 1; ii <= nm1; ++ii) psi += 1.0 / ii;
            del = fact * (-std::log(x) + psi);
        }
        ans += del;
        if (std::abs(del) < std::abs(ans) * kEps) break;
    }
    return ans;
}

inline bool is_nonpositive_integer(double a) { return a <= 0.0 && a == std::floor(a); }

}  // namespace detail

/// Bessel function of the first kind, order zero.
inline double bessel_j0(double x) {
    detail::require_finite(x, "bessel_j0");
    const double ax = std::abs(x);
    if (ax <= 2.0) return detail::j0_series(ax);
    if (ax <= 40.0) return detail::j0_miller(ax);
    return detail::j0_asymptotic(ax);
}

/// e^x * Gamma(a, x) for x > 0 and a a positive real or a non-positive integer.
///
/// Non-positive integer orders with x < 1 use the downward recurrence
/// G(-k) = (x^{-k} - G(1-k)) / k on the scaled value G, started from
/// G(0) = e^x E_1(x); every step there is free of cancellation.
/// For x >= 1 that recurrence cancels badly, so the continued fraction is
/// used directly.
inline double gamma_upper_scaled(double a, double x) {
    detail::require_finite(a, "gamma_upper");
    detail::require_finite(x, "gamma_upper");
    if (!(x > 0.0)) throw DomainError("gamma_upper: x must be > 0");
    if (a == 1.0) return 1.0;
    if (detail::is_nonpositive_integer(a)) {
        if (x >= 1.0) return std::pow(x, a) * detail::gamma_upper_cf(a, x);
        const int k = static_cast<int>(-a);
        double g = detail::expint1_scaled_series(x);
        for (int j = 1; j <= k; ++j) g = (std::pow(x, -j) - g) / j;
        return g;
    }
    if (a < 0.0) throw DomainError("gamma_upper: negative order must be an integer");
    if (x < a + 1.0) {
        // Gamma(a) - gamma(a, x), lower part by series.
        double ap = a;
        double del = 1.0 / a;
        double sum = del;
        for (int n = 0; n < detail::kMaxIter; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * detail::kEps) break;
        }
        return std::exp(x + std::lgamma(a)) - std::exp(a * std::log(x)) * sum;
    }
    return std::exp(a * std::log(x)) * detail::gamma_upper_cf(a, x);
}

/// Upper incomplete gamma Gamma(a, x) = int_x^inf t^{a-1} e^{-t} dt.
inline double gamma_upper(double a, double x) {
    const double scaled = gamma_upper_scaled(a, x);
    return scaled * std::exp(-x);
}

/// e^x * E_n(x). Defined at x = 0 for n >= 2.
inline double expint_n_scaled(int n, double x) {
    detail::require_finite(x, "expint_n");
    if (n < 1) throw DomainError("expint_n: order must be >= 1");
    if (x < 0.0) throw DomainError("expint_n: x must be >= 0");
    if (x == 0.0) {
        if (n == 1) throw DivergenceError("expint_n: E_1(0) diverges");
        return 1.0 / (n - 1);
    }
    if (x > 1.0) return detail::expint_cf_scaled(n, x);
    return std::exp(x) * detail::expint_series(n, x);
}

/// Generalized exponential integral E_n(x) = int_1^inf e^{-x t} t^{-n} dt.
inline double expint_n(int n, double x) {
    detail::require_finite(x, "expint_n");
    if (n < 1) throw DomainError("expint_n: order must be >= 1");
    if (x < 0.0) throw DomainError("expint_n: x must be >= 0");
    if (x == 0.0) {
        if (n == 1) throw DivergenceError("expint_n: E_1(0) diverges");
        return 1.0 / (n - 1);
    }
    if (x > 1.0) return detail::expint_cf_scaled(n, x) * std::exp(-x);
    return detail::expint_series(n, x);
}

/// int_0^inf x^m e^{-a x} / ((x + b)^n (x + 1)) dx.
///
/// The half-line is split at min(b,1), max(b,1) and the exponential reach
/// 2(m+1)/a, with geometric knots (ratio 8) bridging wide gaps so each panel
/// sees a bounded dynamic range. The tail [T, inf) beyond the last knot is
/// mapped onto (0, 1] with x = T / t.
inline double i_hat(double a, double b, int m, int n, const QuadratureSpec& spec = {}) {
    detail::require_finite(a, "i_hat");
    detail::require_finite(b, "i_hat");
    if (!(a > 0.0) || !(b > 0.0) || m < 0 || n < 1) {
        throw DomainError("i_hat: need a > 0, b > 0, m >= 0, n >= 1");
    }
    const double md = m;
    const double nd = n;
    auto log_integrand = [=](double x) {
        return md * std::log(x) - a * x - nd * std::log(x + b) - std::log1p(x);
    };
    auto integrand = [=](double x) {
        if (x <= 0.0) return m == 0 ? std::pow(b, -nd) : 0.0;
        return std::exp(log_integrand(x));
    };

    // Anchor knots at the two poles' scales and at the exponential reach,
    // then fill any gap wider than a factor of 8 geometrically.
    std::vector<double> anchors{std::min(b, 1.0), std::max(b, 1.0), 2.0 * (md + 1.0) / a};
    std::sort(anchors.begin(), anchors.end());
    std::vector<double> knots{0.0, anchors[0]};
    for (std::size_t k = 1; k < anchors.size(); ++k) {
        while (knots.back() * 8.0 < anchors[k]) knots.push_back(knots.back() * 8.0);
        if (anchors[k] > knots.back()) knots.push_back(anchors[k]);
    }
    const double tail_start = knots.back();

    std::vector<QuadraturePiece> pieces;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        if (knots[k + 1] > knots[k]) pieces.push_back({integrand, knots[k], knots[k + 1]});
    }
    pieces.push_back({[=](double t) {
                          if (t <= 0.0) return 0.0;
                          const double x = tail_start / t;
                          return std::exp(log_integrand(x) + std::log(tail_start) - 2.0 * std::log(t));
                      },
                      0.0, 1.0});
    return integrate_pieces(pieces, spec).value;
}

}  // namespace modeswitch
