#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "moyal/errors.hpp"

namespace moyal {

// Laguerre polynomial L_n(x) by the three-term recurrence
// (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}.
inline double laguerre(unsigned n, double x) {
    if (n > 64) throw order_too_large_error("laguerre: n beyond stability range (64)");
    if (n == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 - x;
    for (unsigned k = 1; k < n; ++k) {
        double lp1 = ((2.0 * k + 1.0 - x) * l - k * lm1) / (k + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

inline double sinc_pi(double u) {
    const double z = pi * u;
    if (std::abs(z) < 1e-4) {
        const double z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

namespace detail {

// Ai(0) = 3^{-2/3}/Gamma(2/3), -Ai'(0) = 3^{-1/3}/Gamma(1/3).
inline constexpr long double airy_c1 = 0.355028053887817239260063186004L;
inline constexpr long double airy_c2 = 0.258819403792806798405183560189L;

// Maclaurin series Ai = c1 f - c2 g, summed in long double. Loses about
// e^{2 zeta} of cancellation for x > 0, so only used for x <= 5.
inline double airy_series(double xd) {
    const long double x = xd;
    const long double x3 = x * x * x;
    long double f = 1.0L, tf = 1.0L;
    long double g = x, tg = x;
    for (int k = 1; k < 300; ++k) {
        tf *= x3 / (3.0L * k * (3.0L * k - 1.0L));
        tg *= x3 / (3.0L * k * (3.0L * k + 1.0L));
        f += tf;
        g += tg;
        if (std::abs((double)tf) < 1e-25 * (std::abs((double)f) + 1.0) &&
            std::abs((double)tg) < 1e-25 * (std::abs((double)g) + 1.0))
            break;
    }
    return (double)(airy_c1 * f - airy_c2 * g);
}

// u_k coefficients of the large-|x| expansions, via the term ratio.
inline void airy_asymptotic_pos(double x, double& ai, double& aip) {
    const double zeta = 2.0 * x * std::sqrt(x) / 3.0;
    double u = 1.0, su = 1.0;  // sum for Ai
    double v = 1.0, sv = 1.0;  // sum for Ai'
    double term = 1.0, prev = 1.0;
    for (int k = 1; k < 60; ++k) {
        u *= (6.0 * k - 1.0) * (6.0 * k - 3.0) * (6.0 * k - 5.0) / (216.0 * k * (2.0 * k - 1.0));
        v = u * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        term = u / std::pow(zeta, k);
        if (std::abs(term) > prev) break;  // divergent tail: stop at optimal truncation
        prev = std::abs(term);
        const double sgn = (k & 1) ? -1.0 : 1.0;
        su += sgn * term;
        sv += sgn * v / std::pow(zeta, k);
        if (std::abs(term) < 1e-18) break;
    }
    const double pref = std::exp(-zeta) / (2.0 * std::sqrt(pi) * std::pow(x, 0.25));
    ai = pref * su;
    aip = -std::pow(x, 0.25) * std::exp(-zeta) / (2.0 * std::sqrt(pi)) * sv;
}

inline double airy_asymptotic_neg(double xd) {
    const double z = -xd;
    const double zeta = 2.0 * z * std::sqrt(z) / 3.0;
    double u = 1.0;
    double psum = 1.0, qsum = 0.0;
    double prev = 1.0;
    for (int k = 1; k < 80; ++k) {
        u *= (6.0 * k - 1.0) * (6.0 * k - 3.0) * (6.0 * k - 5.0) / (216.0 * k * (2.0 * k - 1.0));
        const double term = u / std::pow(zeta, k);
        if (std::abs(term) > prev) break;
        prev = std::abs(term);
        const int j = k / 2;
        const double sgn = (j & 1) ? -1.0 : 1.0;
        if (k & 1)
            qsum += sgn * term;
        else
            psum += sgn * term;
        if (std::abs(term) < 1e-18) break;
    }
    const double c = std::cos(zeta - pi / 4.0);
    const double s = std::sin(zeta - pi / 4.0);
    return (c * psum + s * qsum) / (std::sqrt(pi) * std::pow(z, 0.25));
}

// Taylor-series steps of y'' = x y, marching from x=8 (asymptotic seed) down
// into the cancellation gap. Backward marching follows the growing direction,
// so the decaying solution stays well conditioned.
inline double airy_ode_march(double target) {
    double x = 8.0, y, yp;
    airy_asymptotic_pos(x, y, yp);
    while (x > target + 1e-14) {
        const double h = std::max(-0.5, target - x);
        long double t[28];
        t[0] = y;
        t[1] = yp;
        t[2] = 0.5L * (long double)x * t[0];
        for (int j = 1; j + 2 < 28; ++j)
            t[j + 2] = ((long double)x * t[j] + t[j - 1]) / ((j + 2.0L) * (j + 1.0L));
        long double py = t[27], pyp = 0.0L;
        for (int j = 26; j >= 0; --j) {
            pyp = pyp * h + t[j + 1] * (j + 1);
            py = py * h + t[j];
        }
        y = (double)py;
        yp = (double)pyp;
        x += h;
    }
    return y;
}

}  // namespace detail

// Airy function Ai(x) on |x| <= 40, relative accuracy ~1e-10 or better.
// Regions: oscillatory asymptotics for x <= -8, Maclaurin series (long double)
// for -8 < x <= 5, ODE march seeded at x = 8 for 5 < x < 8, and the decaying
// asymptotic expansion for x >= 8.
inline double airy_ai(double x) {
    if (std::abs(x) > 40.0) throw out_of_range_error("airy_ai: |x| beyond implementation range (40)");
    if (x <= -8.0) return detail::airy_asymptotic_neg(x);
    if (x <= 5.0) return detail::airy_series(x);
    if (x < 8.0) return detail::airy_ode_march(x);
    double ai, aip;
    detail::airy_asymptotic_pos(x, ai, aip);
    return ai;
}

// Jacobi theta function theta_3(z|tau) = sum_n e^{i pi tau n^2 + 2 i n z},
// requiring Im(tau) > 0; an exactly real tau is nudged by the standard
// damping prescription tau -> tau + i*eps.
inline std::complex<double> theta3(std::complex<double> z, std::complex<double> tau,
                                   double damping_eps = 1e-6) {
    if (tau.imag() == 0.0) tau += std::complex<double>(0.0, damping_eps * std::max(1.0, std::abs(tau)));
    if (tau.imag() <= 0.0) throw non_convergent_error("theta3: Im(tau) <= 0 after damping");
    const std::complex<double> iptau(0.0, 1.0);
    std::complex<double> sum(1.0, 0.0);  // n = 0
    const double tail_tol = 1e-14;
    int consecutive_small = 0;
    for (long n = 1; n < 2000000; ++n) {
        const std::complex<double> quad = std::complex<double>(0.0, pi) * tau * (double)(n * n);
        const std::complex<double> lin = std::complex<double>(0.0, 2.0 * n) * z;
        const std::complex<double> tp = std::exp(quad + lin);
        const std::complex<double> tm = std::exp(quad - lin);
        sum += tp + tm;
        if (std::abs(tp) + std::abs(tm) < tail_tol * (1.0 + std::abs(sum))) {
            if (++consecutive_small >= 3) break;
        } else {
            consecutive_small = 0;
        }
        if (n == 1999999) throw non_convergent_error("theta3: series did not converge");
    }
    return sum;
}

}  // namespace moyal
