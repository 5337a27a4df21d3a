#pragma once

// Independent oracles used by the test suites. These deliberately avoid the
// library's fast paths: brute quadrature, explicit polynomials, direct DFT
// sums. They are slow and simple on purpose.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

// Brute damped quadrature for Int exp[i(a y^2 + b y)] dy: multiply by
// e^{-eps y^2}, Simpson on a wide window, then Richardson-extrapolate the
// damping to zero (3 levels: eps, eps/2, eps/4).
inline cplx fresnel_damped_once(cplx a, cplx b, double eps) {
    const double width = std::sqrt(32.0 / eps);
    const double slope = 2.0 * std::abs(a) * width + std::abs(b);
    std::size_t nodes = static_cast<std::size_t>(width * slope * 14.0 / pi) + 1000;
    nodes += nodes % 2;
    const double h = 2.0 * width / static_cast<double>(nodes);
    auto f = [&](double y) {
        return std::exp(cplx(0.0, 1.0) * (a * y * y + b * y) - eps * y * y);
    };
    cplx s = f(-width) + f(width);
    for (std::size_t i = 1; i < nodes; ++i)
        s += f(-width + h * static_cast<double>(i)) * ((i & 1) ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline cplx fresnel_quadrature(cplx a, cplx b, double eps = 1e-3) {
    const cplx f1 = fresnel_damped_once(a, b, eps);
    const cplx f2 = fresnel_damped_once(a, b, eps / 2.0);
    const cplx f4 = fresnel_damped_once(a, b, eps / 4.0);
    // two Richardson stages for the analytic eps-expansion
    const cplx g1 = 2.0 * f2 - f1;
    const cplx g2 = 2.0 * f4 - f2;
    return 2.0 * g2 - g1;
}

// Direct O(N^2) DFT matching the library's forward convention.
inline std::vector<cplx> direct_fourier_x_to_p(const std::vector<cplx>& f, double x0, double dx,
                                               double hbar) {
    const std::size_t n = f.size();
    const double dp = 2.0 * pi * hbar / (static_cast<double>(n) * dx);
    std::vector<cplx> out(n, cplx(0.0));
    for (std::size_t j = 0; j < n; ++j) {
        const double p = (static_cast<double>(j) - static_cast<double>(n) / 2.0) * dp;
        cplx s(0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = x0 + dx * static_cast<double>(i);
            s += f[i] * std::exp(cplx(0.0, -x * p / hbar));
        }
        out[j] = s * dx / (2.0 * pi * hbar);
    }
    return out;
}

// Explicit low-order Laguerre polynomials.
inline double laguerre_explicit(unsigned n, double x) {
    switch (n) {
        case 0: return 1.0;
        case 1: return 1.0 - x;
        case 2: return 1.0 - 2.0 * x + 0.5 * x * x;
        case 3: return 1.0 - 3.0 * x + 1.5 * x * x - x * x * x / 6.0;
        case 4:
            return 1.0 - 4.0 * x + 3.0 * x * x - 2.0 * x * x * x / 3.0 +
                   x * x * x * x / 24.0;
        case 5:
            return 1.0 - 5.0 * x + 5.0 * x * x - 5.0 * x * x * x / 3.0 +
                   5.0 * x * x * x * x / 24.0 - std::pow(x, 5) / 120.0;
        default: return 0.0;
    }
}

// Harmonic oscillator Jacobi field phi(t) = sin(w t)/w with phi(0)=0, phi'(0)=1.
inline double ho_phi(double w, double t) { return std::sin(w * t) / w; }
inline double ho_dphi(double w, double t) { return std::cos(w * t); }

// Gaussian moments: Int x^{2k} e^{-a x^2} dx.
inline double gaussian_moment(double a, int k) {
    double v = std::sqrt(pi / a);
    for (int j = 1; j <= k; ++j) v *= (2.0 * j - 1.0) / (2.0 * a);
    return v;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace oracle
