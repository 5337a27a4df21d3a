#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "moyal/grid.hpp"

namespace moyal {

// In-place iterative radix-2 FFT, unnormalized: out_k = sum_n in_n e^{sign 2pi i nk/N}.
inline void fft_radix2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    assert(n != 0 && (n & (n - 1)) == 0);
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Centered lattice transform: out_j = sum_k in_k e^{sign i 2pi (k-N/2)(j-N/2)/N}.
// Requires N divisible by 4 (guaranteed by PhaseGrid).
inline std::vector<cplx> centered_dft(const std::vector<cplx>& in, int sign) {
    const std::size_t n = in.size();
    std::vector<cplx> a(n);
    for (std::size_t k = 0; k < n; ++k) a[k] = (k & 1) ? -in[k] : in[k];
    fft_radix2(a, sign);
    for (std::size_t j = 0; j < n; ++j)
        if (j & 1) a[j] = -a[j];
    return a;
}

// Forward convention from the Wigner transform: g(p) = (1/2pi hbar) Int f(x) e^{-ixp/hbar} dx.
// Discretely: sum_i f_i e^{-i x_i p_j/hbar} = e^{-i x_0 p_j/hbar} sum_i f_i (-1)^i e^{-2pi i ij/N}
// with x_0 the first cell center.
inline ComplexField1D fourier_x_to_p(const ComplexField1D& f) {
    f.check_finite("fourier_x_to_p");
    const PhaseGrid& g = f.grid;
    const std::size_t n = g.n();
    ComplexField1D out(g, Axis::p);
    const double scale = g.dx() / (2.0 * pi * g.hbar());
    std::vector<cplx> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = (i & 1) ? -f.values[i] : f.values[i];
    fft_radix2(a, -1);
    const double x0 = g.x(0);
    for (std::size_t j = 0; j < n; ++j) {
        const double ph = -x0 * g.p(j) / g.hbar();
        out.values[j] = scale * a[j] * cplx(std::cos(ph), std::sin(ph));
    }
    return out;
}

// Inverse: f(x) = Int g(p) e^{+ixp/hbar} dp; composes with fourier_x_to_p to identity.
inline ComplexField1D fourier_p_to_x(const ComplexField1D& gfield) {
    gfield.check_finite("fourier_p_to_x");
    const PhaseGrid& g = gfield.grid;
    const std::size_t n = g.n();
    std::vector<cplx> a(n);
    const double x0 = g.x(0);
    for (std::size_t j = 0; j < n; ++j) {
        const double ph = x0 * g.p(j) / g.hbar();
        a[j] = gfield.values[j] * cplx(std::cos(ph), std::sin(ph));
    }
    fft_radix2(a, +1);
    ComplexField1D out(g, Axis::x);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = g.dp() * ((i & 1) ? -a[i] : a[i]);
    return out;
}

// Band-limited interpolation of node samples (input f_m at positions m * d)
// onto the half-step grid m * d/2; even outputs coincide with the inputs.
inline std::vector<cplx> trig_interpolate_half_nodes(const std::vector<cplx>& f) {
    const std::size_t n = f.size();
    std::vector<cplx> F(f);
    fft_radix2(F, -1);
    std::vector<cplx> H(2 * n, cplx(0.0));
    H[0] = F[0];
    for (std::size_t v = 1; v < n / 2; ++v) {
        H[v] = F[v];
        H[2 * n - v] = F[n - v];
    }
    H[n / 2] = 0.5 * F[n / 2];
    H[2 * n - n / 2] = 0.5 * F[n / 2];
    fft_radix2(H, +1);
    const double s = 1.0 / static_cast<double>(n);
    for (cplx& z : H) z *= s;
    for (std::size_t i = 0; i < n; ++i) H[2 * i] = f[i];
    return H;
}

// Band-limited (trigonometric) interpolation of cell-centered samples onto the
// half-step grid: input f_i at x_min + (i+1/2) dx, output of length 2N at
// x_min + m dx/2. Odd outputs coincide with the inputs; the Nyquist mode is
// split symmetrically so real inputs stay real.
inline std::vector<cplx> trig_interpolate_half(const std::vector<cplx>& f) {
    const std::size_t n = f.size();
    std::vector<cplx> F(f);
    fft_radix2(F, -1);
    std::vector<cplx> H(2 * n, cplx(0.0));
    H[0] = F[0];
    for (std::size_t v = 1; v < n / 2; ++v) {
        const double ph = -pi * static_cast<double>(v) / static_cast<double>(n);
        const cplx tw(std::cos(ph), std::sin(ph));
        H[v] = F[v] * tw;
        H[2 * n - v] = F[n - v] * std::conj(tw);
    }
    H[n / 2] = F[n / 2] * cplx(0.0, -0.5);
    H[2 * n - n / 2] = F[n / 2] * cplx(0.0, +0.5);
    fft_radix2(H, +1);
    const double s = 1.0 / static_cast<double>(n);
    for (cplx& z : H) z *= s;
    for (std::size_t i = 0; i < n; ++i) H[2 * i + 1] = f[i];
    return H;
}

}  // namespace moyal
