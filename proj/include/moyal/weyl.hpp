#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "moyal/errors.hpp"
#include "moyal/fft.hpp"
#include "moyal/grid.hpp"
#include "moyal/parallel.hpp"

namespace moyal {

// A Weyl symbol sampled over the (x, p) grid. Symbols constructed from an
// evaluator also carry exact samples on the half-step x grid (2N rows), which
// the symbol<->kernel transforms need at midpoints (x+y)/2; otherwise those
// rows come from band-limited interpolation.
struct SampledSymbol {
    ComplexField2D field;
    std::string label;
    std::vector<cplx> fine_x;  // (2N) x N, row-major in p; may be empty

    explicit SampledSymbol(const PhaseGrid& g, std::string lbl = "")
        : field(g), label(std::move(lbl)) {}

    const PhaseGrid& grid() const { return field.grid; }
    std::size_t n() const { return field.grid.n(); }
    cplx& at(std::size_t ix, std::size_t ip) { return field.at(ix, ip); }
    const cplx& at(std::size_t ix, std::size_t ip) const { return field.at(ix, ip); }

    template <class F>
    static SampledSymbol from_function(const PhaseGrid& g, F&& fn, std::string lbl = "") {
        SampledSymbol s(g, std::move(lbl));
        const std::size_t n = g.n();
        s.fine_x.assign(2 * n * n, cplx(0.0));
        for (std::size_t m = 0; m < 2 * n; ++m) {
            const double x = g.x_min() + 0.5 * g.dx() * static_cast<double>(m);
            for (std::size_t j = 0; j < n; ++j) s.fine_x[m * n + j] = fn(x, g.p(j));
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s.at(i, j) = s.fine_x[(2 * i + 1) * n + j];
        return s;
    }

    double norm() const {  // integral of the field over phase space
        cplx s(0.0);
        for (const cplx& z : field.values) s += z;
        return (s * field.grid.dx() * field.grid.dp()).real();
    }
    double max_abs() const {
        double m = 0.0;
        for (const cplx& z : field.values) m = std::max(m, std::abs(z));
        return m;
    }
    double max_abs_interior() const {
        double m = 0.0;
        const std::size_t n = field.grid.n();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (field.grid.interior(i, j)) m = std::max(m, std::abs(at(i, j)));
        return m;
    }
    double max_abs_imag() const {
        double m = 0.0;
        for (const cplx& z : field.values) m = std::max(m, std::abs(z.imag()));
        return m;
    }
    void drop_imag() {
        for (cplx& z : field.values) z = cplx(z.real(), 0.0);
        if (!fine_x.empty())
            for (cplx& z : fine_x) z = cplx(z.real(), 0.0);
    }

    // Half-step x samples, computing them by trigonometric interpolation when
    // the symbol was not built from an evaluator.
    std::vector<cplx> fine_x_samples() const {
        if (!fine_x.empty()) return fine_x;
        const std::size_t n = field.grid.n();
        std::vector<cplx> out(2 * n * n);
        std::vector<cplx> col(n);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) col[i] = at(i, j);
            std::vector<cplx> fine = trig_interpolate_half(col);
            for (std::size_t m = 0; m < 2 * n; ++m) out[m * n + j] = fine[m];
        }
        return out;
    }
};

// Position-representation kernel kappa(x_i, x_j) of a Hilbert-Schmidt
// operator; composition carries the dx quadrature weight.
struct OperatorKernel {
    PhaseGrid grid;
    std::vector<cplx> matrix;  // n x n, row-major

    explicit OperatorKernel(const PhaseGrid& g) : grid(g), matrix(g.n() * g.n(), cplx(0.0)) {}

    cplx& at(std::size_t i, std::size_t j) { return matrix[i * grid.n() + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return matrix[i * grid.n() + j]; }

    bool is_hermitian(double tol = 1e-10) const {
        const std::size_t n = grid.n();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) return false;
        return true;
    }

    void check_finite(const char* what) const {
        if (!all_finite(matrix)) throw error(std::string(what) + ": non-finite kernel");
    }
};

// Operator composition (A B)(x,z) = Int A(x,y) B(y,z) dy.
inline OperatorKernel compose(const OperatorKernel& a, const OperatorKernel& b) {
    require_same_grid(a.grid, b.grid, "compose");
    const std::size_t n = a.grid.n();
    OperatorKernel out(a.grid);
    const double dx = a.grid.dx();
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a.at(i, k) * dx;
            if (aik == cplx(0.0)) continue;
            const cplx* brow = &b.matrix[k * n];
            cplx* orow = &out.matrix[i * n];
            for (std::size_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
        }
    });
    return out;
}

inline OperatorKernel adjoint(const OperatorKernel& a) {
    const std::size_t n = a.grid.n();
    OperatorKernel out(a.grid);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.at(i, j) = std::conj(a.at(j, i));
    return out;
}

inline OperatorKernel identity_kernel(const PhaseGrid& g) {
    OperatorKernel k(g);
    for (std::size_t i = 0; i < g.n(); ++i) k.at(i, i) = cplx(1.0 / g.dx());
    return k;
}

// Weyl map: kappa(x_a, x_b) = (1/2pi hbar) Int f((x_a+x_b)/2, p) e^{i p (x_a - x_b)/hbar} dp.
// Midpoints land on the half-step x grid; the p integral is the centered
// lattice sum, evaluated one FFT per fine midpoint row.
inline OperatorKernel kernel_from_symbol(const SampledSymbol& f) {
    f.field.check_finite("kernel_from_symbol");
    const PhaseGrid& g = f.grid();
    const std::size_t n = g.n();
    const std::vector<cplx> fine = f.fine_x_samples();
    // rows[m][d] = (dp/2pi hbar) (-1)^d sum_l fine[m][l] e^{2pi i l d / N}
    std::vector<std::vector<cplx>> rows(2 * n);
    const double scale = g.dp() / (2.0 * pi * g.hbar());
    parallel_for(2 * n, [&](std::size_t m) {
        std::vector<cplx> row(fine.begin() + m * n, fine.begin() + (m + 1) * n);
        fft_radix2(row, +1);
        for (std::size_t d = 0; d < n; ++d) row[d] *= ((d & 1) ? -scale : scale);
        rows[m] = std::move(row);
    });
    // The transform is lag-periodic; entries past |a - b| = n/2 would hold
    // periodic images, which poison compositions through image-times-image
    // products at the matrix edge. Only the principal band is emitted.
    OperatorKernel out(g);
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t base = a + 1;  // midpoint fine index is a + b + 1
        for (std::size_t b = 0; b < n; ++b) {
            if ((a > b ? a - b : b - a) > n / 2) continue;
            const std::size_t d = (a >= b) ? (a - b) : (n - (b - a));  // lag mod N
            out.at(a, b) = rows[base + b][d % n];
        }
    }
    return out;
}

// Inverse Weyl map: f(x,p) = Int kappa(x - s/2, x + s/2) e^{i s p / hbar} ds.
// Kernels concentrate near their diagonal, so the resampling runs along
// fixed-lag lines (the smooth center direction): even lags sit on grid
// centers directly, odd lags are refined by a half step along the line.
inline SampledSymbol symbol_from_kernel(const OperatorKernel& k, std::string label = "") {
    k.check_finite("symbol_from_kernel");
    const PhaseGrid& g = k.grid;
    const std::size_t n = g.n();
    const long nl = static_cast<long>(n);
    // strips[r][i]: kappa at center x_i and lag s_r = (r - n/2) dx. Strips
    // leaving the window are zero-extended (kernels of localized symbols decay
    // in separation).
    std::vector<std::vector<cplx>> strips(n, std::vector<cplx>(n, cplx(0.0)));
    parallel_for(n, [&](std::size_t r) {
        const long rho = static_cast<long>(r) - nl / 2;
        if ((rho & 1) == 0) {
            const long h = rho / 2;
            for (long i = 0; i < nl; ++i) {
                const long a = i - h, b = i + h;
                if (a < 0 || b < 0 || a >= nl || b >= nl) continue;
                strips[r][static_cast<std::size_t>(i)] =
                    k.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
            }
            return;
        }
        // first-index line of lag rho; its band-limited half-step refinement
        // supplies the half-integer centers. The stretch of first indices
        // falling outside the window is bridged by a smooth periodic blend of
        // the two end values, so non-decaying kernel lines (constant for pure
        // momentum symbols) do not ring, and decaying ones stay near zero.
        std::vector<cplx> line(n, cplx(0.0));
        const long a_lo = std::max<long>(0, -rho);
        const long a_hi = nl - 1 - std::max<long>(0, rho);
        for (long a = a_lo; a <= a_hi; ++a)
            line[static_cast<std::size_t>(a)] =
                k.at(static_cast<std::size_t>(a), static_cast<std::size_t>(a + rho));
        // Bridge anchors sit a few cells inside the window: the outermost
        // entries of composed kernels carry quadrature-truncation noise.
        const long pad = nl / 8;
        if (a_hi - a_lo > 2 * pad + 2) {
            const long lo_a = a_lo + pad, hi_a = a_hi - pad;
            const cplx lo = line[static_cast<std::size_t>(lo_a)];
            const cplx hi = line[static_cast<std::size_t>(hi_a)];
            const long gap = std::labs(rho) + 2 * pad;
            for (long s = 1; s <= gap; ++s) {
                const double u = 0.5 - 0.5 * std::cos(pi * static_cast<double>(s) / (gap + 1));
                const long a = ((hi_a + s) % nl + nl) % nl;
                line[static_cast<std::size_t>(a)] = hi + (lo - hi) * u;
            }
        }
        const std::vector<cplx> fine = trig_interpolate_half(line);
        for (long i = 0; i < nl; ++i) {
            // need first index a = i - rho/2, i.e. fine position m = 2a + 1
            const long m = 2 * i - rho + 1;
            const long mw = ((m % (2 * nl)) + 2 * nl) % (2 * nl);
            strips[r][static_cast<std::size_t>(i)] = fine[static_cast<std::size_t>(mw)];
        }
    });
    SampledSymbol out(g, std::move(label));
    parallel_for(n, [&](std::size_t i) {
        std::vector<cplx> strip(n);
        for (std::size_t r = 0; r < n; ++r) strip[r] = strips[r][i];
        std::vector<cplx> row = centered_dft(strip, +1);
        for (std::size_t j = 0; j < n; ++j) out.at(i, j) = g.dx() * row[j];
    });
    return out;
}

struct WignerResult {
    SampledSymbol symbol;
    double max_abs_imag = 0.0;
    double norm = 0.0;
};

// Wigner function of a normalized wavefunction:
// rho(x,p) = (1/2pi hbar) Int psi(x+y/2) conj(psi(x-y/2)) e^{-iyp/hbar} dy.
// The correlation is sampled on the half-step grid (one y step per grid cell)
// and transformed row by row; the result is real up to roundoff, checked at
// 1e-10 before the imaginary part is dropped.
inline WignerResult wigner_from_wavefunction(const ComplexField1D& psi, std::string label = "") {
    psi.check_finite("wigner_from_wavefunction");
    const PhaseGrid& g = psi.grid;
    const std::size_t n = g.n();
    const double nrm = psi.norm_l2_sq();
    if (std::abs(nrm - 1.0) > 1e-8)
        throw not_normalized_error("wigner_from_wavefunction: |psi|^2 integrates to " +
                                   std::to_string(nrm));
    const std::vector<cplx> fine = trig_interpolate_half(psi.values);
    WignerResult res{SampledSymbol(g, std::move(label)), 0.0, 0.0};
    const double scale = g.dx() / (2.0 * pi * g.hbar());
    parallel_for(n, [&](std::size_t i) {
        std::vector<cplx> corr(n, cplx(0.0));
        const long center = 2 * static_cast<long>(i) + 1;
        for (std::size_t k = 0; k < n; ++k) {
            const long off = static_cast<long>(k) - static_cast<long>(n) / 2;
            const long mp = center + off;
            const long mm = center - off;
            if (mp < 0 || mm < 0 || mp >= 2 * static_cast<long>(n) || mm >= 2 * static_cast<long>(n))
                continue;
            corr[k] = fine[static_cast<std::size_t>(mp)] * std::conj(fine[static_cast<std::size_t>(mm)]);
        }
        std::vector<cplx> row = centered_dft(corr, -1);
        for (std::size_t j = 0; j < n; ++j) res.symbol.at(i, j) = scale * row[j];
    });
    res.max_abs_imag = res.symbol.max_abs_imag();
    if (res.max_abs_imag > 1e-10)
        throw error("wigner_from_wavefunction: imaginary residue above 1e-10");
    res.symbol.drop_imag();
    res.norm = res.symbol.norm();
    return res;
}

// Phase-space pairing Int rho a dx dp (plain Riemann sum, O(dx dp) for smooth
// integrands).
inline cplx expectation(const SampledSymbol& rho, const SampledSymbol& a) {
    require_same_grid(rho.grid(), a.grid(), "expectation");
    cplx s(0.0);
    const std::size_t total = rho.field.values.size();
    for (std::size_t i = 0; i < total; ++i) s += rho.field.values[i] * a.field.values[i];
    return s * rho.grid().dx() * rho.grid().dp();
}

// Symbol of |x0><xf|: a pure phase times a position delta, kept analytic so
// the delta can be eliminated exactly in downstream integrals.
struct NondiagonalSymbol {
    double x0;
    double xf;

    double midpoint() const { return 0.5 * (x0 + xf); }
    double separation() const { return xf - x0; }

    // Int rho_{f,0}(x,p) F(x,p) dx dp = (1/2pi hbar) Int e^{i(xf-x0)p/hbar} F(mid, p) dp,
    // evaluated by the grid quadrature along the p axis.
    cplx pair_with(const std::function<cplx(double, double)>& f, const PhaseGrid& g) const {
        const double mid = midpoint();
        const double d = separation();
        cplx s(0.0);
        for (std::size_t j = 0; j < g.n(); ++j) {
            const double ph = d * g.p(j) / g.hbar();
            s += cplx(std::cos(ph), std::sin(ph)) * f(mid, g.p(j));
        }
        return s * g.dp() / (2.0 * pi * g.hbar());
    }
};

}  // namespace moyal
