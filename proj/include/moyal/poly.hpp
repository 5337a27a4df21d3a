#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "moyal/errors.hpp"
#include "moyal/grid.hpp"
#include "moyal/weyl.hpp"

namespace moyal {

// Bivariate polynomial in (x, p) with complex coefficients, total degree <= 8.
// The differential star product terminates on polynomials, so this route is
// exact and serves as the oracle for the grid routes.
class PolySymbol {
public:
    static constexpr int max_degree = 8;

    explicit PolySymbol(double hbar = 1.0) : hbar_(hbar) { coef_.fill(cplx(0.0)); }

    static PolySymbol constant(cplx c, double hbar = 1.0) {
        PolySymbol f(hbar);
        f.coef(0, 0) = c;
        return f;
    }
    static PolySymbol x(double hbar = 1.0) {
        PolySymbol f(hbar);
        f.coef(1, 0) = 1.0;
        return f;
    }
    static PolySymbol p(double hbar = 1.0) {
        PolySymbol f(hbar);
        f.coef(0, 1) = 1.0;
        return f;
    }
    // p^2/2m + m w^2 x^2 / 2
    static PolySymbol harmonic(double m, double w, double hbar = 1.0) {
        PolySymbol f(hbar);
        f.coef(0, 2) = 0.5 / m;
        f.coef(2, 0) = 0.5 * m * w * w;
        return f;
    }

    double hbar() const { return hbar_; }
    cplx& coef(int a, int b) { return coef_[idx(a, b)]; }
    const cplx& coef(int a, int b) const { return coef_[idx(a, b)]; }

    int total_degree() const {
        int d = -1;
        for (int a = 0; a <= max_degree; ++a)
            for (int b = 0; b <= max_degree; ++b)
                if (coef_[idx(a, b)] != cplx(0.0)) d = std::max(d, a + b);
        return d;
    }

    cplx eval(double xv, double pv) const {
        cplx s(0.0);
        for (int a = max_degree; a >= 0; --a) {
            cplx row(0.0);
            for (int b = max_degree; b >= 0; --b) row = row * pv + coef_[idx(a, b)];
            s = s * xv + row;
        }
        return s;
    }

    PolySymbol dx() const {
        PolySymbol out(hbar_);
        for (int a = 1; a <= max_degree; ++a)
            for (int b = 0; b <= max_degree; ++b) out.coef(a - 1, b) = coef_[idx(a, b)] * double(a);
        return out;
    }
    PolySymbol dp() const {
        PolySymbol out(hbar_);
        for (int a = 0; a <= max_degree; ++a)
            for (int b = 1; b <= max_degree; ++b) out.coef(a, b - 1) = coef_[idx(a, b)] * double(b);
        return out;
    }

    PolySymbol conj() const {
        PolySymbol out(hbar_);
        for (std::size_t i = 0; i < coef_.size(); ++i) out.coef_[i] = std::conj(coef_[i]);
        return out;
    }

    PolySymbol operator+(const PolySymbol& o) const {
        PolySymbol out(hbar_);
        for (std::size_t i = 0; i < coef_.size(); ++i) out.coef_[i] = coef_[i] + o.coef_[i];
        return out;
    }
    PolySymbol operator-(const PolySymbol& o) const {
        PolySymbol out(hbar_);
        for (std::size_t i = 0; i < coef_.size(); ++i) out.coef_[i] = coef_[i] - o.coef_[i];
        return out;
    }
    PolySymbol operator*(cplx s) const {
        PolySymbol out(hbar_);
        for (std::size_t i = 0; i < coef_.size(); ++i) out.coef_[i] = coef_[i] * s;
        return out;
    }

    // Pointwise product; throws if the degree bound would be exceeded.
    PolySymbol operator*(const PolySymbol& o) const {
        if (total_degree() >= 0 && o.total_degree() >= 0 &&
            total_degree() + o.total_degree() > max_degree)
            throw degree_overflow_error("PolySymbol: product degree exceeds bound");
        PolySymbol out(hbar_);
        for (int a = 0; a <= max_degree; ++a)
            for (int b = 0; b <= max_degree; ++b) {
                if (coef_[idx(a, b)] == cplx(0.0)) continue;
                for (int c = 0; a + c <= max_degree; ++c)
                    for (int d = 0; b + d <= max_degree; ++d)
                        out.coef(a + c, b + d) += coef_[idx(a, b)] * o.coef_[idx(c, d)];
            }
        return out;
    }

    double max_coeff_abs() const {
        double m = 0.0;
        for (const cplx& z : coef_) m = std::max(m, std::abs(z));
        return m;
    }

    SampledSymbol sample(const PhaseGrid& g, std::string label = "") const {
        return SampledSymbol::from_function(
            g, [this](double xv, double pv) { return eval(xv, pv); }, std::move(label));
    }

private:
    static std::size_t idx(int a, int b) { return std::size_t(a) * (max_degree + 1) + std::size_t(b); }
    double hbar_;
    std::array<cplx, (max_degree + 1) * (max_degree + 1)> coef_;
};

// Moyal star product in the differential representation:
// f*g = sum_{m,n} (i hbar/2)^{m+n} (-1)^m/(m! n!) (dp^m dx^n f)(dp^n dx^m g).
// Finite sum on polynomials.
inline PolySymbol star_poly(const PolySymbol& f, const PolySymbol& g) {
    if (f.total_degree() >= 0 && g.total_degree() >= 0 &&
        f.total_degree() + g.total_degree() > PolySymbol::max_degree)
        throw degree_overflow_error("star_poly: result degree exceeds bound");
    const double hbar = f.hbar();
    PolySymbol out(hbar);
    PolySymbol fm = f;  // dp^m f
    double mfact = 1.0;
    for (int m = 0; m <= PolySymbol::max_degree + 1; ++m) {
        if (m > 0) {
            fm = fm.dp();
            mfact *= m;
            if (fm.total_degree() < 0) break;
        }
        PolySymbol fmn = fm;  // dp^m dx^n f
        double nfact = 1.0;
        for (int n = 0; n <= PolySymbol::max_degree + 1; ++n) {
            if (n > 0) {
                fmn = fmn.dx();
                nfact *= n;
                if (fmn.total_degree() < 0) break;
            }
            // dp^n dx^m g
            PolySymbol gnm = g;
            for (int k = 0; k < n; ++k) gnm = gnm.dp();
            for (int k = 0; k < m; ++k) gnm = gnm.dx();
            if (gnm.total_degree() < 0 && (m > 0 || n > 0)) continue;
            const cplx pref = std::pow(cplx(0.0, hbar / 2.0), m + n) *
                              ((m & 1) ? -1.0 : 1.0) / (mfact * nfact);
            out = out + (fmn * gnm) * pref;
        }
    }
    return out;
}

inline PolySymbol moyal_bracket(const PolySymbol& f, const PolySymbol& g) {
    const cplx inv_ih = 1.0 / cplx(0.0, f.hbar());
    return (star_poly(f, g) - star_poly(g, f)) * inv_ih;
}

inline PolySymbol poisson_bracket(const PolySymbol& f, const PolySymbol& g) {
    return f.dx() * g.dp() - f.dp() * g.dx();
}

}  // namespace moyal
