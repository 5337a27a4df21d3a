#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "moyal/errors.hpp"
#include "moyal/fft.hpp"
#include "moyal/grid.hpp"
#include "moyal/parallel.hpp"
#include "moyal/poly.hpp"
#include "moyal/weyl.hpp"

namespace moyal {

// Reference numeric star product: f*g = Q^{-1}(Q(f) Q(g)), operator
// composition through the discrete Weyl maps. O(n^3).
inline SampledSymbol star_kernel(const SampledSymbol& f, const SampledSymbol& g,
                                 std::string label = "") {
    require_same_grid(f.grid(), g.grid(), "star_kernel");
    OperatorKernel kf = kernel_from_symbol(f);
    OperatorKernel kg = kernel_from_symbol(g);
    OperatorKernel prod = compose(kf, kg);
    return symbol_from_kernel(prod, std::move(label));
}

// Integral representation, factorized so the 4D quadrature costs O(n^4):
// (f*g)(x,p) = (1/(pi hbar)^2) Int f(a,b) g(c,d)
//              e^{-(2i/hbar)(p(a-c) + x(d-b) + (cb - ad))} da db dc dd
//            = (1/(pi hbar)^2) Int db dd e^{-2ix(d-b)/hbar} F(b, p-d) G(d, p-b)
// with F, G half-transforms of f and g along their position slot. The outer
// b, d quadratures run on the half-step momentum lattice: the position sums
// produce Dirichlet spikes at the doubled frequency whose mass a full-step
// quadrature would double-count. F is zeroed past |u| = (n/4) dp, where the
// position grid stops resolving 2u/hbar and only aliases would remain. Small
// instances only; this is the oracle route.
inline SampledSymbol star_integral(const SampledSymbol& f, const SampledSymbol& g,
                                   std::string label = "") {
    require_same_grid(f.grid(), g.grid(), "star_integral");
    const PhaseGrid& gr = f.grid();
    const std::size_t n = gr.n();
    if (n > 64) throw grid_too_large_error("star_integral: n_x > 64");
    const double hbar = gr.hbar();
    const double dph = 0.5 * gr.dp();

    // p-refined samples: rows are positions, columns the half-step p lattice
    // p_half(m) = (m - n - 1) dph, m in [0, 2n), so fine[2l+1] = p_l
    auto refine_p = [&](const SampledSymbol& s) {
        std::vector<cplx> out(n * 2 * n);
        std::vector<cplx> row(n);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t l = 0; l < n; ++l) row[l] = s.at(a, l);
            std::vector<cplx> fine = trig_interpolate_half(row);
            for (std::size_t m = 0; m < 2 * n; ++m) out[a * 2 * n + m] = fine[m];
        }
        return out;
    };
    const std::vector<cplx> fp = refine_p(f);
    const std::vector<cplx> gp = refine_p(g);

    // u lattice: u = (t - (2n - 1)) dph, t in [0, 4n - 1)
    const std::size_t nu = 4 * n - 1;
    const double u_cut = 0.25 * static_cast<double>(n) * gr.dp() * (1.0 + 1e-12);
    std::vector<cplx> F(2 * n * nu, cplx(0.0)), G(2 * n * nu, cplx(0.0));
    parallel_for(2 * n, [&](std::size_t b2) {
        for (std::size_t t = 0; t < nu; ++t) {
            const double u = (static_cast<double>(t) - static_cast<double>(2 * n - 1)) * dph;
            if (std::abs(u) > u_cut) continue;
            cplx sf(0.0), sg(0.0);
            for (std::size_t a = 0; a < n; ++a) {
                const double ph = 2.0 * gr.x(a) * u / hbar;
                const cplx em(std::cos(ph), -std::sin(ph));
                sf += fp[a * 2 * n + b2] * em;
                sg += gp[a * 2 * n + b2] * std::conj(em);
            }
            F[b2 * nu + t] = sf * gr.dx();
            G[b2 * nu + t] = sg * gr.dx();
        }
    });
    SampledSymbol out(gr, std::move(label));
    const double pref = dph * dph / (pi * pi * hbar * hbar);
    parallel_for(n, [&](std::size_t i) {
        std::vector<cplx> wphase(nu);
        for (std::size_t w = 0; w < nu; ++w) {
            const double dv = (static_cast<double>(w) - static_cast<double>(2 * n - 1)) * dph;
            const double ph = -2.0 * gr.x(i) * dv / hbar;
            wphase[w] = cplx(std::cos(ph), std::sin(ph));
        }
        for (std::size_t j = 0; j < n; ++j) {
            // p_j corresponds to half-lattice index j2 = 2j + 1
            const std::size_t j2 = 2 * j + 1;
            cplx s(0.0);
            for (std::size_t b2 = 0; b2 < 2 * n; ++b2) {
                const std::size_t tg = j2 - b2 + (2 * n - 1);
                for (std::size_t d2 = 0; d2 < 2 * n; ++d2) {
                    const std::size_t tf = j2 - d2 + (2 * n - 1);
                    s += wphase[d2 - b2 + (2 * n - 1)] * F[b2 * nu + tf] * G[d2 * nu + tg];
                }
            }
            out.at(i, j) = pref * s;
        }
    });
    return out;
}

// H = 0 reduction of the phase-space path integral with two operator
// insertions: the minimal slicing leaves one intermediate position q1, the two
// insertion momenta, and the Fourier variable y,
//   (f*g)(x,p) = 2 Int dy e^{-2iyp/hbar} Int dq1 [f-kernel](x+y, q1) [g-kernel](q1, x-y),
// all four quadratures discretized directly (no shared FFT machinery with
// star_kernel). The y quadrature runs on the half-step lattice so its doubled
// frequency stays resolvable, which puts the transform midpoints on the
// quarter-step x grid. Consistency target for the integral route.
inline SampledSymbol star_path(const SampledSymbol& f, const SampledSymbol& g,
                               std::string label = "") {
    require_same_grid(f.grid(), g.grid(), "star_path");
    const PhaseGrid& gr = f.grid();
    const std::size_t n = gr.n();
    const long nl = static_cast<long>(n);
    if (n > 64) throw grid_too_large_error("star_path: n_x > 64");
    const double hbar = gr.hbar();

    // quarter-step x samples: Q[mu][l], mu in [0, 4n) at x_min + mu dx/4
    auto quarter = [&](const SampledSymbol& s) {
        const std::vector<cplx> fine = s.fine_x_samples();  // 2n rows at dx/2 nodes
        std::vector<cplx> out(4 * n * n);
        std::vector<cplx> col(2 * n);
        for (std::size_t l = 0; l < n; ++l) {
            for (std::size_t m = 0; m < 2 * n; ++m) col[m] = fine[m * n + l];
            std::vector<cplx> q = trig_interpolate_half_nodes(col);
            for (std::size_t mu = 0; mu < 4 * n; ++mu) out[mu * n + l] = q[mu];
        }
        return out;
    };
    const std::vector<cplx> fq = quarter(f);
    const std::vector<cplx> gq = quarter(g);

    // T[mu][L + 2n] = dp sum_l Q[mu][l] e^{i p_l L dx/(2 hbar)}, |L| <= n
    // (half-cell lag units; separations past the principal band would alias).
    const long lag_span = 2 * nl;
    const std::size_t nlag = 2 * static_cast<std::size_t>(lag_span) + 1;
    auto build = [&](const std::vector<cplx>& Q) {
        std::vector<cplx> T(4 * n * nlag, cplx(0.0));
        parallel_for(4 * n, [&](std::size_t mu) {
            for (long L = -nl; L <= nl; ++L) {
                const double lag = static_cast<double>(L) * 0.5 * gr.dx();
                cplx s(0.0);
                for (std::size_t l = 0; l < n; ++l) {
                    const double ph = gr.p(l) * lag / hbar;
                    s += Q[mu * n + l] * cplx(std::cos(ph), std::sin(ph));
                }
                T[mu * nlag + static_cast<std::size_t>(L + lag_span)] = s * gr.dp();
            }
        });
        return T;
    };
    const std::vector<cplx> Tf = build(fq);
    const std::vector<cplx> Tg = build(gq);

    // S[i][k] = sum_{q1} Tf[M_f][L_f] Tg[M_g][L_g] with y_k = (k - n) dx/2 and
    // the intermediate position q1 also on the half-step lattice (a full-step
    // q1 sum would couple momenta half a Brillouin zone apart).
    std::vector<cplx> S(n * 2 * n, cplx(0.0));
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t k = 0; k < 2 * n; ++k) {
            const long ko = static_cast<long>(k) - nl;  // y in dx/2 units
            cplx s(0.0);
            for (std::size_t c2 = 0; c2 < 2 * n; ++c2) {
                const long mf = 2 * static_cast<long>(i) + 2 + static_cast<long>(c2) + ko;
                const long mg = 2 * static_cast<long>(i) + 2 + static_cast<long>(c2) - ko;
                if (mf < 0 || mg < 0 || mf >= 4 * nl || mg >= 4 * nl) continue;
                const long lf = 2 * static_cast<long>(i) + ko - static_cast<long>(c2);
                const long lg = static_cast<long>(c2) - 2 * static_cast<long>(i) + ko;
                if (std::labs(lf) > lag_span || std::labs(lg) > lag_span) continue;
                s += Tf[static_cast<std::size_t>(mf) * nlag +
                        static_cast<std::size_t>(lf + lag_span)] *
                     Tg[static_cast<std::size_t>(mg) * nlag +
                        static_cast<std::size_t>(lg + lag_span)];
            }
            S[i * 2 * n + k] = s;
        }
    });
    SampledSymbol out(gr, std::move(label));
    const double pref =
        2.0 * (0.5 * gr.dx()) * (0.5 * gr.dx()) / ((2.0 * pi * hbar) * (2.0 * pi * hbar));
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx s(0.0);
            for (std::size_t k = 0; k < 2 * n; ++k) {
                const double y = (static_cast<double>(k) - static_cast<double>(nl)) * 0.5 * gr.dx();
                const double ph = -2.0 * y * gr.p(j) / hbar;
                s += S[i * 2 * n + k] * cplx(std::cos(ph), std::sin(ph));
            }
            out.at(i, j) = pref * s;
        }
    });
    return out;
}

inline SampledSymbol moyal_bracket_grid(const SampledSymbol& f, const SampledSymbol& g,
                                        std::string label = "") {
    SampledSymbol fg = star_kernel(f, g);
    SampledSymbol gf = star_kernel(g, f);
    SampledSymbol out(f.grid(), std::move(label));
    const cplx inv_ih = 1.0 / cplx(0.0, f.grid().hbar());
    for (std::size_t i = 0; i < out.field.values.size(); ++i)
        out.field.values[i] = (fg.field.values[i] - gf.field.values[i]) * inv_ih;
    return out;
}

namespace detail {

// Spectral derivative along one grid axis (Nyquist mode zeroed).
inline void spectral_derivative(ComplexField2D& fld, Axis axis) {
    const PhaseGrid& g = fld.grid;
    const std::size_t n = g.n();
    const double spacing = (axis == Axis::x) ? g.dx() : g.dp();
    const double klen = 2.0 * pi / (spacing * static_cast<double>(n));
    std::vector<cplx> line(n);
    for (std::size_t outer = 0; outer < n; ++outer) {
        for (std::size_t inner = 0; inner < n; ++inner) {
            const std::size_t ix = (axis == Axis::x) ? inner : outer;
            const std::size_t ip = (axis == Axis::x) ? outer : inner;
            line[inner] = fld.at(ix, ip);
        }
        fft_radix2(line, -1);
        for (std::size_t v = 0; v < n; ++v) {
            long freq = static_cast<long>(v);
            if (freq > static_cast<long>(n) / 2) freq -= static_cast<long>(n);
            if (freq == static_cast<long>(n) / 2) freq = 0;  // drop Nyquist
            line[v] *= cplx(0.0, klen * static_cast<double>(freq)) / static_cast<double>(n);
        }
        fft_radix2(line, +1);
        for (std::size_t inner = 0; inner < n; ++inner) {
            const std::size_t ix = (axis == Axis::x) ? inner : outer;
            const std::size_t ip = (axis == Axis::x) ? outer : inner;
            fld.at(ix, ip) = line[inner];
        }
    }
}

}  // namespace detail

// Left star multiplication by a polynomial H of degree <= 2 via the Bopp
// shift H(x + i hbar/2 d_p, p - i hbar/2 d_x), Weyl-symmetrized in the mixed
// monomial; derivatives are spectral.
inline ComplexField2D bopp_apply(const PolySymbol& H, const SampledSymbol& rho) {
    if (H.total_degree() > 2)
        throw degree_overflow_error("bopp_apply: H degree must be <= 2");
    const PhaseGrid& g = rho.grid();
    const std::size_t n = g.n();
    const double hbar = g.hbar();

    auto apply_A = [&](const ComplexField2D& in) {  // x + (i hbar / 2) d_p
        ComplexField2D d = in;
        detail::spectral_derivative(d, Axis::p);
        ComplexField2D out = in;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out.at(i, j) = g.x(i) * in.at(i, j) + cplx(0.0, 0.5 * hbar) * d.at(i, j);
        return out;
    };
    auto apply_B = [&](const ComplexField2D& in) {  // p - (i hbar / 2) d_x
        ComplexField2D d = in;
        detail::spectral_derivative(d, Axis::x);
        ComplexField2D out = in;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out.at(i, j) = g.p(j) * in.at(i, j) - cplx(0.0, 0.5 * hbar) * d.at(i, j);
        return out;
    };

    const ComplexField2D& r = rho.field;
    ComplexField2D acc(g);
    auto add = [&](const ComplexField2D& t, cplx w) {
        if (w == cplx(0.0)) return;
        for (std::size_t i = 0; i < acc.values.size(); ++i) acc.values[i] += w * t.values[i];
    };
    add(r, H.coef(0, 0));
    if (H.coef(1, 0) != cplx(0.0) || H.coef(2, 0) != cplx(0.0) || H.coef(1, 1) != cplx(0.0)) {
        ComplexField2D Ar = apply_A(r);
        add(Ar, H.coef(1, 0));
        if (H.coef(2, 0) != cplx(0.0)) add(apply_A(Ar), H.coef(2, 0));
        if (H.coef(1, 1) != cplx(0.0)) {
            ComplexField2D BA = apply_B(Ar);
            ComplexField2D AB = apply_A(apply_B(r));
            for (std::size_t i = 0; i < acc.values.size(); ++i)
                acc.values[i] += H.coef(1, 1) * 0.5 * (AB.values[i] + BA.values[i]);
        }
    }
    if (H.coef(0, 1) != cplx(0.0) || H.coef(0, 2) != cplx(0.0)) {
        ComplexField2D Br = apply_B(r);
        add(Br, H.coef(0, 1));
        if (H.coef(0, 2) != cplx(0.0)) add(apply_B(Br), H.coef(0, 2));
    }
    return acc;
}

// || H * rho - E rho ||_inf / || rho ||_inf on the interior mask.
inline double star_genvalue_residual(const PolySymbol& H, const SampledSymbol& rho, double E) {
    const PhaseGrid& g = rho.grid();
    ComplexField2D hr = bopp_apply(H, rho);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j) {
            if (!g.interior(i, j)) continue;
            num = std::max(num, std::abs(hr.at(i, j) - E * rho.at(i, j)));
            den = std::max(den, std::abs(rho.at(i, j)));
        }
    if (den == 0.0) throw error("star_genvalue_residual: rho vanishes on the interior");
    return num / den;
}

namespace detail {

struct QuadraticHamiltonian {
    enum class Kind { free, harmonic, linear } kind;
    double mass = 1.0;
    double omega = 0.0;
    double alpha = 0.0;  // H = alpha p^2 + beta x for the linear kind
    double beta = 0.0;
};

inline QuadraticHamiltonian classify_quadratic(const PolySymbol& H) {
    if (H.total_degree() > 2)
        throw unsupported_hamiltonian_error("evolve_wigner: H degree must be <= 2");
    const cplx cxx = H.coef(2, 0), cpp = H.coef(0, 2), cxp = H.coef(1, 1);
    const cplx cx = H.coef(1, 0), cp = H.coef(0, 1);
    auto realpos = [](cplx z) { return z.imag() == 0.0 && z.real() > 0.0; };
    auto iszero = [](cplx z) { return z == cplx(0.0); };
    if (!realpos(cpp) || !iszero(cxp) || !iszero(cp))
        throw unsupported_hamiltonian_error(
            "evolve_wigner: supported families are p^2/2m (+ m w^2 x^2/2 | + beta x)");
    QuadraticHamiltonian q;
    if (realpos(cxx) && iszero(cx)) {
        q.kind = QuadraticHamiltonian::Kind::harmonic;
        q.mass = 0.5 / cpp.real();
        q.omega = 2.0 * std::sqrt(cxx.real() * cpp.real());
    } else if (iszero(cxx) && iszero(cx)) {
        q.kind = QuadraticHamiltonian::Kind::free;
        q.mass = 0.5 / cpp.real();
    } else if (iszero(cxx) && cx.imag() == 0.0) {
        q.kind = QuadraticHamiltonian::Kind::linear;
        q.alpha = cpp.real();
        q.beta = cx.real();
    } else {
        throw unsupported_hamiltonian_error("evolve_wigner: unsupported quadratic Hamiltonian");
    }
    return q;
}

// Closed-form star exponential Exp_*(-i t H / hbar) for the supported
// quadratic families, as a (q,p) evaluator at complex t.
inline std::function<cplx(double, double)> star_exp_evaluator(const QuadraticHamiltonian& q,
                                                              cplx t, double hbar) {
    using K = QuadraticHamiltonian::Kind;
    if (q.kind == K::free) {
        const double m = q.mass;
        return [=](double, double pv) {
            return std::exp(cplx(0.0, -1.0) * t * pv * pv / (2.0 * m * hbar));
        };
    }
    if (q.kind == K::harmonic) {
        const double m = q.mass, w = q.omega;
        const cplx half = 0.5 * w * t;
        const cplx cs = std::cos(half);
        if (std::abs(cs) < 1e-6)
            throw caustic_singularity_error("star exponential: omega t at an odd multiple of pi");
        const cplx sec = 1.0 / cs;
        const cplx tn = std::tan(half);
        return [=](double xv, double pv) {
            const double H = 0.5 * pv * pv / m + 0.5 * m * w * w * xv * xv;
            return sec * std::exp(cplx(0.0, -2.0 * H / (w * hbar)) * tn);
        };
    }
    const double a = q.alpha, b = q.beta;
    return [=](double xv, double pv) {
        const cplx arg = b * xv + a * pv * pv + a * b * b * t * t / 12.0;
        return std::exp(cplx(0.0, -1.0) * t * arg / hbar);
    };
}

}  // namespace detail

struct EvolveResult {
    SampledSymbol rho;
    double norm = 0.0;
    double max_abs_imag = 0.0;
};

namespace detail {

// Position kernel of the star exponential (the quantum propagator) for one
// time step, sampled from the closed forms.
inline OperatorKernel step_kernel(const QuadraticHamiltonian& q, const PhaseGrid& g, double tau) {
    using K = QuadraticHamiltonian::Kind;
    const std::size_t n = g.n();
    const double hbar = g.hbar();
    OperatorKernel out(g);
    auto fill = [&](auto&& kfn) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) out.at(a, b) = kfn(g.x(a), g.x(b));
    };
    if (q.kind == K::free) {
        const double m = q.mass;
        const cplx pref = std::sqrt(m / (2.0 * pi * cplx(0.0, 1.0) * hbar * tau));
        fill([&](double x, double y) {
            const double d = x - y;
            return pref * std::exp(cplx(0.0, m * d * d / (2.0 * hbar * tau)));
        });
        return out;
    }
    if (q.kind == K::harmonic) {
        const double m = q.mass, w = q.omega;
        const double s = std::sin(w * tau), c = std::cos(w * tau);
        const cplx pref = std::sqrt(m * w / (2.0 * pi * cplx(0.0, 1.0) * hbar * s));
        fill([&](double x, double y) {
            return pref * std::exp(cplx(0.0, m * w / (2.0 * hbar * s) *
                                                 ((x * x + y * y) * c - 2.0 * x * y)));
        });
        return out;
    }
    // linear kind: H = alpha p^2 + beta x, mass 1/(2 alpha), force -beta
    const double al = q.alpha, be = q.beta;
    const cplx pref = std::sqrt(1.0 / (4.0 * pi * al * cplx(0.0, 1.0) * hbar * tau));
    fill([&](double x, double y) {
        const double d = x - y;
        const double sc = d * d / (4.0 * al * tau) - 0.5 * be * tau * (x + y) -
                          al * be * be * tau * tau * tau / 12.0;
        return pref * std::exp(cplx(0.0, sc / hbar));
    });
    return out;
}

// Split t into signed steps with magnitudes inside [tau_min, tau_max], the
// window where the step kernel stays resolvable on the grid: short steps make
// the propagator delta-like, long oscillator steps approach the caustic.
// Residues below tau_min are realized as a difference of two representable
// steps (the evolution is an exact group). Requires tau_max >= 2 tau_min.
inline std::vector<double> step_plan(double t, double tau_min, double tau_max) {
    if (!(tau_max >= 2.0 * tau_min))
        throw error("evolve_wigner: grid too coarse to host a step window");
    std::vector<double> steps;
    double r = t;
    const double chunk = 0.5 * (tau_min + tau_max);
    while (std::abs(r) > tau_max) {
        const double s = (r > 0.0 ? chunk : -chunk);
        steps.push_back(s);
        r -= s;
    }
    if (std::abs(r) < 1e-14) return steps;
    if (std::abs(r) >= tau_min) {
        steps.push_back(r);
        return steps;
    }
    const double sgn = (r > 0.0 ? 1.0 : -1.0);
    steps.push_back(sgn * (tau_min + std::abs(r)));
    steps.push_back(-sgn * tau_min);
    return steps;
}

}  // namespace detail

// rho(t) = Exp_*(-itH/hbar) * rho0 * Exp_*(+itH/hbar) through the star_kernel
// (operator composition) route. The star exponential enters through its
// operator kernel, i.e. the closed-form propagator, in steps sized so the
// kernel's quadratic phase stays resolvable; the step decomposition is exact
// by the group law. Negative steps use the adjoint kernel.
inline EvolveResult evolve_wigner(const SampledSymbol& rho0, const PolySymbol& H, double t,
                                  std::string label = "") {
    const PhaseGrid& g = rho0.grid();
    if (t == 0.0) {
        EvolveResult r{rho0, 0.0, 0.0};
        r.rho.label = std::move(label);
        r.norm = r.rho.norm();
        return r;
    }
    const detail::QuadraticHamiltonian q = detail::classify_quadratic(H);
    const double hbar = g.hbar();
    const double nyq = pi / g.dx();
    const double xm = std::max(std::abs(g.x_min()), std::abs(g.x_max()));
    std::vector<double> steps;
    if (q.kind == detail::QuadraticHamiltonian::Kind::harmonic) {
        // kernel frequency m w x_max (1 + |cos|)/(hbar |sin|) <= 3/4 Nyquist
        // bounds the step into [2 atan(1/A), pi - asin(1/A)]
        const double A = 0.75 * nyq * hbar / (q.mass * q.omega * xm);
        if (A < 2.0) throw error("evolve_wigner: grid too coarse for the oscillator kernel");
        const double wt_min = std::max(2.0 * std::atan(1.0 / A), std::asin(1.0 / A));
        const double wt_max = pi - std::asin(1.0 / A);
        steps = detail::step_plan(q.omega * t, wt_min, wt_max);
        for (double& s : steps) s /= q.omega;
    } else {
        const double meff = (q.kind == detail::QuadraticHamiltonian::Kind::free)
                                ? q.mass
                                : 1.0 / (2.0 * q.alpha);
        const double tau_min = meff * 2.0 * xm / (0.75 * nyq * hbar);
        steps = detail::step_plan(t, tau_min, std::max(2.0 * tau_min, std::abs(t)));
    }
    OperatorKernel kr = kernel_from_symbol(rho0);
    for (double tau : steps) {
        OperatorKernel u = detail::step_kernel(q, g, std::abs(tau));
        if (tau < 0.0) u = adjoint(u);
        kr = compose(u, compose(kr, adjoint(u)));
    }
    EvolveResult res{symbol_from_kernel(kr, std::move(label)), 0.0, 0.0};
    res.norm = res.rho.norm();
    res.max_abs_imag = res.rho.max_abs_imag();
    res.rho.drop_imag();
    return res;
}

// Proportionality constant in rho_0 * rho_0 = c rho_0 for the oscillator
// ground state, measured on the grid; ties the Fourier-Dirichlet pairing
// weight to the projector normalization. Expected near 1/(2 pi hbar).
inline double measure_star_projector_constant(const PhaseGrid& g, double m = 1.0,
                                              double omega = 1.0) {
    const double hbar = g.hbar();
    auto rho0 = [&](double xv, double pv) {
        const double H = 0.5 * pv * pv / m + 0.5 * m * omega * omega * xv * xv;
        return cplx(std::exp(-2.0 * H / (omega * hbar)) / (pi * hbar), 0.0);
    };
    SampledSymbol r = SampledSymbol::from_function(g, rho0, "rho0");
    SampledSymbol rr = star_kernel(r, r);
    // least-squares fit of rr = c r over the interior
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j) {
            if (!g.interior(i, j)) continue;
            num += (rr.at(i, j) * std::conj(r.at(i, j))).real();
            den += std::norm(r.at(i, j));
        }
    return num / den;
}

}  // namespace moyal
