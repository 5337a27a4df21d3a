#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "moyal/errors.hpp"
#include "moyal/fresnel.hpp"
#include "moyal/grid.hpp"
#include "moyal/parallel.hpp"
#include "moyal/propagators.hpp"
#include "moyal/special.hpp"
#include "moyal/star.hpp"
#include "moyal/weyl.hpp"

namespace moyal {

// Closed-form star exponentials Exp_*(-itH/hbar) for the worked families.
// The circle form is the unit-consistent sinc sum: sum_n e^{-iE_n t/hbar}
// sinc[pi(p/hbar - n)], which reduces to 1 at t = 0.
struct StarExpClosedForm {
    Family family = Family::free_particle;
    double hbar = 1.0;
    double mass = 1.0;
    double omega = 1.0;
    double inertia = 1.0;
    int n_max = 64;

    static StarExpClosedForm free_form(double m, double hbar = 1.0) {
        StarExpClosedForm f;
        f.family = Family::free_particle;
        f.mass = m;
        f.hbar = hbar;
        return f;
    }
    static StarExpClosedForm harmonic_form(double m, double w, double hbar = 1.0) {
        StarExpClosedForm f;
        f.family = Family::harmonic;
        f.mass = m;
        f.omega = w;
        f.hbar = hbar;
        return f;
    }
    static StarExpClosedForm linear_form(double hbar = 1.0) {
        StarExpClosedForm f;
        f.family = Family::linear_potential;
        f.hbar = hbar;
        return f;
    }
    static StarExpClosedForm circle_form(double inertia, int n_max = 64, double hbar = 1.0) {
        StarExpClosedForm f;
        f.family = Family::circle;
        f.inertia = inertia;
        f.n_max = n_max;
        f.hbar = hbar;
        return f;
    }

    cplx eval(double q, double p, cplx t) const {
        if (t == cplx(0.0)) return cplx(1.0, 0.0);
        switch (family) {
            case Family::free_particle:
                return std::exp(cplx(0.0, -1.0) * t * p * p / (2.0 * mass * hbar));
            case Family::harmonic: {
                const cplx half = 0.5 * omega * t;
                const cplx cs = std::cos(half);
                if (std::abs(cs) < 1e-6)
                    throw caustic_singularity_error("star exponential: omega t near odd pi");
                const double H = 0.5 * p * p / mass + 0.5 * mass * omega * omega * q * q;
                return (1.0 / cs) * std::exp(cplx(0.0, -2.0 * H / (omega * hbar)) * std::tan(half));
            }
            case Family::linear_potential:
                return std::exp(cplx(0.0, -1.0) * t * (q + p * p + t * t / 12.0) / hbar);
            case Family::circle: {
                const double nu = p / hbar;
                long ncut = n_max;
                if (t.imag() < 0.0) {
                    const double damp = hbar * (-t.imag()) / (2.0 * inertia);
                    ncut = std::max<long>(n_max, static_cast<long>(std::sqrt(30.0 / damp)) + 1);
                }
                cplx sum = sinc_pi(nu);
                for (long n = 1; n <= ncut; ++n) {
                    const cplx ph =
                        std::exp(cplx(0.0, -1.0) * hbar * double(n) * double(n) * t / (2.0 * inertia));
                    sum += ph * (sinc_pi(nu - double(n)) + sinc_pi(nu + double(n)));
                }
                return sum;
            }
            default:
                throw unsupported_family_error("StarExpClosedForm: no closed form for family");
        }
    }
};

// Unit-normalized oscillator Wigner level:
// rho_n = ((-1)^n / pi hbar) e^{-2H/(w hbar)} L_n(4H/(w hbar)).
inline double ho_wigner_level(unsigned n, double q, double p, double m, double w, double hbar) {
    const double H = 0.5 * p * p / m + 0.5 * m * w * w * q * q;
    const double arg = 4.0 * H / (w * hbar);
    const double sign = (n & 1) ? -1.0 : 1.0;
    return sign / (pi * hbar) * std::exp(-0.5 * arg) * laguerre(n, arg);
}

// Circle Wigner level in hbar-scaled momentum: rho_n = (1/2pi) sinc[pi(nu - n)].
inline double circle_wigner_level(int n, double nu) {
    return sinc_pi(nu - double(n)) / (2.0 * pi);
}

// Continuous-spectrum Wigner function of H = p^2 + q (delta-normalized in E):
// rho_E = (2^{2/3} / (2 pi hbar^{5/3})) Ai(2^{2/3} hbar^{-2/3} (p^2 + q - E)).
inline double airy_wigner_continuous(double q, double p, double E, double hbar) {
    const double two23 = std::cbrt(4.0);
    const double hb23 = std::cbrt(hbar * hbar);
    return two23 / (2.0 * pi * hbar * hb23) * airy_ai(two23 * (p * p + q - E) / hb23);
}

namespace detail {

// Quadratic propagator kernels K(xf,x0) = P exp[(i/hbar)(A xf^2 + B xf x0 +
// C x0^2 + D xf + E x0 + F)] for the Gaussian families, complex time allowed
// for the closed forms.
struct QuadKernel {
    cplx pref;
    cplx A{}, B{}, C{}, D{}, E{}, F{};
};

inline QuadKernel quad_kernel_coeffs(const PropagatorSpec& spec, cplx t) {
    if (t == cplx(0.0)) throw zero_time_error("quad_kernel_coeffs: t = 0");
    QuadKernel k;
    const double hbar = spec.hbar;
    switch (spec.family) {
        case Family::free_particle: {
            const double m = spec.mass;
            k.A = k.C = m / (2.0 * t);
            k.B = -m / t;
            k.pref = std::sqrt(m / (2.0 * pi * cplx(0.0, 1.0) * hbar * t));
            return k;
        }
        case Family::harmonic: {
            const double m = spec.mass, w = spec.omega;
            if (t.imag() == 0.0) {
                const double T = t.real();
                const double wt = w * std::abs(T);
                if (std::abs(wt / pi - std::round(wt / pi)) * pi < 1e-6)
                    throw caustic_singularity_error("quad_kernel_coeffs: omega t near caustic");
                if (T < 0.0) throw std::invalid_argument("quad_kernel_coeffs: t must be positive");
                const int nu = static_cast<int>(std::floor(wt / pi));
                const double s = std::sin(wt), c = std::cos(wt);
                k.A = k.C = m * w * c / (2.0 * s);
                k.B = -m * w / s;
                k.pref = std::sqrt(m * w / (2.0 * pi * hbar * std::abs(s))) *
                         std::exp(cplx(0.0, -(pi / 4.0 + 0.5 * pi * nu)));
                return k;
            }
            const cplx s = std::sin(w * t), c = std::cos(w * t);
            k.A = k.C = m * w * c / (2.0 * s);
            k.B = -m * w / s;
            k.pref = std::sqrt(m * w / (2.0 * pi * cplx(0.0, 1.0) * hbar * s));
            return k;
        }
        case Family::linear_potential: {
            k.A = k.C = 1.0 / (4.0 * t);
            k.B = -1.0 / (2.0 * t);
            k.D = k.E = -0.5 * t;
            k.F = -t * t * t / 12.0;
            k.pref = std::sqrt(1.0 / (4.0 * pi * cplx(0.0, 1.0) * hbar * t));
            return k;
        }
        case Family::quadratic: {
            if (t.imag() != 0.0)
                throw std::invalid_argument("quad_kernel_coeffs: quadratic engine needs real t");
            const GelfandYaglomResult gy = gelfand_yaglom(spec.model, hbar, t.real(), spec.steps);
            const double f = gy.action(0.0, 0.0);
            const double sp = gy.action(1.0, 0.0), sm = gy.action(-1.0, 0.0);
            const double tp = gy.action(0.0, 1.0), tm = gy.action(0.0, -1.0);
            k.A = 0.5 * (sp + sm) - f;
            k.D = 0.5 * (sp - sm);
            k.C = 0.5 * (tp + tm) - f;
            k.E = 0.5 * (tp - tm);
            k.B = gy.action(1.0, 1.0) - k.A - k.C - k.D - k.E - f;
            k.F = f;
            k.pref = gy.prefactor;
            return k;
        }
        case Family::sliced: {
            if (t.imag() != 0.0)
                throw std::invalid_argument("quad_kernel_coeffs: sliced engine needs real t");
            const SlicedKernel sk = time_sliced(spec.model, hbar, t.real(), spec.slices);
            k.A = sk.a_ff;
            k.B = sk.a_f0;
            k.C = sk.a_00;
            k.D = sk.b_f;
            k.E = sk.b_0;
            k.F = sk.c0;
            k.pref = sk.prefactor;
            return k;
        }
        default:
            throw unsupported_family_error("quad_kernel_coeffs: not a Gaussian family");
    }
}

}  // namespace detail

enum class StarExpRoute { fresnel, fft };

struct StarExpOptions {
    StarExpRoute route = StarExpRoute::fresnel;
    double fft_eps = 2e-3;       // time damping for the quadrature route
    std::size_t max_nodes = 1 << 20;
    std::size_t circle_nodes = 2048;
};

namespace detail {

// Quadrature ("fft") route: sample K on a damped q' window centered at the
// stationary point and integrate with Simpson; Richardson in the damping
// removes the O(eps) bias.
inline cplx star_exp_quadrature_once(const PropagatorSpec& spec, double q, double p, double t,
                                     double eps, std::size_t max_nodes) {
    const cplx tc = t * cplx(1.0, -eps);
    const QuadKernel k = quad_kernel_coeffs(spec, tc);
    const double hbar = spec.hbar;
    const cplx a = (k.A - k.B + k.C) / hbar;
    const cplx b = (2.0 * q * (k.A - k.C) + (k.D - k.E)) / hbar - 2.0 * p / hbar;
    if (a.imag() <= 0.0)
        throw window_too_small_error("star_exp quadrature: no damping in the q' Gaussian");
    const double are = (a.real() != 0.0) ? a.real() : a.imag();
    const double center = -0.5 * b.real() / are;
    const double width = std::sqrt(30.0 / a.imag());
    const double slope = 2.0 * std::abs(a) * width + std::abs(b + 2.0 * a * center);
    std::size_t nodes = static_cast<std::size_t>(width * slope * 12.0 / pi) + 64;
    nodes += nodes % 2;
    if (nodes > max_nodes)
        throw window_too_small_error("star_exp quadrature: node budget exceeded");
    const double lo = center - width, hi = center + width;
    const double h = (hi - lo) / static_cast<double>(nodes);
    auto integrand = [&](double qp) {
        const double ph = -2.0 * qp * p / hbar;
        return cplx(std::cos(ph), std::sin(ph)) * propagate(spec, q + qp, tc, q - qp);
    };
    cplx sum = integrand(lo) + integrand(hi);
    for (std::size_t i = 1; i < nodes; ++i)
        sum += integrand(lo + h * static_cast<double>(i)) * ((i & 1) ? 4.0 : 2.0);
    return 2.0 * sum * h / 3.0;
}

}  // namespace detail

// Exp_*(-itH/hbar)(q,p) = 2 Int e^{-2iq'p/hbar} K(q+q', t, q-q', 0) dq'.
// Gaussian families reduce to one Fresnel integral (analytic route, the
// default); the quadrature route brute-forces the damped window as a
// cross-check. The circle transform integrates the theta-form propagator over
// q' in (-pi/2, pi/2], which is the full (xf, x0) cover of the circle.
inline cplx star_exp_from_propagator(const PropagatorSpec& spec, double q, double p, cplx t,
                                     const StarExpOptions& opt = {}) {
    if (t == cplx(0.0)) return cplx(1.0, 0.0);
    const double hbar = spec.hbar;
    if (spec.family == Family::circle) {
        const std::size_t nodes = opt.circle_nodes + (opt.circle_nodes % 2);
        const double lo = -0.5 * pi, hi = 0.5 * pi;
        const double h = (hi - lo) / static_cast<double>(nodes);
        auto integrand = [&](double qp) {
            const double ph = -2.0 * qp * p / hbar;
            return cplx(std::cos(ph), std::sin(ph)) *
                   propagate_circle_theta(spec.inertia, hbar, q + qp, t, q - qp);
        };
        cplx sum = integrand(lo) + integrand(hi);
        for (std::size_t i = 1; i < nodes; ++i)
            sum += integrand(lo + h * static_cast<double>(i)) * ((i & 1) ? 4.0 : 2.0);
        return 2.0 * sum * h / 3.0;
    }
    if (opt.route == StarExpRoute::fft) {
        if (t.imag() != 0.0)
            throw std::invalid_argument("star_exp quadrature route expects real t");
        const cplx v1 = detail::star_exp_quadrature_once(spec, q, p, t.real(), opt.fft_eps,
                                                         opt.max_nodes);
        const cplx v2 = detail::star_exp_quadrature_once(spec, q, p, t.real(), 0.5 * opt.fft_eps,
                                                         opt.max_nodes);
        return 2.0 * v2 - v1;
    }
    const detail::QuadKernel k = detail::quad_kernel_coeffs(spec, t);
    GaussianExponent g;
    g.a = (k.A - k.B + k.C) / hbar;
    g.b = (2.0 * q * (k.A - k.C) + (k.D - k.E)) / hbar - 2.0 * p / hbar;
    g.c = (q * q * (k.A + k.B + k.C) + q * (k.D + k.E) + k.F) / hbar;
    return 2.0 * k.pref * fresnel_integral(g);
}

// Eq. (Kstar) direction: K(xf, t, x0) = (1/2pi hbar) Int e^{i(xf-x0)p/hbar}
// Exp_*(-itH((xf+x0)/2, p)) dp. Gaussian-in-p closed forms reduce to Fresnel;
// the circle reduces analytically through the sinc-box Fourier pair.
inline cplx propagator_from_star_exp(const StarExpClosedForm& cf, double xf, cplx t, double x0) {
    if (t == cplx(0.0)) throw zero_time_error("propagator_from_star_exp: t = 0");
    const double hbar = cf.hbar;
    const double mid = 0.5 * (xf + x0);
    const double d = xf - x0;
    switch (cf.family) {
        case Family::free_particle: {
            GaussianExponent g;
            g.a = -t / (2.0 * cf.mass * hbar);
            g.b = d / hbar;
            g.c = 0.0;
            return fresnel_integral(g) / (2.0 * pi * hbar);
        }
        case Family::harmonic: {
            const cplx half = 0.5 * cf.omega * t;
            const cplx cs = std::cos(half);
            if (std::abs(cs) < 1e-6)
                throw caustic_singularity_error("propagator_from_star_exp: omega t near odd pi");
            const cplx tn = std::tan(half);
            GaussianExponent g;
            g.a = -tn / (cf.mass * cf.omega * hbar);
            g.b = d / hbar;
            g.c = -tn * cf.mass * cf.omega * mid * mid / hbar;
            return fresnel_integral(g) / (cs * 2.0 * pi * hbar);
        }
        case Family::linear_potential: {
            GaussianExponent g;
            g.a = -t / hbar;
            g.b = d / hbar;
            g.c = -(mid * t + t * t * t / 12.0) / hbar;
            return fresnel_integral(g) / (2.0 * pi * hbar);
        }
        case Family::circle: {
            // Int e^{i d p / hbar} sinc[pi(p/hbar - n)] dp = hbar e^{i n d} for |d| < pi:
            // the transform collapses to the dual sum.
            cplx tc = t;
            if (tc.imag() == 0.0) tc *= cplx(1.0, -1e-8);
            const double dphi = detail::wrap_angle(d);
            const double damp = cf.hbar * (-tc.imag()) / (2.0 * cf.inertia);
            const long ncut =
                std::max<long>(cf.n_max, static_cast<long>(std::sqrt(30.0 / damp)) + 1);
            cplx sum(1.0, 0.0);
            for (long n = 1; n <= ncut; ++n) {
                const cplx ph = std::exp(cplx(0.0, -1.0) * cf.hbar * double(n) * double(n) * tc /
                                         (2.0 * cf.inertia));
                sum += ph * (std::exp(cplx(0.0, n * dphi)) + std::exp(cplx(0.0, -n * dphi)));
            }
            return sum / (2.0 * pi);
        }
        default:
            throw unsupported_family_error("propagator_from_star_exp: no closed form");
    }
}

// One spectral slice: a discrete level {n, E_n, rho_n} or a continuous-energy
// sample {E, rho_E} (n < 0 flags the continuous case).
struct SpectralSlice {
    int n = -1;
    double energy = 0.0;
    SampledSymbol rho;
};

namespace detail {

// Phase-adaptive composite Simpson of g(t) over [0, T], with local step set by
// the supplied phase-derivative bound.
template <class G, class W>
inline cplx oscillatory_integral_halfline(G&& g, W&& phase_slope, double T) {
    cplx acc(0.0);
    double t = 0.0;
    while (t < T) {
        double h = 2.0 * pi / (12.0 * (phase_slope(t) + 1.0));
        h = std::min(h, T - t);
        const double h2 = 0.5 * h;
        acc += (g(t) + 4.0 * g(t + h2) + g(t + h)) * (h / 6.0);
        t += h;
    }
    return acc;
}

}  // namespace detail

// Numeric profile of the linear-potential continuous Wigner function: the time
// integral depends on (q, p, E) only through u = q + p^2 - E, so it is built
// once on a u grid and interpolated (cubic).
class LinearWignerProfile {
public:
    LinearWignerProfile(double u_min, double u_max, double du, double eps, double t_window,
                        double hbar, bool extrapolate = true)
        : u0_(u_min), du_(du) {
        const std::size_t npts = static_cast<std::size_t>((u_max - u_min) / du) + 2;
        vals_.resize(npts);
        parallel_for(npts, [&](std::size_t i) {
            const double u = u0_ + du_ * static_cast<double>(i);
            const double a = transform(u, eps, t_window, hbar);
            if (extrapolate) {
                const double b = transform(u, 0.5 * eps, t_window, hbar);
                vals_[i] = 2.0 * b - a;
            } else {
                vals_[i] = a;
            }
        });
    }

    double operator()(double u) const {
        const double s = (u - u0_) / du_;
        const long i = static_cast<long>(std::floor(s));
        if (i < 1 || i + 2 >= static_cast<long>(vals_.size()))
            throw out_of_range_error("LinearWignerProfile: u outside tabulated range");
        const double x = s - static_cast<double>(i);
        const double ym1 = vals_[i - 1], y0 = vals_[i], y1 = vals_[i + 1], y2 = vals_[i + 2];
        // Catmull-Rom
        return y0 + 0.5 * x * (y1 - ym1 +
                               x * (2.0 * ym1 - 5.0 * y0 + 4.0 * y1 - y2 +
                                    x * (3.0 * (y0 - y1) + y2 - ym1)));
    }

    static double transform(double u, double eps, double T, double hbar) {
        auto g = [&](double t) {
            const double ph = -(u * t + t * t * t / 12.0) / hbar;
            return cplx(std::cos(ph), std::sin(ph)) * std::exp(-eps * t);
        };
        auto slope = [&](double t) { return (std::abs(u) + 0.25 * t * t) / hbar; };
        const cplx half = detail::oscillatory_integral_halfline(g, slope, T);
        // integrand at -t is the conjugate, so the full line is 2 Re
        return 2.0 * half.real() / ((2.0 * pi * hbar) * (2.0 * pi * hbar));
    }

private:
    double u0_, du_;
    std::vector<double> vals_;
};

// Spectral inversion rho_E = (1/(2 pi hbar)^2) Int Exp_* e^{iEt/hbar} e^{-eps|t|} dt
// for the continuous-spectrum families. The free particle gives an eps-smeared
// energy shell (Lorentzian of width eps*hbar); the linear potential converges
// to the Airy form under eps-extrapolation.
inline SpectralSlice wigner_continuous(const StarExpClosedForm& cf, double E,
                                       const PhaseGrid& grid, double t_window, double eps,
                                       bool extrapolate = true) {
    if (!(eps > 0.0)) throw std::invalid_argument("wigner_continuous: eps must be positive");
    if (eps * t_window < 13.0)
        throw window_too_small_error("wigner_continuous: damped tail exceeds tolerance");
    const double hbar = cf.hbar;
    SpectralSlice out{-1, E, SampledSymbol(grid, "wigner_continuous")};
    const std::size_t n = grid.n();
    if (cf.family == Family::free_particle) {
        std::vector<double> row(n);
        parallel_for(n, [&](std::size_t j) {
            const double p = grid.p(j);
            const double w = (0.5 * p * p / cf.mass - E) / hbar;
            auto g = [&](double t) {
                return cplx(std::cos(w * t), -std::sin(w * t)) * std::exp(-eps * t);
            };
            auto slope = [&](double) { return std::abs(w); };
            const cplx half = detail::oscillatory_integral_halfline(g, slope, t_window);
            row[j] = 2.0 * half.real() / ((2.0 * pi * hbar) * (2.0 * pi * hbar));
        });
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out.rho.at(i, j) = row[j];
        return out;
    }
    if (cf.family == Family::linear_potential) {
        double umin = 1e300, umax = -1e300;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double u = grid.x(i) + grid.p(j) * grid.p(j) - E;
                umin = std::min(umin, u);
                umax = std::max(umax, u);
            }
        LinearWignerProfile prof(umin - 0.25, umax + 0.25, 0.05, eps, t_window, hbar, extrapolate);
        parallel_for(n, [&](std::size_t i) {
            for (std::size_t j = 0; j < n; ++j)
                out.rho.at(i, j) = prof(grid.x(i) + grid.p(j) * grid.p(j) - E);
        });
        return out;
    }
    throw unsupported_family_error("wigner_continuous: family has no continuous spectrum here");
}

// Level projection by the Fourier-Dirichlet period integral
// rho_n = (w / 2pi C) Int_0^{2pi/w} Exp_* e^{i w (n+1/2) t} dt, with C the
// measured pairing constant. The oscillator caustic at w t = pi is avoided by
// deforming the time contour into the Im t < 0 analyticity strip with pinned
// endpoints, which leaves the projection exact (Cauchy) and the integrand
// smooth. Levels share the contour samples.
inline std::vector<SpectralSlice> project_levels(const StarExpClosedForm& cf,
                                                 const std::vector<int>& levels,
                                                 const PhaseGrid& grid,
                                                 double pairing_constant = 0.0) {
    if (pairing_constant <= 0.0) {
        PhaseGrid ref(-8.0, 8.0, 64, grid.hbar());
        pairing_constant = 1.0 / measure_star_projector_constant(ref);
    }
    const double hbar = cf.hbar;
    const std::size_t n = grid.n();
    std::vector<SpectralSlice> out;
    if (cf.family == Family::harmonic) {
        const double w = cf.omega, m = cf.mass;
        const double period = 2.0 * pi / w;
        const double eta = 0.35;
        const std::size_t M = 2048;
        const double ds = period / static_cast<double>(M);
        for (int lvl : levels)
            out.push_back(
                {lvl, hbar * w * (lvl + 0.5), SampledSymbol(grid, "rho_" + std::to_string(lvl))});
        // Contour nodes and per-level scalar weights, shared by every grid point.
        std::vector<cplx> tn_node(M + 1);
        std::vector<std::vector<cplx>> lw(levels.size(), std::vector<cplx>(M + 1));
        for (std::size_t k = 0; k <= M; ++k) {
            const double s = ds * static_cast<double>(k);
            const cplx t(s, -eta * (1.0 - std::cos(w * s)) / w);
            const cplx dtds(1.0, -eta * std::sin(w * s));
            const double simw = (k == 0 || k == M) ? 1.0 : ((k & 1) ? 4.0 : 2.0);
            const cplx half = 0.5 * w * t;
            tn_node[k] = std::tan(half);
            const cplx sec = 1.0 / std::cos(half);
            for (std::size_t li = 0; li < levels.size(); ++li)
                lw[li][k] = std::exp(cplx(0.0, 1.0) * w * (double(levels[li]) + 0.5) * t) * dtds *
                            (simw * ds / 3.0) * sec;
        }
        const double norm = w / (2.0 * pi * pairing_constant);
        parallel_for(n, [&](std::size_t i) {
            const double xv = grid.x(i);
            for (std::size_t j = 0; j < n; ++j) {
                const double pv = grid.p(j);
                const double H = 0.5 * pv * pv / m + 0.5 * m * w * w * xv * xv;
                const cplx hfac(0.0, -2.0 * H / (w * hbar));
                std::vector<cplx> acc(levels.size(), cplx(0.0));
                for (std::size_t k = 0; k <= M; ++k) {
                    const cplx core = std::exp(hfac * tn_node[k]);
                    for (std::size_t li = 0; li < levels.size(); ++li) acc[li] += lw[li][k] * core;
                }
                for (std::size_t li = 0; li < levels.size(); ++li)
                    out[li].rho.at(i, j) = acc[li] * norm;
            }
        });
        for (auto& slice : out) slice.rho.drop_imag();
        return out;
    }
    if (cf.family == Family::circle) {
        // Combined period/angle projection: the time integral isolates the
        // degenerate +-n subspace, the angular Fourier coefficient splits it.
        const double I = cf.inertia;
        const double period = 4.0 * pi * I / hbar;
        const std::size_t M = 1024, Mphi = 256;
        for (int lvl : levels) {
            const double energy = hbar * hbar * double(lvl) * double(lvl) / (2.0 * I);
            const double delta = 12.0 * I / (hbar * std::max(1.0, double(lvl * lvl)));
            // P(dphi) = (1/T) Int K(dphi, s - i delta) e^{iE_n t/hbar} ds over one period
            std::vector<cplx> coeff_acc(Mphi, cplx(0.0));
            parallel_for(Mphi, [&](std::size_t mp) {
                const double dphi = 2.0 * pi * (static_cast<double>(mp) + 0.5) / Mphi - pi;
                cplx a(0.0);
                for (std::size_t k = 0; k < M; ++k) {
                    const double s = period * (static_cast<double>(k) + 0.5) / M;
                    const cplx t(s, -delta);
                    a += propagate_circle_theta(I, hbar, dphi, t, 0.0) *
                         std::exp(cplx(0.0, 1.0) * energy * t / hbar);
                }
                coeff_acc[mp] = a / static_cast<double>(M);
            });
            cplx ahat(0.0);
            for (std::size_t mp = 0; mp < Mphi; ++mp) {
                const double dphi = 2.0 * pi * (static_cast<double>(mp) + 0.5) / Mphi - pi;
                ahat += coeff_acc[mp] * std::exp(cplx(0.0, -double(lvl) * dphi));
            }
            ahat /= static_cast<double>(Mphi);
            SpectralSlice slice{lvl, energy, SampledSymbol(grid, "rho_circle_" + std::to_string(lvl))};
            // rho_n(phi, p) = ahat (1/2pi) Int_{-pi}^{pi} e^{iY(n - p/hbar)} dY (Simpson)
            const std::size_t ny = 4096;
            const double hY = 2.0 * pi / static_cast<double>(ny);
            std::vector<cplx> rowp(n);
            parallel_for(n, [&](std::size_t j) {
                const double nu = grid.p(j) / grid.hbar();
                cplx srow(0.0);
                for (std::size_t k = 0; k <= ny; ++k) {
                    const double Y = -pi + hY * static_cast<double>(k);
                    const double simw = (k == 0 || k == ny) ? 1.0 : ((k & 1) ? 4.0 : 2.0);
                    const double ph = Y * (double(lvl) - nu);
                    srow += simw * cplx(std::cos(ph), std::sin(ph));
                }
                rowp[j] = ahat * srow * (hY / 3.0) / (2.0 * pi);
            });
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) slice.rho.at(i, j) = rowp[j];
            slice.rho.drop_imag();
            out.push_back(std::move(slice));
        }
        return out;
    }
    throw unsupported_family_error("project_levels: discrete families are harmonic and circle");
}

inline SpectralSlice project_level(const StarExpClosedForm& cf, int n, const PhaseGrid& grid,
                                   double pairing_constant = 0.0) {
    return project_levels(cf, {n}, grid, pairing_constant)[0];
}

// Truncated Fourier-Dirichlet partial sum with the measured pairing weight:
// HO: C sum_{n<=N} e^{-i w (n+1/2) t} rho_n;  circle: the (SEc)-type sinc sum.
inline cplx fd_partial_sum(const StarExpClosedForm& cf, unsigned N, double q, double p, cplx t,
                           double pairing_constant = 0.0) {
    const double hbar = cf.hbar;
    if (cf.family == Family::harmonic) {
        if (pairing_constant <= 0.0) pairing_constant = 2.0 * pi * hbar;
        cplx sum(0.0);
        for (unsigned n = 0; n <= N; ++n) {
            const cplx ph = std::exp(cplx(0.0, -1.0) * cf.omega * (double(n) + 0.5) * t);
            sum += ph * ho_wigner_level(n, q, p, cf.mass, cf.omega, hbar);
        }
        return pairing_constant * sum;
    }
    if (cf.family == Family::circle) {
        if (pairing_constant <= 0.0) pairing_constant = 2.0 * pi;
        const double nu = p / hbar;
        cplx sum = cplx(circle_wigner_level(0, nu), 0.0);
        for (unsigned n = 1; n <= N; ++n) {
            const cplx ph =
                std::exp(cplx(0.0, -1.0) * hbar * double(n) * double(n) * t / (2.0 * cf.inertia));
            sum += ph * (circle_wigner_level(int(n), nu) + circle_wigner_level(-int(n), nu));
        }
        return pairing_constant * sum;
    }
    throw unsupported_family_error("fd_partial_sum: discrete families are harmonic and circle");
}

}  // namespace moyal
