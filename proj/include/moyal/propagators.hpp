#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "moyal/errors.hpp"
#include "moyal/fresnel.hpp"
#include "moyal/grid.hpp"
#include "moyal/ode.hpp"
#include "moyal/special.hpp"

namespace moyal {

// L = (m/2) qdot^2 - (c(t)/2) q^2 + f(t) q
struct QuadraticModel {
    double mass = 1.0;
    std::function<double(double)> c = [](double) { return 0.0; };
    std::function<double(double)> f = [](double) { return 0.0; };
};

enum class Family { free_particle, harmonic, linear_potential, quadratic, circle, sliced };

struct PropagatorSpec {
    Family family;
    double hbar = 1.0;
    double mass = 1.0;
    double omega = 1.0;
    double inertia = 1.0;
    int n_max = 32;            // circle truncation floor
    std::size_t slices = 64;   // sliced composition
    std::size_t steps = 4096;  // Gelfand-Yaglom ODE steps
    QuadraticModel model;

    static PropagatorSpec free_particle_spec(double m, double hbar = 1.0) {
        PropagatorSpec s{Family::free_particle, hbar};
        s.mass = m;
        return s;
    }
    static PropagatorSpec harmonic_spec(double m, double w, double hbar = 1.0) {
        PropagatorSpec s{Family::harmonic, hbar};
        s.mass = m;
        s.omega = w;
        return s;
    }
    static PropagatorSpec linear_potential_spec(double hbar = 1.0) {
        return PropagatorSpec{Family::linear_potential, hbar};
    }
    static PropagatorSpec quadratic_spec(QuadraticModel mod, double hbar = 1.0,
                                         std::size_t steps = 4096) {
        PropagatorSpec s{Family::quadratic, hbar};
        s.model = std::move(mod);
        s.steps = steps;
        return s;
    }
    static PropagatorSpec circle_spec(double inertia, int n_max = 32, double hbar = 1.0) {
        PropagatorSpec s{Family::circle, hbar};
        s.inertia = inertia;
        s.n_max = n_max;
        if (n_max < 1) throw std::invalid_argument("circle: n_max must be >= 1");
        return s;
    }
    static PropagatorSpec sliced_spec(QuadraticModel mod, std::size_t n_slices, double hbar = 1.0) {
        PropagatorSpec s{Family::sliced, hbar};
        s.model = std::move(mod);
        s.slices = n_slices;
        if (n_slices < 2) throw std::invalid_argument("sliced: N must be >= 2");
        return s;
    }
};

namespace detail {

inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * pi);
    if (a > pi) a -= 2.0 * pi;
    if (a <= -pi) a += 2.0 * pi;
    return a;
}

}  // namespace detail

// Free particle: K = sqrt(m/(2 pi i hbar t)) exp[i m (xf-x0)^2/(2 hbar t)].
inline cplx propagate_free(double m, double hbar, double xf, cplx t, double x0) {
    if (t == cplx(0.0)) throw zero_time_error("propagate: t = 0");
    const cplx pref = std::sqrt(m / (2.0 * pi * cplx(0.0, 1.0) * hbar * t));
    const double d = xf - x0;
    return pref * std::exp(cplx(0.0, 1.0) * m * d * d / (2.0 * hbar * t));
}

// Harmonic oscillator with the Maslov-continued branch: for real t past the
// first caustic the prefactor picks up e^{-i pi nu / 2} with nu = floor(w t / pi),
// which is what the Gelfand-Yaglom zero count reproduces. The paper's bare
// formula covers the first interval.
inline cplx propagate_harmonic(double m, double w, double hbar, double xf, cplx t, double x0) {
    if (t == cplx(0.0)) throw zero_time_error("propagate: t = 0");
    if (t.imag() == 0.0) {
        double T = t.real();
        bool conj = false;
        if (T < 0.0) {
            T = -T;
            conj = true;
        }
        const double wt = w * T;
        const double dist = std::abs(wt / pi - std::round(wt / pi));
        if (dist * pi < 1e-6)
            throw caustic_singularity_error("propagate: omega t within caustic window");
        const int nu = static_cast<int>(std::floor(wt / pi));
        const double s = std::sin(wt), c = std::cos(wt);
        const double amp = std::sqrt(m * w / (2.0 * pi * hbar * std::abs(s)));
        const cplx phase = std::exp(cplx(0.0, -(pi / 4.0 + 0.5 * pi * nu)));
        const cplx expo =
            std::exp(cplx(0.0, m * w / (2.0 * hbar * s) * ((xf * xf + x0 * x0) * c - 2.0 * xf * x0)));
        const cplx k = amp * phase * expo;
        return conj ? std::conj(k) : k;
    }
    // Damped time: principal branch, valid before the first caustic.
    const cplx wt = w * t;
    const cplx s = std::sin(wt), c = std::cos(wt);
    const cplx pref = std::sqrt(m * w / (2.0 * pi * cplx(0.0, 1.0) * hbar * s));
    return pref * std::exp(cplx(0.0, 1.0) * m * w / (2.0 * hbar * s) *
                           ((xf * xf + x0 * x0) * c - 2.0 * xf * x0));
}

// Linear potential H = p^2 + q (mass 1/2, unit force):
// K = sqrt(1/(4 pi i hbar t)) exp[i((xf-x0)^2/(4 t hbar) - t(xf+x0)/(2 hbar) - t^3/(12 hbar))].
inline cplx propagate_linear(double hbar, double xf, cplx t, double x0) {
    if (t == cplx(0.0)) throw zero_time_error("propagate: t = 0");
    const cplx pref = std::sqrt(1.0 / (4.0 * pi * cplx(0.0, 1.0) * hbar * t));
    const double d = xf - x0;
    const cplx expo = cplx(0.0, 1.0) * (d * d / (4.0 * t * hbar) - t * (xf + x0) / (2.0 * hbar) -
                                        t * t * t / (12.0 * hbar));
    return pref * std::exp(expo);
}

// Circle (free rotor, H = p^2/2I): theta-function form and its Poisson-dual
// winding sum. Both need Im t < 0; an exactly real t receives the standard
// damping nudge. The two forms are evaluated independently and must agree.
inline cplx propagate_circle_theta(double inertia, double hbar, double phi_f, cplx t,
                                   double phi_i) {
    if (t == cplx(0.0)) throw zero_time_error("propagate: t = 0");
    if (t.imag() == 0.0) t *= cplx(1.0, -1e-8);
    const double dphi = detail::wrap_angle(phi_f - phi_i);
    const cplx pref = std::sqrt(inertia / (2.0 * pi * cplx(0.0, 1.0) * hbar * t));
    const cplx gauss = std::exp(cplx(0.0, 1.0) * inertia * dphi * dphi / (2.0 * hbar * t));
    const cplx z = pi * inertia * dphi / (hbar * t);
    const cplx tau = 2.0 * pi * inertia / (hbar * t);
    return pref * gauss * theta3(z, tau);
}

inline cplx propagate_circle_dual(double inertia, double hbar, double phi_f, cplx t,
                                  double phi_i) {
    if (t == cplx(0.0)) throw zero_time_error("propagate: t = 0");
    if (t.imag() == 0.0) t *= cplx(1.0, -1e-8);
    const double dphi = phi_f - phi_i;
    cplx sum(1.0 / (2.0 * pi), 0.0);
    for (long n = 1; n < 2000000; ++n) {
        const cplx ph = std::exp(cplx(0.0, -1.0) * hbar * double(n) * double(n) * t / (2.0 * inertia));
        const cplx term =
            ph * (std::exp(cplx(0.0, n * dphi)) + std::exp(cplx(0.0, -n * dphi))) / (2.0 * pi);
        sum += term;
        if (std::abs(ph) < 1e-15 && n >= 2) break;
        if (n == 1999999) throw non_convergent_error("propagate_circle_dual: sum did not converge");
    }
    return sum;
}

inline cplx propagate_circle(double inertia, double hbar, double phi_f, cplx t, double phi_i) {
    const cplx kt = propagate_circle_theta(inertia, hbar, phi_f, t, phi_i);
    const cplx kd = propagate_circle_dual(inertia, hbar, phi_f, t, phi_i);
    if (std::abs(kt - kd) > 1e-10 * (1.0 + std::abs(kt)))
        throw consistency_error("propagate_circle: theta and dual-sum forms disagree");
    return kt;
}

// Gelfand-Yaglom propagator for the general quadratic Lagrangian. The phi
// equation fixes the prefactor and Maslov phase; the classical action comes
// from the linear BVP superposition with only endpoint data plus Simpson
// integrals of f against the stored solutions:
//   S_c = (m/2)(xf qdot_c(T) - x0 qdot_c(0)) + (1/2) Int f q_c dt.
struct GelfandYaglomResult {
    double hbar = 1.0;
    double mass = 1.0;
    cplx prefactor;
    int maslov = 0;
    double phi_end = 0.0, dphi_end = 0.0;
    double chi_end = 0.0, dchi_end = 0.0;
    double qp_end = 0.0, dqp_end = 0.0;
    double int_f_chi = 0.0, int_f_phi = 0.0, int_f_qp = 0.0;

    double action(double xf, double x0) const {
        const double a = (xf - x0 * chi_end - qp_end) / phi_end;
        const double dqc_end = x0 * dchi_end + a * dphi_end + dqp_end;
        return 0.5 * mass * (xf * dqc_end - x0 * a) +
               0.5 * (x0 * int_f_chi + a * int_f_phi + int_f_qp);
    }
    cplx eval(double xf, double x0) const {
        return prefactor * std::exp(cplx(0.0, action(xf, x0) / hbar));
    }
};

inline GelfandYaglomResult gelfand_yaglom(const QuadraticModel& model, double hbar, double t,
                                          std::size_t steps = 4096) {
    if (!(t > 0.0)) throw std::invalid_argument("gelfand_yaglom: t must be positive");
    QuadraticTrajectory tr = integrate_quadratic_system(model.c, model.f, model.mass, t, steps);
    const double phiT = tr.phi.back();
    if (std::abs(phiT) < 1e-10)
        throw caustic_at_endpoint_error("gelfand_yaglom: phi(t_f) vanishes (caustic)");
    GelfandYaglomResult r;
    r.hbar = hbar;
    r.mass = model.mass;
    r.maslov = tr.phi_zero_count;
    r.phi_end = phiT;
    r.dphi_end = tr.dphi.back();
    r.chi_end = tr.chi.back();
    r.dchi_end = tr.dchi.back();
    r.qp_end = tr.qp.back();
    r.dqp_end = tr.dqp.back();
    const std::size_t npt = tr.t.size();
    std::vector<double> fc(npt), fp(npt), fq(npt);
    for (std::size_t k = 0; k < npt; ++k) {
        const double fv = model.f(tr.t[k]);
        fc[k] = fv * tr.chi[k];
        fp[k] = fv * tr.phi[k];
        fq[k] = fv * tr.qp[k];
    }
    r.int_f_chi = simpson(tr.t, fc);
    r.int_f_phi = simpson(tr.t, fp);
    r.int_f_qp = simpson(tr.t, fq);
    r.prefactor = std::sqrt(model.mass / (2.0 * pi * hbar * std::abs(phiT))) *
                  std::exp(cplx(0.0, -(pi / 4.0 + 0.5 * pi * r.maslov)));
    return r;
}

// Exact N-slice composition of midpoint-discretized short-time kernels. Each
// convolution is a Fresnel integral, so the composition closes on quadratic
// exponents: K(y, x0) = P exp[(i/hbar)(A y^2 + B y x0 + C x0^2 + D y + E x0 + F)].
struct SlicedKernel {
    double hbar = 1.0;
    cplx prefactor{1.0, 0.0};
    double a_ff = 0.0, a_f0 = 0.0, a_00 = 0.0;
    double b_f = 0.0, b_0 = 0.0, c0 = 0.0;

    cplx eval(double xf, double x0) const {
        const double s = a_ff * xf * xf + a_f0 * xf * x0 + a_00 * x0 * x0 + b_f * xf + b_0 * x0 + c0;
        return prefactor * std::exp(cplx(0.0, s / hbar));
    }
};

namespace detail {

// sqrt(i pi hbar / alpha) with the damped branch (alpha + i0^+).
inline cplx fresnel_root(double alpha, double hbar) {
    const double mag = std::sqrt(pi * hbar / std::abs(alpha));
    return alpha > 0.0 ? mag * std::exp(cplx(0.0, pi / 4.0)) : mag * std::exp(cplx(0.0, -pi / 4.0));
}

}  // namespace detail

// Compose K2 after K1: Int K2(y, z) K1(z, x0) dz.
inline SlicedKernel compose_sliced(const SlicedKernel& k2, const SlicedKernel& k1) {
    const double hbar = k2.hbar;
    const double alpha = k2.a_00 + k1.a_ff;
    if (std::abs(alpha) < 1e-12)
        throw caustic_crossing_error("compose_sliced: degenerate intermediate Gaussian");
    const double u = k2.a_f0, v = k1.a_f0, w = k2.b_0 + k1.b_f;
    SlicedKernel out;
    out.hbar = hbar;
    out.a_ff = k2.a_ff - u * u / (4.0 * alpha);
    out.a_f0 = -u * v / (2.0 * alpha);
    out.a_00 = k1.a_00 - v * v / (4.0 * alpha);
    out.b_f = k2.b_f - u * w / (2.0 * alpha);
    out.b_0 = k1.b_0 - v * w / (2.0 * alpha);
    out.c0 = k2.c0 + k1.c0 - w * w / (4.0 * alpha);
    out.prefactor = k2.prefactor * k1.prefactor * detail::fresnel_root(alpha, hbar);
    return out;
}

inline SlicedKernel time_sliced(const QuadraticModel& model, double hbar, double t,
                                std::size_t n_slices) {
    if (n_slices < 2) throw std::invalid_argument("time_sliced: N must be >= 2");
    if (!(t > 0.0)) throw std::invalid_argument("time_sliced: t must be positive");
    const double dt = t / static_cast<double>(n_slices);
    const double m = model.mass;
    auto slice = [&](std::size_t k) {
        const double tm = (static_cast<double>(k) + 0.5) * dt;
        const double cm = model.c(tm), fm = model.f(tm);
        SlicedKernel s;
        s.hbar = hbar;
        s.a_ff = s.a_00 = m / (2.0 * dt) - dt * cm / 8.0;
        s.a_f0 = -m / dt - dt * cm / 4.0;
        s.b_f = s.b_0 = 0.5 * dt * fm;
        s.prefactor = std::sqrt(m / (2.0 * pi * cplx(0.0, 1.0) * hbar * dt));
        return s;
    };
    SlicedKernel acc = slice(0);
    for (std::size_t k = 1; k < n_slices; ++k) acc = compose_sliced(slice(k), acc);
    return acc;
}

// Truncated spectral decomposition K = sum_n e^{-i E_n t/hbar} psi_n(xf) conj(psi_n(x0)),
// for the discrete-spectrum families (harmonic via Hermite functions, circle
// via plane waves). Complex t with Im t < 0 damps the tail.
inline cplx spectral_form(const PropagatorSpec& spec, double xf, cplx t, double x0,
                          std::size_t n_terms) {
    if (n_terms < 1) throw std::invalid_argument("spectral_form: n_terms must be >= 1");
    if (spec.family == Family::harmonic) {
        const double m = spec.mass, w = spec.omega, hbar = spec.hbar;
        const double s = std::sqrt(m * w / hbar);
        const double norm0 = std::pow(m * w / (pi * hbar), 0.25);
        const double xi_f = s * xf, xi_0 = s * x0;
        double hf_m1 = 0.0, hf = norm0 * std::exp(-0.5 * xi_f * xi_f);
        double h0_m1 = 0.0, h0 = norm0 * std::exp(-0.5 * xi_0 * xi_0);
        cplx sum(0.0);
        for (std::size_t n = 0; n < n_terms; ++n) {
            const cplx ph = std::exp(cplx(0.0, -1.0) * w * (double(n) + 0.5) * t);
            sum += ph * hf * h0;
            const double a = std::sqrt(2.0 / (double(n) + 1.0));
            const double b = std::sqrt(double(n) / (double(n) + 1.0));
            const double hf_n1 = a * xi_f * hf - b * hf_m1;
            const double h0_n1 = a * xi_0 * h0 - b * h0_m1;
            hf_m1 = hf;
            hf = hf_n1;
            h0_m1 = h0;
            h0 = h0_n1;
        }
        return sum;
    }
    if (spec.family == Family::circle) {
        const double dphi = xf - x0;
        cplx sum(1.0 / (2.0 * pi), 0.0);
        for (std::size_t n = 1; n <= n_terms; ++n) {
            const cplx ph = std::exp(cplx(0.0, -1.0) * spec.hbar * double(n) * double(n) * t /
                                     (2.0 * spec.inertia));
            sum += ph * (std::exp(cplx(0.0, n * dphi)) + std::exp(cplx(0.0, -n * dphi))) /
                   (2.0 * pi);
        }
        return sum;
    }
    throw unsupported_family_error("spectral_form: family lacks a discrete spectrum");
}

// Closed-form / engine dispatch.
inline cplx propagate(const PropagatorSpec& spec, double xf, cplx t, double x0) {
    switch (spec.family) {
        case Family::free_particle:
            return propagate_free(spec.mass, spec.hbar, xf, t, x0);
        case Family::harmonic:
            return propagate_harmonic(spec.mass, spec.omega, spec.hbar, xf, t, x0);
        case Family::linear_potential:
            return propagate_linear(spec.hbar, xf, t, x0);
        case Family::circle:
            return propagate_circle(spec.inertia, spec.hbar, xf, t, x0);
        case Family::quadratic: {
            if (t.imag() != 0.0)
                throw std::invalid_argument("propagate: quadratic engine needs real t");
            return gelfand_yaglom(spec.model, spec.hbar, t.real(), spec.steps).eval(xf, x0);
        }
        case Family::sliced: {
            if (t.imag() != 0.0)
                throw std::invalid_argument("propagate: sliced engine needs real t");
            return time_sliced(spec.model, spec.hbar, t.real(), spec.slices).eval(xf, x0);
        }
    }
    throw std::invalid_argument("propagate: unknown family");
}

inline cplx propagate(const PropagatorSpec& spec, double xf, double t, double x0) {
    return propagate(spec, xf, cplx(t, 0.0), x0);
}

}  // namespace moyal
