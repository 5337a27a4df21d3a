#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "moyal/poly.hpp"
#include "moyal/star.hpp"
#include "moyal/weyl.hpp"
#include "oracles.hpp"

using namespace moyal;

namespace {

SampledSymbol gauss_symbol(const PhaseGrid& g, double ax, double ap, double x0, double p0,
                           std::string label = "") {
    return SampledSymbol::from_function(
        g,
        [=](double x, double p) {
            return cplx(std::exp(-ax * (x - x0) * (x - x0) - ap * (p - p0) * (p - p0)));
        },
        std::move(label));
}

SampledSymbol rho0_symbol(const PhaseGrid& g) {
    return SampledSymbol::from_function(g, [&](double x, double p) {
        return cplx(std::exp(-(x * x + p * p) / g.hbar()) / (pi * g.hbar()));
    });
}

double interior_linf_diff(const SampledSymbol& a, const SampledSymbol& b) {
    const PhaseGrid& g = a.grid();
    double w = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            if (g.interior(i, j)) w = std::max(w, std::abs(a.at(i, j) - b.at(i, j)));
    return w;
}

cplx weak_pairing(const SampledSymbol& probe, const SampledSymbol& a, const SampledSymbol& b) {
    cplx s(0.0);
    for (std::size_t k = 0; k < probe.field.values.size(); ++k)
        s += probe.field.values[k] * (a.field.values[k] - b.field.values[k]);
    return s * probe.grid().dx() * probe.grid().dp();
}

}  // namespace

TEST_CASE("polynomial star product basics") {
    PolySymbol x = PolySymbol::x(), p = PolySymbol::p();
    PolySymbol xp = star_poly(x, p);
    CHECK(std::abs(xp.coef(1, 1) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(xp.coef(0, 0) - cplx(0.0, 0.5)) < 1e-15);
    PolySymbol br = moyal_bracket(x, p);
    CHECK(std::abs(br.coef(0, 0) - cplx(1.0)) < 1e-15);
    PolySymbol f(1.0);
    f.coef(2, 1) = 0.7;
    f.coef(0, 3) = -0.2;
    CHECK(moyal_bracket(f, f).max_coeff_abs() < 1e-15);
}

TEST_CASE("oscillator squared: H*H = H^2 - (hbar w / 2)^2") {
    const double hbar = 0.8, w = 1.3, m = 0.9;
    PolySymbol H = PolySymbol::harmonic(m, w, hbar);
    PolySymbol HH = star_poly(H, H);
    PolySymbol diff = HH - H * H;
    CHECK(std::abs(diff.coef(0, 0) + 0.25 * hbar * hbar * w * w) < 1e-14);
    diff.coef(0, 0) = 0.0;
    CHECK(diff.max_coeff_abs() < 1e-14);
}

TEST_CASE("degree overflow is rejected") {
    PolySymbol f(1.0), g(1.0);
    f.coef(5, 0) = 1.0;
    g.coef(0, 4) = 1.0;
    CHECK_THROWS_AS(star_poly(f, g), degree_overflow_error);
}

TEST_CASE("moyal bracket approaches the poisson bracket at hbar^2 rate") {
    std::vector<double> lh, le;
    for (double hbar : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
        PolySymbol f(hbar), g(hbar);
        f.coef(3, 0) = 1.0;
        f.coef(1, 1) = 0.4;
        g.coef(0, 3) = 1.0;
        g.coef(2, 0) = -0.6;
        PolySymbol d = moyal_bracket(f, g) - poisson_bracket(f, g);
        double scale = 0.0;
        for (double xv : {-1.0, 0.3, 1.2})
            for (double pv : {-0.7, 0.5, 1.1})
                scale = std::max(scale, std::abs(d.eval(xv, pv)));
        lh.push_back(std::log(hbar));
        le.push_back(std::log(scale));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lh.size(); ++i) {
        sx += lh[i];
        sy += le[i];
        sxx += lh[i] * lh[i];
        sxy += lh[i] * le[i];
    }
    const double nn = double(lh.size());
    const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.025));
}

TEST_CASE("classical limit: f*g - fg vanishes at O(hbar)") {
    std::vector<double> lh, le;
    for (double hbar : {1e-3, 1e-2, 1e-1}) {
        PolySymbol f(hbar), g(hbar);
        f.coef(2, 1) = 1.0;
        g.coef(1, 2) = 1.0;
        PolySymbol d = star_poly(f, g) - f * g;
        lh.push_back(std::log(hbar));
        le.push_back(std::log(std::abs(d.eval(0.9, 1.1))));
    }
    const double slope = (le.back() - le.front()) / (lh.back() - lh.front());
    CHECK(slope == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("grid star product: unit element on all routes") {
    PhaseGrid g(-8.0, 8.0, 32, 1.0);
    SampledSymbol one = SampledSymbol::from_function(g, [](double, double) { return cplx(1.0); });
    SampledSymbol f = gauss_symbol(g, 0.5, 0.4, 0.4, 0.0);
    CHECK(interior_linf_diff(star_kernel(one, f), f) < 1e-6);
    CHECK(interior_linf_diff(star_kernel(f, one), f) < 1e-6);
    CHECK(interior_linf_diff(star_integral(one, f), f) < 1e-4);
    CHECK(interior_linf_diff(star_integral(f, one), f) < 1e-4);
    // the path route clips the unit's out-of-window histories; its flat-center
    // agreement is still tight
    SampledSymbol pu = star_path(one, f);
    double w = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            if (std::abs(g.x(i)) <= 2.0 && std::abs(g.p(j)) <= 2.0)
                w = std::max(w, std::abs(pu.at(i, j) - f.at(i, j)));
    CHECK(w < 1e-4);
}

TEST_CASE("ground-state projector identity and the measured star constant") {
    PhaseGrid g(-8.0, 8.0, 128, 1.0);
    const double c = measure_star_projector_constant(g);
    CHECK(std::abs(c - 1.0 / (2.0 * pi)) < 1e-8);
    SampledSymbol r = rho0_symbol(g);
    SampledSymbol rr = star_kernel(r, r);
    double w = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            if (g.interior(i, j)) w = std::max(w, std::abs(rr.at(i, j) - c * r.at(i, j)));
    CHECK(w < 1e-8);
}

TEST_CASE("canonical commutator: exact on the polynomial route, weak on the grid") {
    const double hbar = 0.7;
    PolySymbol x = PolySymbol::x(hbar), p = PolySymbol::p(hbar);
    PolySymbol comm = star_poly(x, p) - star_poly(p, x);
    CHECK(std::abs(comm.coef(0, 0) - cplx(0.0, hbar)) < 1e-14);
    comm.coef(0, 0) = 0.0;
    CHECK(comm.max_coeff_abs() < 1e-14);

    // grid route: sampled unbounded symbols define the commutator as a
    // distribution; paired against localized states it is i hbar
    PhaseGrid g(-8.0, 8.0, 128, 1.0);
    SampledSymbol X = SampledSymbol::from_function(g, [](double xv, double) { return cplx(xv); });
    SampledSymbol P = SampledSymbol::from_function(g, [](double, double pv) { return cplx(pv); });
    SampledSymbol xp = star_kernel(X, P);
    SampledSymbol px = star_kernel(P, X);
    SampledSymbol rho = rho0_symbol(g);
    CHECK(std::abs(weak_pairing(rho, xp, px) - cplx(0.0, 1.0)) < 1e-6);
    SampledSymbol probe = SampledSymbol::from_function(g, [](double xv, double pv) {
        return cplx(std::exp(-0.8 * ((xv - 0.5) * (xv - 0.5) + (pv + 0.3) * (pv + 0.3))) * 0.8 / pi);
    });
    CHECK(std::abs(weak_pairing(probe, xp, px) / probe.norm() - cplx(0.0, 1.0)) < 1e-6);

    // pointwise witness with a canonical pair flattened by a super-Gaussian
    // window: exact up to the window's own Moyal corrections
    auto wnd = [](double xv, double pv) {
        const double r = std::sqrt(xv * xv + pv * pv) / 6.0;
        return std::exp(-std::pow(r, 10.0));
    };
    SampledSymbol Xw = SampledSymbol::from_function(
        g, [&](double xv, double pv) { return cplx(xv * wnd(xv, pv)); });
    SampledSymbol Pw = SampledSymbol::from_function(
        g, [&](double xv, double pv) { return cplx(pv * wnd(xv, pv)); });
    SampledSymbol cw1 = star_kernel(Xw, Pw);
    SampledSymbol cw2 = star_kernel(Pw, Xw);
    double w = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            if (std::abs(g.x(i)) <= 1.5 && std::abs(g.p(j)) <= 1.5)
                w = std::max(w, std::abs(cw1.at(i, j) - cw2.at(i, j) - cplx(0.0, 1.0)));
    CHECK(w < 5e-3);
}

TEST_CASE("route equivalence: differential (Bopp) route vs kernel route") {
    PhaseGrid g(-8.0, 8.0, 128, 1.0);
    PolySymbol H = PolySymbol::harmonic(1.0, 1.0);
    SampledSymbol Hs = H.sample(g);
    SampledSymbol rho = rho0_symbol(g);
    SampledSymbol hk = star_kernel(Hs, rho);
    ComplexField2D hb = bopp_apply(H, rho);
    double w = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            if (std::abs(g.x(i)) <= 1.0 && std::abs(g.p(j)) <= 1.0)
                w = std::max(w, std::abs(hk.at(i, j) - hb.at(i, j)));
    CHECK(w < 1e-6);
    SampledSymbol hbs(g);
    hbs.field = hb;
    SampledSymbol probe = gauss_symbol(g, 0.8, 0.8, 0.5, -0.3);
    CHECK(std::abs(weak_pairing(probe, hk, hbs)) < 1e-6);
}

TEST_CASE("route equivalence: integral route vs kernel route at n = 32") {
    PhaseGrid g(-8.0, 8.0, 32, 1.0);
    SampledSymbol f = gauss_symbol(g, 0.5, 0.5, 0.4, 0.0);
    SampledSymbol h = gauss_symbol(g, 0.4, 0.4, 0.0, 0.3);
    CHECK(interior_linf_diff(star_integral(f, h), star_kernel(f, h)) < 1e-3);
    PhaseGrid big(-8.0, 8.0, 128, 1.0);
    SampledSymbol fb = gauss_symbol(big, 0.5, 0.5, 0.4, 0.0);
    CHECK_THROWS_AS(star_integral(fb, fb), grid_too_large_error);
}

TEST_CASE("path route equals the integral route on Gaussian pairs") {
    PhaseGrid g(-8.0, 8.0, 32, 1.0);
    auto gen = oracle::rng(31);
    std::uniform_real_distribution<double> uc(-0.6, 0.6), uw(0.35, 0.7);
    for (int trial = 0; trial < 3; ++trial) {
        SampledSymbol f = gauss_symbol(g, uw(gen), uw(gen), uc(gen), uc(gen));
        SampledSymbol h = gauss_symbol(g, uw(gen), uw(gen), uc(gen), uc(gen));
        CHECK(interior_linf_diff(star_path(f, h), star_integral(f, h)) < 1e-3);
    }
    PhaseGrid big(-8.0, 8.0, 128, 1.0);
    SampledSymbol fb = gauss_symbol(big, 0.5, 0.5, 0.0, 0.0);
    CHECK_THROWS_AS(star_path(fb, fb), grid_too_large_error);
}

TEST_CASE("path route noncommutativity witness (windowed canonical pair)") {
    PhaseGrid g(-8.0, 8.0, 64, 1.0);
    auto wnd = [](double xv, double pv) {
        const double r = std::sqrt(xv * xv + pv * pv) / 6.0;
        return std::exp(-std::pow(r, 10.0));
    };
    SampledSymbol Xw = SampledSymbol::from_function(
        g, [&](double xv, double pv) { return cplx(xv * wnd(xv, pv)); });
    SampledSymbol Pw = SampledSymbol::from_function(
        g, [&](double xv, double pv) { return cplx(pv * wnd(xv, pv)); });
    SampledSymbol a = star_path(Xw, Pw);
    SampledSymbol b = star_path(Pw, Xw);
    double w = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            if (std::abs(g.x(i)) <= 1.5 && std::abs(g.p(j)) <= 1.5)
                w = std::max(w, std::abs(a.at(i, j) - b.at(i, j) - cplx(0.0, 1.0)));
    CHECK(w < 5e-3);
}

TEST_CASE("associativity on the kernel route for damped polynomial triples") {
    PhaseGrid g(-8.0, 8.0, 128, 1.0);
    auto gen = oracle::rng(57);
    std::uniform_real_distribution<double> uc(-1.0, 1.0);
    auto damped_poly = [&]() {
        const double c0 = uc(gen), c1 = uc(gen), c2 = uc(gen), c3 = uc(gen);
        return SampledSymbol::from_function(g, [=](double x, double p) {
            const double poly = c0 + c1 * x + c2 * p + c3 * x * p;
            return cplx(poly * std::exp(-0.5 * (x * x + p * p) / 1.44));
        });
    };
    for (int trial = 0; trial < 2; ++trial) {
        SampledSymbol f = damped_poly(), h = damped_poly(), k = damped_poly();
        SampledSymbol lhs = star_kernel(star_kernel(f, h), k);
        SampledSymbol rhs = star_kernel(f, star_kernel(h, k));
        CHECK(interior_linf_diff(lhs, rhs) < 1e-5);
    }
}

TEST_CASE("associativity defect through the integral route on a Gaussian triple") {
    PhaseGrid g(-8.0, 8.0, 32, 1.0);
    SampledSymbol f = gauss_symbol(g, 0.5, 0.5, 0.3, 0.0);
    SampledSymbol h = gauss_symbol(g, 0.45, 0.5, -0.2, 0.2);
    SampledSymbol k = gauss_symbol(g, 0.5, 0.4, 0.0, -0.3);
    SampledSymbol lhs = star_integral(star_integral(f, h), k);
    SampledSymbol rhs = star_integral(f, star_integral(h, k));
    CHECK(interior_linf_diff(lhs, rhs) < 1e-3);
}

TEST_CASE("hermiticity: conj(f*g) = conj(g)*conj(f)") {
    PhaseGrid g(-8.0, 8.0, 64, 1.0);
    SampledSymbol f = SampledSymbol::from_function(g, [](double x, double p) {
        return cplx(std::exp(-0.4 * (x * x + p * p)),
                    0.6 * std::exp(-0.5 * ((x - 0.4) * (x - 0.4) + p * p)));
    });
    SampledSymbol h = SampledSymbol::from_function(g, [](double x, double p) {
        return cplx(std::exp(-0.5 * (x * x + (p - 0.2) * (p - 0.2))),
                    -0.3 * std::exp(-0.6 * (x * x + p * p)));
    });
    SampledSymbol fg = star_kernel(f, h);
    SampledSymbol fc = f, hc = h;
    for (auto& z : fc.field.values) z = std::conj(z);
    for (auto& z : fc.fine_x) z = std::conj(z);
    for (auto& z : hc.field.values) z = std::conj(z);
    for (auto& z : hc.fine_x) z = std::conj(z);
    SampledSymbol rhs = star_kernel(hc, fc);
    double w = 0.0;
    for (std::size_t idx = 0; idx < fg.field.values.size(); ++idx)
        w = std::max(w, std::abs(std::conj(fg.field.values[idx]) - rhs.field.values[idx]));
    CHECK(w < 1e-8);
}

TEST_CASE("star genvalue residual via the Bopp shift") {
    PhaseGrid g(-8.0, 8.0, 128, 1.0);
    PolySymbol H = PolySymbol::harmonic(1.0, 1.0);
    SampledSymbol rho = rho0_symbol(g);
    CHECK(star_genvalue_residual(H, rho, 0.5) < 1e-6);
    // wrong energy is detected: residual = |E' - E| ||rho||/||rho|| = 0.05
    CHECK(star_genvalue_residual(H, rho, 0.45) > 0.04);
    // p-only Hamiltonian on a p-only symbol reduces to a multiplication check
    PolySymbol Hfree(1.0);
    Hfree.coef(0, 2) = 0.5;
    SampledSymbol rp = SampledSymbol::from_function(
        g, [](double, double p) { return cplx(std::exp(-(p - 1.0) * (p - 1.0))); });
    ComplexField2D act = bopp_apply(Hfree, rp);
    double w = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            w = std::max(w, std::abs(act.at(i, j) - 0.5 * g.p(j) * g.p(j) * rp.at(i, j)));
    CHECK(w < 1e-8);
    PolySymbol quartic(1.0);
    quartic.coef(4, 0) = 1.0;
    CHECK_THROWS_AS(bopp_apply(quartic, rho), degree_overflow_error);
}

TEST_CASE("wigner evolution: identity at t = 0 and classical rotation") {
    PhaseGrid g(-8.0, 8.0, 128, 1.0);
    PolySymbol H = PolySymbol::harmonic(1.0, 1.0);
    const double q0 = 1.5;
    SampledSymbol rho0 = SampledSymbol::from_function(g, [&](double x, double p) {
        return cplx(std::exp(-((x - q0) * (x - q0) + p * p)) / pi);
    });
    EvolveResult r0 = evolve_wigner(rho0, H, 0.0);
    CHECK(interior_linf_diff(r0.rho, rho0) == 0.0);
    for (double t : {0.9, 2.7, 5.1}) {
        EvolveResult r = evolve_wigner(rho0, H, t);
        CHECK(std::abs(r.norm - 1.0) < 1e-6);
        CHECK(r.max_abs_imag < 1e-8);
        double w = 0.0;
        for (std::size_t i = 0; i < g.n(); ++i)
            for (std::size_t j = 0; j < g.n(); ++j) {
                if (!g.interior(i, j)) continue;
                const double x = g.x(i), p = g.p(j);
                const double xb = x * std::cos(t) - p * std::sin(t);
                const double pb = p * std::cos(t) + x * std::sin(t);
                const double ref = std::exp(-((xb - q0) * (xb - q0) + pb * pb)) / pi;
                w = std::max(w, std::abs(r.rho.at(i, j).real() - ref));
            }
        CHECK(w < 1e-4);
    }
}

TEST_CASE("wigner evolution: stationary excited level and rejected Hamiltonians") {
    PhaseGrid g(-8.0, 8.0, 128, 1.0);
    PolySymbol H = PolySymbol::harmonic(1.0, 1.0);
    SampledSymbol rho1 = SampledSymbol::from_function(g, [](double x, double p) {
        const double th = x * x + p * p;
        return cplx(-std::exp(-th) * (1.0 - 2.0 * th) / pi);
    });
    EvolveResult r = evolve_wigner(rho1, H, 1.3);
    double w = 0.0;
    for (std::size_t idx = 0; idx < r.rho.field.values.size(); ++idx)
        w = std::max(w, std::abs(r.rho.field.values[idx] - rho1.field.values[idx]));
    CHECK(w < 1e-6);

    PolySymbol bad(1.0);
    bad.coef(1, 1) = 1.0;  // xp cross term
    bad.coef(0, 2) = 0.5;
    CHECK_THROWS_AS(evolve_wigner(rho1, bad, 0.5), unsupported_hamiltonian_error);
}
