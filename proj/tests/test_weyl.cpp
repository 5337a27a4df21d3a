#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "moyal/fft.hpp"
#include "moyal/grid.hpp"
#include "moyal/weyl.hpp"
#include "oracles.hpp"

using namespace moyal;

namespace {

ComplexField1D ho_ground_state(const PhaseGrid& g, double p0 = 0.0) {
    // m = w = 1: psi(x) = (1/(pi hbar))^{1/4} e^{-x^2/(2 hbar)} e^{i p0 x / hbar}
    const double h = g.hbar();
    return ComplexField1D::sample(g, [&](double x) {
        return std::pow(pi * h, -0.25) * std::exp(-x * x / (2.0 * h)) *
               std::exp(cplx(0.0, p0 * x / h));
    });
}

// Low-frequency random modes under a Gaussian envelope: band-limited content
// that decays before the window edge, the domain the finite-window transforms
// are built for.
SampledSymbol random_band_limited(const PhaseGrid& g, std::uint64_t seed) {
    auto gen = oracle::rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> freq(-int(g.n() / 16), int(g.n() / 16));
    struct Mode {
        int a, b;
        cplx c;
    };
    std::vector<Mode> modes;
    for (int k = 0; k < 6; ++k) modes.push_back({freq(gen), freq(gen), cplx(u(gen), u(gen))});
    const double lx = g.x_max() - g.x_min();
    const double lp = g.dp() * double(g.n());
    const double sx = lx / 20.0, sp = lp / 20.0;
    return SampledSymbol::from_function(g, [=](double x, double p) {
        cplx s(0.0);
        for (const auto& m : modes)
            s += m.c * std::exp(cplx(0.0, 2.0 * pi * (m.a * x / lx + m.b * p / lp)));
        return s * std::exp(-0.5 * (x * x / (sx * sx) + p * p / (sp * sp)));
    });
}

}  // namespace

TEST_CASE("wigner of the oscillator ground state is the Gaussian 1/(pi hbar) e^{-2H/hbar}") {
    PhaseGrid g(-8.0, 8.0, 128, 1.0);
    auto res = wigner_from_wavefunction(ho_ground_state(g), "rho0");
    CHECK(res.max_abs_imag < 1e-10);
    CHECK(res.norm == doctest::Approx(1.0).epsilon(1e-6));
    for (std::size_t i = 0; i < g.n(); i += 5)
        for (std::size_t j = 0; j < g.n(); j += 5) {
            const double q = g.x(i), p = g.p(j);
            const double expect = std::exp(-(q * q + p * p)) / pi;
            CHECK(std::abs(res.symbol.at(i, j).real() - expect) < 1e-6);
        }
}

TEST_CASE("wigner translation covariance under a momentum boost") {
    PhaseGrid g(-8.0, 8.0, 128, 1.0);
    const double p0 = 8.0 * g.dp();  // grid-aligned boost
    auto base = wigner_from_wavefunction(ho_ground_state(g));
    auto boosted = wigner_from_wavefunction(ho_ground_state(g, p0));
    for (std::size_t i = 0; i < g.n(); i += 3)
        for (std::size_t j = 8; j < g.n(); j += 3)
            CHECK(std::abs(boosted.symbol.at(i, j) - base.symbol.at(i, j - 8)) < 1e-9);
}

TEST_CASE("wigner marginals recover position and momentum densities") {
    PhaseGrid g(-8.0, 8.0, 128, 1.0);
    ComplexField1D psi = ho_ground_state(g, 3.0 * g.dp());
    auto res = wigner_from_wavefunction(psi);
    for (std::size_t i = 0; i < g.n(); i += 7) {
        cplx m(0.0);
        for (std::size_t j = 0; j < g.n(); ++j) m += res.symbol.at(i, j);
        m *= g.dp();
        CHECK(std::abs(m - std::norm(psi.values[i])) < 1e-6);
    }
    ComplexField1D psit = fourier_x_to_p(psi);
    for (std::size_t j = 0; j < g.n(); j += 7) {
        cplx m(0.0);
        for (std::size_t i = 0; i < g.n(); ++i) m += res.symbol.at(i, j);
        m *= g.dx();
        const double expect = 2.0 * pi * g.hbar() * std::norm(psit.values[j]);
        CHECK(std::abs(m - expect) < 1e-6);
    }
}

TEST_CASE("wigner rejects unnormalized input") {
    PhaseGrid g(-8.0, 8.0, 64, 1.0);
    ComplexField1D psi = ho_ground_state(g);
    for (auto& z : psi.values) z *= 1.01;
    CHECK_THROWS_AS(wigner_from_wavefunction(psi), not_normalized_error);
}

TEST_CASE("weyl map of the unit symbol is the identity kernel") {
    PhaseGrid g(-6.0, 6.0, 64, 1.0);
    SampledSymbol one = SampledSymbol::from_function(g, [](double, double) { return cplx(1.0); });
    OperatorKernel k = kernel_from_symbol(one);
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j) {
            const double expect = (i == j) ? 1.0 / g.dx() : 0.0;
            CHECK(std::abs(k.at(i, j) - expect) < 1e-9 / g.dx());
        }
}

TEST_CASE("weyl map of p acts as -i hbar d/dx") {
    PhaseGrid g(-8.0, 8.0, 128, 0.5);
    SampledSymbol psym = SampledSymbol::from_function(g, [](double, double p) { return cplx(p); });
    OperatorKernel k = kernel_from_symbol(psym);
    CHECK(k.is_hermitian(1e-9));
    const double h = g.hbar();
    ComplexField1D psi = ComplexField1D::sample(
        g, [&](double x) { return std::exp(-2.0 * x * x) * std::pow(4.0 / pi, 0.25); });
    for (std::size_t i = 32; i < g.n() - 32; i += 5) {
        cplx acc(0.0);
        for (std::size_t j = 0; j < g.n(); ++j) acc += k.at(i, j) * psi.values[j] * g.dx();
        const double x = g.x(i);
        const cplx expect = cplx(0.0, -h) * (-4.0 * x) * psi.values[i];
        CHECK(std::abs(acc - expect) < 1e-8);
    }
}

TEST_CASE("weyl map sends the ground-state wigner function to the rank-1 projector") {
    PhaseGrid g(-8.0, 8.0, 128, 1.0);
    SampledSymbol rho0 = SampledSymbol::from_function(g, [&](double q, double p) {
        return cplx(std::exp(-(q * q + p * p) / g.hbar()) / (pi * g.hbar()));
    });
    OperatorKernel k = kernel_from_symbol(rho0);
    ComplexField1D psi = ho_ground_state(g);
    // the unit-normalized Wigner function quantizes to the projector over
    // 2 pi hbar; the discrete kernel is lag-periodic, so the continuum form
    // applies on the principal band |i - j| <= n/2
    const double w = 2.0 * pi * g.hbar();
    for (std::size_t i = 0; i < g.n(); i += 6)
        for (std::size_t j = 0; j < g.n(); j += 6) {
            if (std::labs(long(i) - long(j)) > long(g.n() / 2)) continue;
            const cplx expect = psi.values[i] * std::conj(psi.values[j]) / w;
            CHECK(std::abs(k.at(i, j) - expect) < 1e-6);
        }
}

TEST_CASE("symbol of the identity kernel is 1 and of the projector is the Gaussian") {
    // [-10, 10] keeps the kernel's separation tail below the target accuracy
    PhaseGrid g(-10.0, 10.0, 128, 1.0);
    SampledSymbol one = symbol_from_kernel(identity_kernel(g));
    for (std::size_t i = 0; i < g.n(); i += 5)
        for (std::size_t j = 0; j < g.n(); j += 5) CHECK(std::abs(one.at(i, j) - 1.0) < 1e-9);

    OperatorKernel proj(g);
    ComplexField1D psi = ho_ground_state(g);
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            proj.at(i, j) = psi.values[i] * std::conj(psi.values[j]);
    SampledSymbol rho = symbol_from_kernel(proj);
    // symbol of the projector is 2 pi hbar times the Wigner function
    for (std::size_t i = 0; i < g.n(); i += 5)
        for (std::size_t j = 0; j < g.n(); j += 5) {
            const double expect = 2.0 * g.hbar() *
                                  std::exp(-(g.x(i) * g.x(i) + g.p(j) * g.p(j)));
            CHECK(std::abs(rho.at(i, j) - expect) < 1e-8);
        }
}

TEST_CASE("weyl round trip is the identity on band-limited symbols") {
    PhaseGrid g(-6.0, 6.0, 64, 1.0);
    SampledSymbol f = random_band_limited(g, 23);
    SampledSymbol back = symbol_from_kernel(kernel_from_symbol(f));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            worst = std::max(worst, std::abs(back.at(i, j) - f.at(i, j)));
    CHECK(worst < 1e-8);
}

TEST_CASE("expectation values against moment oracles") {
    PhaseGrid g(-10.0, 10.0, 128, 1.0);
    SampledSymbol rho0 = SampledSymbol::from_function(
        g, [&](double q, double p) { return cplx(std::exp(-(q * q + p * p)) / pi); });
    SampledSymbol H = SampledSymbol::from_function(
        g, [](double q, double p) { return cplx(0.5 * (q * q + p * p)); });
    SampledSymbol one = SampledSymbol::from_function(g, [](double, double) { return cplx(1.0); });

    CHECK(std::abs(expectation(rho0, H) - 0.5) < 1e-8);
    CHECK(std::abs(expectation(rho0, one) - 1.0) < 1e-8);

    SampledSymbol rho1 = SampledSymbol::from_function(g, [&](double q, double p) {
        const double twoH = q * q + p * p;
        return cplx(-std::exp(-twoH) * (1.0 - 2.0 * twoH) / pi);
    });
    // oracle: action-angle reduction Int F(H) dq dp = 2 pi Int_0^inf F(H) dH
    // (w = 1), Simpson
    double s = 0.0;
    const int nq = 4000;
    const double hmax = 40.0, dh = hmax / nq;
    for (int k = 0; k <= nq; ++k) {
        const double Hv = dh * k;
        const double f = -std::exp(-2.0 * Hv) * (1.0 - 4.0 * Hv) / pi * Hv;
        s += f * ((k == 0 || k == nq) ? 1.0 : ((k & 1) ? 4.0 : 2.0));
    }
    const double expect = 2.0 * pi * s * dh / 3.0;
    CHECK(expect == doctest::Approx(1.5).epsilon(1e-6));  // oracle sanity
    CHECK(std::abs(expectation(rho1, H) - expect) < 1e-6);

    PhaseGrid g2(-10.0, 10.0, 64, 1.0);
    SampledSymbol other =
        SampledSymbol::from_function(g2, [](double, double) { return cplx(1.0); });
    CHECK_THROWS_AS(expectation(rho0, other), grid_mismatch_error);
}

TEST_CASE("trace pairing matches the discrete operator trace") {
    PhaseGrid g(-7.0, 7.0, 64, 1.0);
    SampledSymbol f = SampledSymbol::from_function(g, [](double q, double p) {
        return cplx(std::exp(-0.5 * (q * q + p * p)), 0.3 * std::exp(-q * q - 0.3 * p * p));
    });
    SampledSymbol h = SampledSymbol::from_function(g, [](double q, double p) {
        return cplx(std::exp(-0.4 * ((q - 0.5) * (q - 0.5) + p * p)));
    });
    OperatorKernel kf = kernel_from_symbol(f);
    OperatorKernel kh = kernel_from_symbol(h);
    // count each periodic lag class once (principal band)
    cplx tr(0.0);
    for (long i = 0; i < long(g.n()); ++i)
        for (long j = 0; j < long(g.n()); ++j)
            if (std::labs(i - j) <= long(g.n() / 2)) tr += kf.at(i, j) * kh.at(j, i);
    tr *= g.dx() * g.dx();
    const cplx pairing = expectation(f, h) / (2.0 * pi * g.hbar());
    CHECK(std::abs(tr - pairing) < 1e-6 * (1.0 + std::abs(pairing)));
}

TEST_CASE("nondiagonal symbol carries phase times delta") {
    PhaseGrid g(-8.0, 8.0, 128, 1.0);
    NondiagonalSymbol diag{0.7, 0.7};
    CHECK(diag.midpoint() == doctest::Approx(0.7));
    CHECK(diag.separation() == 0.0);
    // pairing with Exp_* = 1 (t = 0) gives the delta limit: weight 1/dx at
    // xf = x0 and Dirichlet-small values at grid-aligned separations
    auto unit = [](double, double) { return cplx(1.0); };
    const cplx peak = NondiagonalSymbol{0.3, 0.3}.pair_with(unit, g);
    CHECK(std::abs(peak - 1.0 / g.dx()) < 1e-9);
    const cplx off = NondiagonalSymbol{0.3, 0.3 + 4.0 * g.dx()}.pair_with(unit, g);
    CHECK(std::abs(off) < 1e-9);
}
