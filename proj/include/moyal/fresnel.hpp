#pragma once

#include <cmath>
#include <complex>

#include "moyal/errors.hpp"
#include "moyal/grid.hpp"

namespace moyal {

// Quadratic phase exp[i(a y^2 + b y + c)]. Conditionally convergent Fresnel
// integrals are defined as the damped limit from Im(a) > 0 (the Im t <= 0
// prescription on propagator time maps to Im(a) >= 0 here).
struct GaussianExponent {
    cplx a;
    cplx b;
    cplx c;
};

// Int_R exp[i(a y^2 + b y + c)] dy = sqrt(i pi / a) exp[i(c - b^2/(4a))],
// principal branch. The principal square root is continuous on the closed
// damped half-plane Im(a) >= 0, a != 0, so no extra branch bookkeeping is
// needed there; past that the damping prescription no longer defines the
// integral and we refuse rather than guess a sign.
inline cplx fresnel_integral(const GaussianExponent& g, double regularization_tol = 1e-9) {
    if (g.a == cplx(0.0)) throw degenerate_quadratic_error("fresnel_integral: a = 0");
    if (g.a.imag() < -regularization_tol * std::abs(g.a))
        throw branch_ambiguity_error(
            "fresnel_integral: Im(a) < 0 beyond regularization tolerance; damped limit undefined");
    const cplx ia_pi = cplx(0.0, pi) / g.a;
    const cplx root = std::sqrt(ia_pi);
    const cplx expo = cplx(0.0, 1.0) * (g.c - g.b * g.b / (4.0 * g.a));
    return root * std::exp(expo);
}

}  // namespace moyal
