#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "moyal/errors.hpp"

namespace moyal {

struct OdeResult {
    double phi;
    double dphi;
    int zero_count;
};

namespace detail {

// Sign-change counter with a |phi| < 1e-12 band treated as a crossing, so
// grazing numerical zeros are not double counted.
class ZeroCounter {
public:
    explicit ZeroCounter(double tol = 1e-12) : tol_(tol) {}
    void feed(double phi) {
        if (std::abs(phi) < tol_) {
            ++count_;
            sign_ = -sign_;
            return;
        }
        const int s = phi > 0.0 ? 1 : -1;
        if (sign_ != 0 && s != sign_) ++count_;
        sign_ = s;
    }
    void prime(int s) { sign_ = s; }
    int count() const { return count_; }

private:
    double tol_;
    int sign_ = 0;
    int count_ = 0;
};

}  // namespace detail

// RK4 for m phi'' + c(t) phi = 0 with phi(t0)=0, phi'(t0)=1. Returns the
// endpoint state and the number of sign changes of phi on (t0, t1].
inline OdeResult integrate_ode_2nd(const std::function<double(double)>& c, double m, double t0,
                                   double t1, std::size_t steps) {
    if (steps < 16) throw std::invalid_argument("integrate_ode_2nd: steps must be >= 16");
    if (!(m > 0.0)) throw std::invalid_argument("integrate_ode_2nd: mass must be positive");
    const double h = (t1 - t0) / static_cast<double>(steps);
    double phi = 0.0, v = 1.0;
    detail::ZeroCounter zc;
    zc.prime(h > 0.0 ? 1 : -1);
    auto acc = [&](double t, double q) { return -c(t) * q / m; };
    double t = t0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double k1q = v, k1v = acc(t, phi);
        const double k2q = v + 0.5 * h * k1v, k2v = acc(t + 0.5 * h, phi + 0.5 * h * k1q);
        const double k3q = v + 0.5 * h * k2v, k3v = acc(t + 0.5 * h, phi + 0.5 * h * k2q);
        const double k4q = v + h * k3v, k4v = acc(t + h, phi + h * k3q);
        phi += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        t = t0 + (k + 1) * h;
        zc.feed(phi);
    }
    return {phi, v, zc.count()};
}

// Trajectory of the 6-component linear system used by the Gelfand-Yaglom
// propagator: homogeneous pair (phi, chi) and particular solution qp of
// m q'' + c(t) q = f(t), all from t0 = 0.
struct QuadraticTrajectory {
    std::vector<double> t;
    std::vector<double> phi, dphi;   // phi(0)=0, phi'(0)=1
    std::vector<double> chi, dchi;   // chi(0)=1, chi'(0)=0
    std::vector<double> qp, dqp;     // qp(0)=0, qp'(0)=0
    int phi_zero_count = 0;
};

inline QuadraticTrajectory integrate_quadratic_system(const std::function<double(double)>& c,
                                                      const std::function<double(double)>& f,
                                                      double m, double t1, std::size_t steps) {
    if (steps < 16) throw std::invalid_argument("integrate_quadratic_system: steps must be >= 16");
    if (steps % 2 != 0) ++steps;  // Simpson wants an even interval count
    QuadraticTrajectory tr;
    tr.t.resize(steps + 1);
    tr.phi.resize(steps + 1);
    tr.dphi.resize(steps + 1);
    tr.chi.resize(steps + 1);
    tr.dchi.resize(steps + 1);
    tr.qp.resize(steps + 1);
    tr.dqp.resize(steps + 1);
    const double h = t1 / static_cast<double>(steps);
    double y[6] = {0.0, 1.0, 1.0, 0.0, 0.0, 0.0};
    auto rhs = [&](double t, const double* s, double* d) {
        const double ct = c(t), ft = f(t);
        d[0] = s[1];
        d[1] = -ct * s[0] / m;
        d[2] = s[3];
        d[3] = -ct * s[2] / m;
        d[4] = s[5];
        d[5] = (ft - ct * s[4]) / m;
    };
    detail::ZeroCounter zc;
    zc.prime(h > 0.0 ? 1 : -1);
    auto record = [&](std::size_t k) {
        tr.t[k] = k * h;
        tr.phi[k] = y[0];
        tr.dphi[k] = y[1];
        tr.chi[k] = y[2];
        tr.dchi[k] = y[3];
        tr.qp[k] = y[4];
        tr.dqp[k] = y[5];
    };
    record(0);
    double k1[6], k2[6], k3[6], k4[6], tmp[6];
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = k * h;
        rhs(t, y, k1);
        for (int i = 0; i < 6; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, tmp, k2);
        for (int i = 0; i < 6; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, tmp, k3);
        for (int i = 0; i < 6; ++i) tmp[i] = y[i] + h * k3[i];
        rhs(t + h, tmp, k4);
        for (int i = 0; i < 6; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        record(k + 1);
        if (k + 1 < steps) zc.feed(y[0]);  // endpoint zero is a caustic, reported separately
    }
    tr.phi_zero_count = zc.count();
    return tr;
}

// Composite Simpson on the stored uniform trajectory grid.
inline double simpson(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size() - 1;
    const double h = (t.back() - t.front()) / static_cast<double>(n);
    double s4 = 0.0, s2 = 0.0;
    for (std::size_t i = 1; i < n; i += 2) s4 += y[i];
    for (std::size_t i = 2; i < n; i += 2) s2 += y[i];
    return h / 3.0 * (y.front() + y.back() + 4.0 * s4 + 2.0 * s2);
}

}  // namespace moyal
