#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "moyal/errors.hpp"

namespace moyal {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Uniform discretization of one-degree-of-freedom phase space. The x axis
// carries n points at cell centers; the p axis is the FFT-conjugate grid
// scaled by hbar and centered on zero, so dx * dp * n == 2*pi*hbar exactly.
class PhaseGrid {
public:
    PhaseGrid(double x_min, double x_max, std::size_t n, double hbar = 1.0)
        : x_min_(x_min), x_max_(x_max), n_(n), hbar_(hbar) {
        if (!(x_max > x_min))
            throw std::invalid_argument("PhaseGrid: x_max must exceed x_min");
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("PhaseGrid: n must be a power of two >= 8");
        if (!(hbar > 0.0))
            throw std::invalid_argument("PhaseGrid: hbar must be positive");
        dx_ = (x_max - x_min) / static_cast<double>(n);
        dp_ = 2.0 * pi * hbar / (static_cast<double>(n) * dx_);
    }

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    std::size_t n() const { return n_; }
    double hbar() const { return hbar_; }
    double dx() const { return dx_; }
    double dp() const { return dp_; }

    // Cell-centered positions; momenta centered on zero.
    double x(std::size_t i) const { return x_min_ + (static_cast<double>(i) + 0.5) * dx_; }
    double p(std::size_t j) const {
        return (static_cast<double>(j) - static_cast<double>(n_) / 2.0) * dp_;
    }
    double p_max() const { return p(n_ - 1); }

    // Central 50% of each axis; grid-route assertions are evaluated here to
    // stay clear of FFT wraparound.
    bool interior_x(std::size_t i) const { return i >= n_ / 4 && i < 3 * n_ / 4; }
    bool interior_p(std::size_t j) const { return j >= n_ / 4 && j < 3 * n_ / 4; }
    bool interior(std::size_t i, std::size_t j) const { return interior_x(i) && interior_p(j); }

    bool operator==(const PhaseGrid& o) const {
        return x_min_ == o.x_min_ && x_max_ == o.x_max_ && n_ == o.n_ && hbar_ == o.hbar_;
    }
    bool operator!=(const PhaseGrid& o) const { return !(*this == o); }

private:
    double x_min_, x_max_;
    std::size_t n_;
    double hbar_;
    double dx_, dp_;
};

inline void require_same_grid(const PhaseGrid& a, const PhaseGrid& b, const char* what) {
    if (a != b) throw grid_mismatch_error(std::string(what) + ": grids differ");
}

inline bool all_finite(const std::vector<cplx>& v) {
    for (const cplx& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

enum class Axis { x, p };

// Complex samples along one grid axis.
struct ComplexField1D {
    PhaseGrid grid;
    Axis axis = Axis::x;
    std::vector<cplx> values;

    ComplexField1D(const PhaseGrid& g, Axis ax = Axis::x)
        : grid(g), axis(ax), values(g.n(), cplx(0.0)) {}

    template <class F>
    static ComplexField1D sample(const PhaseGrid& g, F&& fn, Axis ax = Axis::x) {
        ComplexField1D out(g, ax);
        for (std::size_t i = 0; i < g.n(); ++i)
            out.values[i] = fn(ax == Axis::x ? g.x(i) : g.p(i));
        return out;
    }

    std::size_t size() const { return values.size(); }
    cplx& operator[](std::size_t i) { return values[i]; }
    const cplx& operator[](std::size_t i) const { return values[i]; }

    double norm_l2_sq() const {
        double s = 0.0;
        for (const cplx& z : values) s += std::norm(z);
        return s * (axis == Axis::x ? grid.dx() : grid.dp());
    }
    void check_finite(const char* what) const {
        if (!all_finite(values)) throw error(std::string(what) + ": non-finite field values");
    }
};

// Complex samples over the (x, p) grid, row-major with p contiguous.
struct ComplexField2D {
    PhaseGrid grid;
    std::vector<cplx> values;

    explicit ComplexField2D(const PhaseGrid& g) : grid(g), values(g.n() * g.n(), cplx(0.0)) {}

    cplx& at(std::size_t ix, std::size_t ip) { return values[ix * grid.n() + ip]; }
    const cplx& at(std::size_t ix, std::size_t ip) const { return values[ix * grid.n() + ip]; }

    void check_finite(const char* what) const {
        if (!all_finite(values)) throw error(std::string(what) + ": non-finite field values");
    }
};

}  // namespace moyal
