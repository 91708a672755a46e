#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "steklov/errors.hpp"
#include "steklov/quadrature.hpp"
#include "steklov/warp.hpp"

namespace steklov::closedform {

// ============================================================================
// Closed-form references, independent of the shooting path.
//
// Euclidean ball spectra are exact arithmetic. For n = 2 the flattening
// coordinate s(r) (ds = dr/h) turns the radial equations into constant-
// coefficient ODEs; the eigenvalues reduce to one weighted integral of
// E(r) = exp(2m(s(r)-s(R))). E is pinned to 1 at r = R so magnitudes stay
// bounded; every formula below is invariant under that shift.
// ============================================================================

inline double euclid_sigma(int n, double R, int m) {
    (void)n;
    return static_cast<double>(m) / R;
}

inline double euclid_xi(int n, double R, int m) {
    const double md = static_cast<double>(m);
    return md * md * (n + 2.0 * md) / (R * R * R);
}

inline double euclid_eta(int n, double R, int m) {
    return (n + 2.0 * static_cast<double>(m)) / R;
}

namespace detail {

// s(r) - s(R) on a geometric anchor grid; below r_floor the exponential
// weight E is numerically zero and the value is treated as -inf.
class FlatCoord {
public:
    explicit FlatCoord(const Geometry& g, int cells = 2048)
        : geom_(&g), cells_(cells), floor_(1e-7 * g.R),
          lo_(std::log(floor_)), hi_(std::log(g.R)) {
        anchors_.resize(cells_ + 1);
        svals_.assign(cells_ + 1, 0.0);
        for (int j = 0; j <= cells_; ++j)
            anchors_[j] = std::exp(lo_ + (hi_ - lo_) * static_cast<double>(j) / cells_);
        anchors_[cells_] = g.R;
        auto f = [&](double t) { return std::pow(geom_->h(t), 1.0 - geom_->n); };
        for (int j = 1; j <= cells_; ++j)
            svals_[j] = svals_[j - 1] + gauss_kronrod_15(f, anchors_[j - 1], anchors_[j]).value;
        const double sR = svals_[cells_];
        for (auto& v : svals_) v -= sR;
    }

    double r_floor() const { return floor_; }

    double sbar(double r) const {
        if (r >= geom_->R) return 0.0;
        if (r <= floor_) return -std::numeric_limits<double>::infinity();
        int j = static_cast<int>(cells_ * (std::log(r) - lo_) / (hi_ - lo_));
        j = std::max(0, std::min(cells_ - 1, j));
        while (j > 0 && anchors_[j] > r) --j;
        auto f = [&](double t) { return std::pow(geom_->h(t), 1.0 - geom_->n); };
        return svals_[j] + gauss_kronrod_15(f, anchors_[j], r).value;
    }

    // E(r) = exp(2m sbar(r))
    double weight(double r, int m) const {
        const double e = 2.0 * m * sbar(r);
        return e < -700.0 ? 0.0 : std::exp(e);
    }

private:
    const Geometry* geom_;
    int cells_;
    double floor_, lo_, hi_;
    std::vector<double> anchors_, svals_;
};

inline void require_n2(const Geometry& g, const char* who) {
    if (g.n != 2) throw Error(std::string(who) + ": closed form is specific to n = 2");
}

// int_0^R E(r) h(r) dr; the piece below r_floor is beyond machine resolution
// (integrand ~ r^{2m+1}).
inline double weighted_h_integral(const Geometry& g, const FlatCoord& sc, int m) {
    auto f = [&](double r) { return sc.weight(r, m) * g.h(r); };
    return integrate_adaptive(f, sc.r_floor(), g.R, 1e-300, 1e-13, 8000).value;
}

}  // namespace detail

// sigma_(m) = m / h(R) for n = 2: the regular solution is e^{ms}.
inline double sigma_n2(const Geometry& g, int m) {
    detail::require_n2(g, "sigma_n2");
    if (m == 0) return 0.0;
    return static_cast<double>(m) / g.h(g.R);
}

// xi_(m) = m^2 E(R) / (h(R) int_0^R E h dr), E(R) = 1 by normalization.
inline double xi_n2(const Geometry& g, int m) {
    detail::require_n2(g, "xi_n2");
    if (m < 1) throw Error("xi_n2: need m >= 1");
    detail::FlatCoord sc(g);
    const double I = detail::weighted_h_integral(g, sc, m);
    return static_cast<double>(m) * static_cast<double>(m) / (g.h(g.R) * I);
}

// eta_(m) = E(R) h(R) / int_0^R E h dr = xi_(m) h(R)^2 / m^2.
inline double eta_n2(const Geometry& g, int m) {
    detail::require_n2(g, "eta_n2");
    if (m < 1) throw Error("eta_n2: need m >= 1");
    detail::FlatCoord sc(g);
    const double I = detail::weighted_h_integral(g, sc, m);
    return g.h(g.R) / I;
}

// eta_0 = h^{n-1}(R) / int_0^R h^{n-1}(t) dt, any n >= 2 (the auxiliary
// profile is constant, so one quadrature suffices).
inline double eta0(const Geometry& g) {
    auto f = [&](double t) { return std::pow(g.h(t), g.n - 1); };
    const double I = integrate_adaptive(f, 0.0, g.R, 1e-300, 1e-13, 8000).value;
    return f(g.R) / I;
}

// G(r) = E(r) h^2(r)/h'(r) - 2(m+1) int_0^r E(t) h(t) dt. Nonnegative for
// every n = 2 geometry with h'' <= 0 < h'; identically zero when h(r) = r.
inline double g_function(const Geometry& g, int m, double r) {
    detail::require_n2(g, "g_function");
    if (m < 1) throw Error("g_function: need m >= 1");
    if (!(r > 0.0) || r > g.R) throw Error("g_function: r outside (0,R]");
    const double hp = g.dh(r);
    if (!(hp > 0.0)) throw ConvexityFailure("g_function: h'(r) <= 0");

    detail::FlatCoord sc(g);
    const double E = sc.weight(r, m);
    double tail = 0.0;
    if (r > sc.r_floor()) {
        auto f = [&](double t) { return sc.weight(t, m) * g.h(t); };
        tail = integrate_adaptive(f, sc.r_floor(), r, 1e-300, 1e-13, 8000).value;
    }
    return E * g.h(r) * g.h(r) / hp - 2.0 * (m + 1.0) * tail;
}

// Minimum of G over a 512-point scan of (0, R].
inline double g_min(const Geometry& g, int m) {
    detail::require_n2(g, "g_min");
    if (m < 1) throw Error("g_min: need m >= 1");
    constexpr int scan = 512;

    detail::FlatCoord sc(g);
    auto f = [&](double t) { return sc.weight(t, m) * g.h(t); };

    double best = std::numeric_limits<double>::infinity();
    double acc = 0.0;
    double prev = sc.r_floor();
    for (int k = 1; k <= scan; ++k) {
        const double r = g.R * static_cast<double>(k) / scan;
        const double hp = g.dh(r);
        if (!(hp > 0.0)) throw ConvexityFailure("g_min: h' <= 0 on scan grid");
        if (r > prev) {
            acc += integrate_adaptive(f, prev, r, 1e-15 * (std::abs(acc) + 1e-30), 1e-13, 8000).value;
            prev = r;
        }
        const double G = sc.weight(r, m) * g.h(r) * g.h(r) / hp - 2.0 * (m + 1.0) * acc;
        best = std::min(best, G);
    }
    return best;
}

}  // namespace steklov::closedform
