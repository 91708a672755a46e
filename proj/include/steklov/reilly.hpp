#pragma once

#include <cmath>
#include <vector>

#include "steklov/errors.hpp"
#include "steklov/harmonics.hpp"
#include "steklov/quadrature.hpp"
#include "steklov/radial.hpp"
#include "steklov/warp.hpp"

namespace steklov::reilly {

// ============================================================================
// Integrated Bochner identity as a numerical check.
//
// For separated functions psi(r)*omega(p) (omega normalized on the sphere)
// all bulk integrals reduce to one-dimensional radial quadratures; no sphere
// area factor appears anywhere. psi'' is reconstructed from the ODE rather
// than differenced, so the only numerical noise is the solver tolerance plus
// Simpson error on the stored grid. The truncated [0, eps) piece of every
// integrand is O(eps^n) and sits far below the reported tolerance.
// ============================================================================

struct Breakdown {
    double hess_sq = 0.0;       // int |Hess phi|^2
    double lap_sq = 0.0;        // int (Lap phi)^2
    double ric_term = 0.0;      // int Ric(grad phi, grad phi)
    double boundary_term = 0.0; // boundary side of the identity
    double residual = 0.0;      // lap_sq - hess_sq - ric_term - boundary_term
    double scale = 0.0;         // natural magnitude for judging the residual
};

namespace detail {

// psi'' from the ODE: tau psi/h^2 - (n-1)(h'/h) psi' + pt.
inline double psi_second(const Geometry& g, double taum, double r, double psi, double dpsi, double pt) {
    const double h = g.h(r);
    return taum * psi / (h * h) - (g.n - 1) * g.dh(r) * dpsi / h + pt;
}

inline void check_grid(const RadialSolution& sol) {
    const std::size_t n = sol.r.size();
    if (n < 5 || (n - 1) % 4 != 0)
        throw GridTooCoarse("reilly: solution grid must have 4k+1 uniform samples");
}

inline QuadResult integrate_samples(const std::vector<double>& y, const RadialSolution& sol) {
    const double dx = sol.r[1] - sol.r[0];
    return simpson_with_error(y, dx);
}

// term_scale: largest magnitude among the integrand's addends before
// cancellation. Integrands like |Hess|^2 of a harmonic profile cancel to
// zero pointwise; the estimate is compared against fp noise of that
// cancellation, not against the (zero) value alone.
inline double guard_tolerance(const QuadResult& q, double term_scale, double span) {
    const double floor = 1e-8 * term_scale * span;
    if (q.abs_err > 1e-6 * std::max(std::abs(q.value), floor))
        throw GridTooCoarse("reilly: quadrature error estimate above 1e-6 relative");
    return q.value;
}

}  // namespace detail

// int |Hess phi|^2: (psi'')^2 + (n-1)(psi')^2 h'^2/h^2
//   + (2 tau/h^2)((psi')^2 + psi^2 h'^2/h^2 - 3 psi psi' h'/h)
//   + psi^2 tau (tau - n + 2)/h^4, all times h^{n-1}.
inline double hessian_sq_integral(const Geometry& g, int m, const RadialSolution& sol,
                                  double* abs_err = nullptr, double* abs_mass = nullptr) {
    detail::check_grid(sol);
    const double taum = tau(m, g.n);
    const std::size_t np = sol.r.size();
    std::vector<double> y(np), ymass(np);
    double tscale = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
        const double r = sol.r[i], h = g.h(r), hp = g.dh(r);
        const double psi = sol.psi[i], dpsi = sol.dpsi[i];
        const double pt = sol.has_aux() ? sol.psit[i] : 0.0;
        const double pss = detail::psi_second(g, taum, r, psi, dpsi, pt);
        const double h2 = h * h;
        const double w = std::pow(h, g.n - 1);
        const double t1 = pss * pss;
        const double t2 = (g.n - 1) * dpsi * dpsi * hp * hp / h2;
        const double t3 = 2.0 * taum / h2 * dpsi * dpsi;
        const double t4 = 2.0 * taum / h2 * psi * psi * hp * hp / h2;
        const double t5 = -6.0 * taum / h2 * psi * dpsi * hp / h;
        const double t6 = psi * psi / (h2 * h2) * taum * (taum - g.n + 2);
        y[i] = (t1 + t2 + t3 + t4 + t5 + t6) * w;
        ymass[i] = (std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4) + std::abs(t5) +
                    std::abs(t6)) * w;
        tscale = std::max(tscale, std::max({std::abs(t1), std::abs(t2), std::abs(t3),
                                            std::abs(t4), std::abs(t5), std::abs(t6)}) * w);
    }
    const QuadResult q = detail::integrate_samples(y, sol);
    if (abs_err) *abs_err = q.abs_err;
    if (abs_mass) *abs_mass = detail::integrate_samples(ymass, sol).value;
    return detail::guard_tolerance(q, tscale, sol.r.back() - sol.r.front());
}

// int (Lap phi)^2 = int pt^2 h^{n-1}; the radial Laplacian of the separated
// function is exactly the auxiliary profile (zero for the sigma problem).
inline double laplacian_sq_integral(const Geometry& g, int m, const RadialSolution& sol,
                                    double* abs_err = nullptr) {
    detail::check_grid(sol);
    (void)m;
    const std::size_t np = sol.r.size();
    std::vector<double> y(np, 0.0);
    double tscale = 0.0;
    if (sol.has_aux()) {
        for (std::size_t i = 0; i < np; ++i) {
            y[i] = sol.psit[i] * sol.psit[i] * std::pow(g.h(sol.r[i]), g.n - 1);
            tscale = std::max(tscale, std::abs(y[i]));
        }
    }
    const QuadResult q = detail::integrate_samples(y, sol);
    if (abs_err) *abs_err = q.abs_err;
    return detail::guard_tolerance(q, tscale, sol.r.back() - sol.r.front());
}

// int Ric(grad phi, grad phi) =
//   -int ((n-1)(h''/h)(psi')^2 + tau (h''/h - (n-2)(1-h'^2)/h^2) psi^2/h^2) h^{n-1};
// identically zero for the Euclidean warp.
inline double ricci_integral(const Geometry& g, int m, const RadialSolution& sol,
                             double* abs_err = nullptr) {
    detail::check_grid(sol);
    const double taum = tau(m, g.n);
    const std::size_t np = sol.r.size();
    std::vector<double> y(np);
    double tscale = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
        const double r = sol.r[i], h = g.h(r), hp = g.dh(r), hpp = g.d2h(r);
        const double psi = sol.psi[i], dpsi = sol.dpsi[i];
        const double h2 = h * h;
        const double w = std::pow(h, g.n - 1);
        const double t1 = (g.n - 1) * hpp / h * dpsi * dpsi;
        const double t2 = taum * (hpp / h - (g.n - 2) * (1.0 - hp * hp) / h2) * psi * psi / h2;
        y[i] = -(t1 + t2) * w;
        tscale = std::max(tscale, std::max(std::abs(t1), std::abs(t2)) * w);
    }
    const QuadResult q = detail::integrate_samples(y, sol);
    if (abs_err) *abs_err = q.abs_err;
    return detail::guard_tolerance(q, tscale, sol.r.back() - sol.r.front());
}

// Boundary side per problem, assembled from the boundary data of the profile:
//   sigma: ((n-1) kappa psi'^2 - 2 lambda psi psi' + kappa lambda psi^2) h^{n-1}(R)
//   xi:    kappa lambda psi(R)^2 h^{n-1}(R)           (psi'(R) = 0)
//   eta:   (n-1) kappa psi'(R)^2 h^{n-1}(R)           (psi(R) = 0)
inline double boundary_term(const Geometry& g, Problem p, int m, const RadialSolution& sol) {
    const std::size_t last = sol.r.size() - 1;
    const double psiR = sol.psi[last], dpsiR = sol.dpsi[last];
    const double kap = g.kappa();
    const double lam = boundary_eigenvalue(g, m);
    const double area = std::pow(g.h(g.R), g.n - 1);
    switch (p) {
        case Problem::Sigma:
            return ((g.n - 1) * kap * dpsiR * dpsiR - 2.0 * lam * psiR * dpsiR +
                    kap * lam * psiR * psiR) * area;
        case Problem::Xi:
            return kap * lam * psiR * psiR * area;
        case Problem::Eta:
            return (g.n - 1) * kap * dpsiR * dpsiR * area;
    }
    return 0.0;
}

inline Breakdown reilly_residual(const Geometry& g, Problem p, int m, const RadialSolution& sol) {
    Breakdown b;
    double hess_mass = 0.0;
    b.hess_sq = hessian_sq_integral(g, m, sol, nullptr, &hess_mass);
    b.lap_sq = laplacian_sq_integral(g, m, sol);
    b.ric_term = ricci_integral(g, m, sol);
    b.boundary_term = boundary_term(g, p, m, sol);
    b.residual = b.lap_sq - b.hess_sq - b.ric_term - b.boundary_term;
    // hess_mass (integrand addends summed without signs) keeps the scale
    // meaningful when the identity degenerates to 0 = 0 pointwise
    b.scale = std::max({std::abs(b.hess_sq), std::abs(b.lap_sq), std::abs(b.ric_term),
                        std::abs(b.boundary_term), 0.01 * hess_mass});
    return b;
}

// Variational quotient recomputed from the stored profile; agrees with the
// shooting eigenvalue to ~1e-6 relative.
inline double rayleigh_quotient(const Geometry& g, Problem p, int m, const RadialSolution& sol) {
    detail::check_grid(sol);
    const std::size_t last = sol.r.size() - 1;
    const double area = std::pow(g.h(g.R), g.n - 1);
    switch (p) {
        case Problem::Sigma: {
            const double taum = tau(m, g.n);
            const std::size_t np = sol.r.size();
            std::vector<double> y(np);
            double tscale = 0.0;
            for (std::size_t i = 0; i < np; ++i) {
                const double r = sol.r[i], h = g.h(r);
                y[i] = (sol.dpsi[i] * sol.dpsi[i] + taum * sol.psi[i] * sol.psi[i] / (h * h)) *
                       std::pow(h, g.n - 1);
                tscale = std::max(tscale, std::abs(y[i]));
            }
            const QuadResult q = detail::integrate_samples(y, sol);
            const double num = detail::guard_tolerance(q, tscale, sol.r.back() - sol.r.front());
            return num / (sol.psi[last] * sol.psi[last] * area);
        }
        case Problem::Xi: {
            const double num = laplacian_sq_integral(g, m, sol);
            return num / (sol.psi[last] * sol.psi[last] * area);
        }
        case Problem::Eta: {
            const double num = laplacian_sq_integral(g, m, sol);
            return num / (sol.dpsi[last] * sol.dpsi[last] * area);
        }
    }
    throw Error("unreachable problem kind");
}

}  // namespace steklov::reilly
