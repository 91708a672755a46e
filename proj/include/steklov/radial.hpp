#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "steklov/errors.hpp"
#include "steklov/harmonics.hpp"
#include "steklov/ode.hpp"
#include "steklov/quadrature.hpp"
#include "steklov/warp.hpp"

namespace steklov {

// ============================================================================
// Radial reductions of the three boundary eigenvalue problems.
//
// Separated eigenfunctions psi(r)*omega(p) reduce each problem to ODEs in r
// with a regular singular point at the origin:
//
//   L psi := psi'' + (n-1)(h'/h) psi' - tau_m psi / h^2
//
//   sigma:  L psi = 0,                      sigma_(m) = psi'(R)/psi(R)
//   xi:     L psi = pt, L pt = 0, psi'(R)=0,   xi_(m) = -pt'(R)/psi(R)
//   eta:    L psi = pt, L pt = 0, psi(R)=0,   eta_(m) = pt(R)/psi'(R)
//
// Integration starts at eps with the leading Frobenius behavior psi ~ r^m;
// the seeding error is certified at run time by eps-halving rather than by
// hand-derived series coefficients. All eigenvalue formulas are ratios, so
// the overall trajectory scale is free; it is kept at the r^m normalization
// when representable and tracked as a log-factor otherwise (supported range
// m <= 50).
// ============================================================================

enum class Problem { Sigma, Xi, Eta };

inline const char* problem_name(Problem p) {
    switch (p) {
        case Problem::Sigma: return "sigma";
        case Problem::Xi: return "xi";
        case Problem::Eta: return "eta";
    }
    return "?";
}

struct ShootingConfig {
    double eps_origin = 0.0;  // starting radius; 0 selects 1e-6 * R
    double rtol = 1e-10;
    double atol = 1e-12;
    long max_steps = 1000000;
    int grid_intervals = 1024;  // uniform output cells on [eps, R]
    bool certify_eps = true;    // fill diagnostics.eps_delta by re-solving at eps/2

    double resolved_eps(double R) const {
        validate();
        const double e = eps_origin > 0.0 ? eps_origin : 1e-6 * R;
        if (!(e > 0.0) || e >= 0.1 * R) throw Error("shooting: need 0 < eps_origin < R/10");
        return e;
    }

    void validate() const {
        if (!(rtol > 0.0) || !(atol > 0.0)) throw Error("shooting: tolerances must be positive");
        // downstream Simpson passes need 4k+1 samples; 512+ cells for quadrature density
        if (grid_intervals < 512 || grid_intervals % 4 != 0)
            throw Error("shooting: grid_intervals must be a multiple of 4, at least 512");
    }
};

struct SolverDiagnostics {
    double eps_used = 0.0;
    double residual = 0.0;   // max relative ODE flux residual over the grid
    double eps_delta = 0.0;  // relative eigenvalue change under eps -> eps/2
};

struct EigenResult {
    Problem problem = Problem::Sigma;
    int m = 0;
    double value = 0.0;
    long long multiplicity = 1;
    SolverDiagnostics diag;
};

// Radial profile on a uniform grid in [eps, R]. psit/dpsit hold the biharmonic
// auxiliary pt = Laplacian profile (empty for sigma). log_scale records any
// factor removed relative to the r^m seed normalization.
struct RadialSolution {
    Problem problem = Problem::Sigma;
    int m = 0, n = 0;
    std::vector<double> r;
    std::vector<double> psi, dpsi;
    std::vector<double> psit, dpsit;
    double log_scale = 0.0;

    bool has_aux() const { return !psit.empty(); }
};

// Raw trajectories of the fourth-order shooting: hom solves L hom = 0 with the
// r^m seed (it is both the auxiliary pt and the homogeneous corrector), part
// solves L part = hom with zero seed.
struct FourthOrderSolution {
    int m = 0, n = 0;
    std::vector<double> r;
    std::vector<double> hom, dhom;
    std::vector<double> part, dpart;
    double log_scale = 0.0;
};

namespace detail {

inline std::vector<double> uniform_grid(double a, double b, int cells) {
    std::vector<double> g(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i)
        g[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / cells;
    g.back() = b;
    return g;
}

// Harmonize per-point stored values to the final renormalization scale.
inline void rescale_to_final(std::vector<double>& v, const std::vector<double>& logs, double final_log) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (logs[i] != final_log) v[i] *= std::exp(logs[i] - final_log);
    }
}

struct SeedScale {
    double value;      // psi(eps) actually used
    double log_offset; // ln of removed factor: true seed = value * exp(log_offset)
};

inline SeedScale frobenius_seed(int m, double eps) {
    const double lg = static_cast<double>(m) * std::log(eps);
    if (lg > -500.0) return {std::exp(lg), 0.0};
    return {1.0, lg};
}

}  // namespace detail

// L psi = 0 from the r^m Frobenius seed at eps; output on >= grid_intervals+1
// uniform points for downstream quadrature.
inline RadialSolution integrate_homogeneous(const Geometry& geom, int m, const ShootingConfig& cfg = {}) {
    if (m < 1) throw Error("integrate_homogeneous: need m >= 1");
    const double eps = cfg.resolved_eps(geom.R);
    const double taum = tau(m, geom.n);
    const double nm1 = static_cast<double>(geom.n - 1);

    auto rhs = [&](double r, const double* y, double* dy) {
        const double h = geom.h(r);
        if (!(h > 0.0)) throw SingularWarp("h(r) <= 0 during integration");
        const double w = geom.dh(r) / h;
        dy[0] = y[1];
        dy[1] = taum * y[0] / (h * h) - nm1 * w * y[1];
    };

    RadialSolution sol;
    sol.problem = Problem::Sigma;
    sol.m = m;
    sol.n = geom.n;
    sol.r = detail::uniform_grid(eps, geom.R, cfg.grid_intervals);
    const std::size_t np = sol.r.size();
    sol.psi.resize(np);
    sol.dpsi.resize(np);
    std::vector<double> logs(np, 0.0);

    const auto seed = detail::frobenius_seed(m, eps);
    double y[2] = {seed.value, static_cast<double>(m) * seed.value / eps};

    OdeOptions opt{cfg.rtol, cfg.atol, cfg.max_steps};
    const double final_log = integrate_linear_to_grid(
        rhs, 2, sol.r, std::span<double>(y, 2), opt,
        [&](std::size_t i, std::span<const double> v, double lg) {
            sol.psi[i] = v[0];
            sol.dpsi[i] = v[1];
            logs[i] = lg;
        });

    detail::rescale_to_final(sol.psi, logs, final_log);
    detail::rescale_to_final(sol.dpsi, logs, final_log);
    sol.log_scale = final_log + seed.log_offset;
    return sol;
}

// Coupled run: hom (L hom = 0, r^m seed) and part (L part = hom, zero seed).
inline FourthOrderSolution integrate_fourth_order(const Geometry& geom, int m,
                                                  const ShootingConfig& cfg = {}) {
    if (m < 1) throw Error("integrate_fourth_order: need m >= 1");
    const double eps = cfg.resolved_eps(geom.R);
    const double taum = tau(m, geom.n);
    const double nm1 = static_cast<double>(geom.n - 1);

    auto rhs = [&](double r, const double* y, double* dy) {
        const double h = geom.h(r);
        if (!(h > 0.0)) throw SingularWarp("h(r) <= 0 during integration");
        const double h2 = h * h;
        const double w = geom.dh(r) / h;
        dy[0] = y[1];
        dy[1] = taum * y[0] / h2 - nm1 * w * y[1];
        dy[2] = y[3];
        dy[3] = taum * y[2] / h2 - nm1 * w * y[3] + y[0];
    };

    FourthOrderSolution sol;
    sol.m = m;
    sol.n = geom.n;
    sol.r = detail::uniform_grid(eps, geom.R, cfg.grid_intervals);
    const std::size_t np = sol.r.size();
    sol.hom.resize(np);
    sol.dhom.resize(np);
    sol.part.resize(np);
    sol.dpart.resize(np);
    std::vector<double> logs(np, 0.0);

    const auto seed = detail::frobenius_seed(m, eps);
    double y[4] = {seed.value, static_cast<double>(m) * seed.value / eps, 0.0, 0.0};

    OdeOptions opt{cfg.rtol, cfg.atol, cfg.max_steps};
    const double final_log = integrate_linear_to_grid(
        rhs, 4, sol.r, std::span<double>(y, 4), opt,
        [&](std::size_t i, std::span<const double> v, double lg) {
            sol.hom[i] = v[0];
            sol.dhom[i] = v[1];
            sol.part[i] = v[2];
            sol.dpart[i] = v[3];
            logs[i] = lg;
        });

    detail::rescale_to_final(sol.hom, logs, final_log);
    detail::rescale_to_final(sol.dhom, logs, final_log);
    detail::rescale_to_final(sol.part, logs, final_log);
    detail::rescale_to_final(sol.dpart, logs, final_log);
    sol.log_scale = final_log + seed.log_offset;
    return sol;
}

// Max relative mismatch of the integrated flux identity
//   h^{n-1} psi' |_a^b = int_a^b (tau h^{n-3} psi + h^{n-1} pt) dr
// over grid cells, with cubic-Hermite midpoints inside each cell. Cells of
// the launch region where profiles behave like r^{m+n} across a large radius
// ratio are skipped: a cubic cannot interpolate them and the seeding there is
// certified by the eps-halving check instead.
inline double max_ode_residual(const Geometry& geom, const RadialSolution& sol) {
    const double taum = tau(sol.m, geom.n);
    const int n = geom.n;
    auto hn = [&](double r, double p) { return std::pow(geom.h(r), p); };
    const double power = sol.m + geom.n;

    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < sol.r.size(); ++i) {
        if (power * std::log(sol.r[i + 1] / sol.r[i]) > 0.15) continue;
        const double a = sol.r[i], b = sol.r[i + 1], dx = b - a, mid = 0.5 * (a + b);
        const double fa = hn(a, n - 1) * sol.dpsi[i];
        const double fb = hn(b, n - 1) * sol.dpsi[i + 1];

        const double psi_mid = 0.5 * (sol.psi[i] + sol.psi[i + 1]) +
                               0.125 * dx * (sol.dpsi[i] - sol.dpsi[i + 1]);
        double pt_a = 0.0, pt_b = 0.0, pt_mid = 0.0;
        if (sol.has_aux()) {
            pt_a = sol.psit[i];
            pt_b = sol.psit[i + 1];
            pt_mid = 0.5 * (sol.psit[i] + sol.psit[i + 1]) +
                     0.125 * dx * (sol.dpsit[i] - sol.dpsit[i + 1]);
        }
        const double ga = taum * hn(a, n - 3) * sol.psi[i] + hn(a, n - 1) * pt_a;
        const double gb = taum * hn(b, n - 3) * sol.psi[i + 1] + hn(b, n - 1) * pt_b;
        const double gm = taum * hn(mid, n - 3) * psi_mid + hn(mid, n - 1) * pt_mid;

        const double integral = dx / 6.0 * (ga + 4.0 * gm + gb);
        const double denom = std::max({std::abs(fa), std::abs(fb),
                                       dx * std::abs(ga), dx * std::abs(gb), 1e-300});
        worst = std::max(worst, std::abs(fb - fa - integral) / denom);
    }
    return worst;
}

namespace detail {

inline double eigenvalue_once(Problem p, const Geometry& geom, int m, ShootingConfig cfg,
                              RadialSolution* keep_solution);

inline RadialSolution constant_solution(Problem p, const Geometry& geom, const ShootingConfig& cfg) {
    RadialSolution sol;
    sol.problem = p;
    sol.m = 0;
    sol.n = geom.n;
    sol.r = uniform_grid(cfg.resolved_eps(geom.R), geom.R, cfg.grid_intervals);
    sol.psi.assign(sol.r.size(), 1.0);
    sol.dpsi.assign(sol.r.size(), 0.0);
    if (p == Problem::Xi) {
        sol.psit.assign(sol.r.size(), 0.0);
        sol.dpsit.assign(sol.r.size(), 0.0);
    }
    return sol;
}

// m = 0 eta profile: pt = const = 1, h^{n-1} psi' = int_0^r h^{n-1}, psi(R)=0.
inline RadialSolution eta0_solution(const Geometry& geom, const ShootingConfig& cfg) {
    RadialSolution sol;
    sol.problem = Problem::Eta;
    sol.m = 0;
    sol.n = geom.n;
    const double eps = cfg.resolved_eps(geom.R);
    sol.r = uniform_grid(eps, geom.R, cfg.grid_intervals);
    const std::size_t np = sol.r.size();

    auto hpow = [&](double t) { return std::pow(geom.h(t), geom.n - 1); };
    const double F_eps = integrate_adaptive(hpow, 0.0, eps, 1e-30, 1e-14).value;
    std::vector<double> F = cumulative_gk15(hpow, sol.r);
    for (auto& v : F) v += F_eps;

    sol.dpsi.resize(np);
    for (std::size_t i = 0; i < np; ++i) sol.dpsi[i] = F[i] / hpow(sol.r[i]);

    // psi' as a function of arbitrary t, via the uniform anchor table
    const double dx = (geom.R - eps) / cfg.grid_intervals;
    auto dpsi_at = [&](double t) {
        auto j = static_cast<std::size_t>(std::min<double>(cfg.grid_intervals - 1.0,
                                                           std::max(0.0, (t - eps) / dx)));
        const double Ft = F[j] + gauss_kronrod_15(hpow, sol.r[j], t).value;
        return Ft / hpow(t);
    };
    std::vector<double> S = cumulative_gk15(dpsi_at, sol.r);
    sol.psi.resize(np);
    for (std::size_t i = 0; i < np; ++i) sol.psi[i] = S[i] - S[np - 1];

    sol.psit.assign(np, 1.0);
    sol.dpsit.assign(np, 0.0);
    return sol;
}

inline RadialSolution combine_fourth_order(Problem p, const FourthOrderSolution& raw) {
    const std::size_t last = raw.r.size() - 1;
    double c;
    if (p == Problem::Xi) {
        if (raw.dhom[last] == 0.0) throw DegenerateCombination("xi: homogeneous psi'(R) vanished");
        c = -raw.dpart[last] / raw.dhom[last];
    } else {
        if (raw.hom[last] == 0.0) throw DegenerateCombination("eta: homogeneous psi(R) vanished");
        c = -raw.part[last] / raw.hom[last];
    }

    RadialSolution sol;
    sol.problem = p;
    sol.m = raw.m;
    sol.n = raw.n;
    sol.r = raw.r;
    sol.log_scale = raw.log_scale;
    const std::size_t np = raw.r.size();
    sol.psi.resize(np);
    sol.dpsi.resize(np);
    for (std::size_t i = 0; i < np; ++i) {
        sol.psi[i] = raw.part[i] + c * raw.hom[i];
        sol.dpsi[i] = raw.dpart[i] + c * raw.dhom[i];
    }
    sol.psit = raw.hom;
    sol.dpsit = raw.dhom;

    const double combo_scale =
        (p == Problem::Xi)
            ? std::max(std::abs(raw.part[last]), std::abs(c * raw.hom[last]))
            : std::max(std::abs(raw.dpart[last]), std::abs(c * raw.dhom[last]));
    const double bval = (p == Problem::Xi) ? sol.psi[last] : sol.dpsi[last];
    if (std::abs(bval) < 1e-12 * combo_scale)
        throw DegenerateCombination(std::string(problem_name(p)) + ": shooting combination collapsed at R");
    return sol;
}

inline double eigenvalue_once(Problem p, const Geometry& geom, int m, ShootingConfig cfg,
                              RadialSolution* keep_solution) {
    cfg.certify_eps = false;
    switch (p) {
        case Problem::Sigma: {
            RadialSolution sol = integrate_homogeneous(geom, m, cfg);
            const std::size_t last = sol.r.size() - 1;
            const double v = sol.dpsi[last] / sol.psi[last];
            if (keep_solution) *keep_solution = std::move(sol);
            return v;
        }
        case Problem::Xi: {
            RadialSolution sol = combine_fourth_order(Problem::Xi, integrate_fourth_order(geom, m, cfg));
            const std::size_t last = sol.r.size() - 1;
            const double v = -sol.dpsit[last] / sol.psi[last];
            if (keep_solution) *keep_solution = std::move(sol);
            return v;
        }
        case Problem::Eta: {
            RadialSolution sol = combine_fourth_order(Problem::Eta, integrate_fourth_order(geom, m, cfg));
            const std::size_t last = sol.r.size() - 1;
            const double v = sol.psit[last] / sol.dpsi[last];
            if (keep_solution) *keep_solution = std::move(sol);
            return v;
        }
    }
    throw Error("unreachable problem kind");
}

}  // namespace detail

// Relative eigenvalue change when the seeding radius is halved; certifies the
// leading-order Frobenius seed for the given configuration.
inline double eps_convergence_check(const Geometry& geom, Problem p, int m,
                                    const ShootingConfig& cfg = {}) {
    if (m == 0) return 0.0;
    ShootingConfig half = cfg;
    half.eps_origin = 0.5 * cfg.resolved_eps(geom.R);
    const double v1 = detail::eigenvalue_once(p, geom, m, cfg, nullptr);
    const double v2 = detail::eigenvalue_once(p, geom, m, half, nullptr);
    return std::abs(v1 - v2) / std::max({std::abs(v1), std::abs(v2), 1e-300});
}

struct SolveOutput {
    EigenResult result;
    RadialSolution solution;
};

// Eigenvalue plus the radial profile it came from; m = 0 cases are filled
// from their closed descriptions (constant eigenfunction, or the quadrature
// profile for eta_0).
inline SolveOutput solve_with_solution(Problem p, const Geometry& geom, int m,
                                       const ShootingConfig& cfg = {}) {
    if (m < 0) throw Error("solve: need m >= 0");
    SolveOutput out;
    out.result.problem = p;
    out.result.m = m;
    out.result.multiplicity = multiplicity(m, geom.n);
    out.result.diag.eps_used = cfg.resolved_eps(geom.R);

    if (m == 0) {
        if (p == Problem::Eta) {
            out.solution = detail::eta0_solution(geom, cfg);
            const std::size_t last = out.solution.r.size() - 1;
            out.result.value = 1.0 / out.solution.dpsi[last];
        } else {
            out.solution = detail::constant_solution(p, geom, cfg);
            out.result.value = 0.0;
        }
        return out;
    }

    out.result.value = detail::eigenvalue_once(p, geom, m, cfg, &out.solution);
    out.result.diag.residual = max_ode_residual(geom, out.solution);
    if (cfg.certify_eps) out.result.diag.eps_delta = eps_convergence_check(geom, p, m, cfg);
    return out;
}

inline EigenResult sigma_eigenvalue(const Geometry& geom, int m, const ShootingConfig& cfg = {}) {
    return solve_with_solution(Problem::Sigma, geom, m, cfg).result;
}

inline EigenResult xi_eigenvalue(const Geometry& geom, int m, const ShootingConfig& cfg = {}) {
    return solve_with_solution(Problem::Xi, geom, m, cfg).result;
}

inline EigenResult eta_eigenvalue(const Geometry& geom, int m, const ShootingConfig& cfg = {}) {
    return solve_with_solution(Problem::Eta, geom, m, cfg).result;
}

}  // namespace steklov
