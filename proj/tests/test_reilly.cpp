#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "steklov/radial.hpp"
#include "steklov/reilly.hpp"

using namespace steklov;

namespace {

Geometry flat(int n, double R) { return Geometry::make(n, R, WarpSpec::euclidean()); }

// Independent reference for int |Hess phi|^2 on the flat disk: sample
// phi(r,theta) = psi(r) cos(k theta)/sqrt(pi), difference the polar Hessian
// components, midpoint-quadrate over the disk. Differencing steps are fixed
// and small; midpoint in r plus periodic trapezoid in theta keeps the
// quadrature error below the differencing error.
double fd_polar_hessian_sq(const std::function<double(double)>& psi, int k, double R) {
    const auto phi = [&](double r, double t) { return psi(r) * std::cos(k * t) / std::sqrt(M_PI); };
    const double dr = 1e-4, dt = 1e-4;
    const int Nr = 2400, Nt = 64;  // midpoint-in-r error ~ h^2 int g'' stays below 1e-6 relative
    double total = 0.0;
    for (int i = 0; i < Nr; ++i) {
        const double r = (i + 0.5) * R / Nr;
        for (int j = 0; j < Nt; ++j) {
            const double t = 2.0 * M_PI * j / Nt;
            const double f_rr = (phi(r + dr, t) - 2.0 * phi(r, t) + phi(r - dr, t)) / (dr * dr);
            const double f_r = (phi(r + dr, t) - phi(r - dr, t)) / (2.0 * dr);
            const double f_t = (phi(r, t + dt) - phi(r, t - dt)) / (2.0 * dt);
            const double f_tt = (phi(r, t + dt) - 2.0 * phi(r, t) + phi(r, t - dt)) / (dt * dt);
            const double f_rt = (phi(r + dr, t + dt) - phi(r + dr, t - dt) - phi(r - dr, t + dt) +
                                 phi(r - dr, t - dt)) /
                                (4.0 * dr * dt);
            const double mixed = f_rt / r - f_t / (r * r);
            const double tang = f_tt / (r * r) + f_r / r;
            total += (f_rr * f_rr + 2.0 * mixed * mixed + tang * tang) * r;
        }
    }
    return total * (R / Nr) * (2.0 * M_PI / Nt);
}

// Uniform-grid profile with analytically consistent auxiliary pt = L psi.
RadialSolution synthetic_solution(const Geometry& g, int m, int points,
                                  const std::function<double(double)>& psi,
                                  const std::function<double(double)>& dpsi,
                                  const std::function<double(double)>& pt,
                                  const std::function<double(double)>& dpt) {
    RadialSolution sol;
    sol.m = m;
    sol.n = g.n;
    const double eps = 1e-6 * g.R;
    for (int i = 0; i < points; ++i) {
        const double r = eps + (g.R - eps) * i / (points - 1);
        sol.r.push_back(r);
        sol.psi.push_back(psi(r));
        sol.dpsi.push_back(dpsi(r));
        sol.psit.push_back(pt(r));
        sol.dpsit.push_back(dpt(r));
    }
    return sol;
}

}  // namespace

TEST_CASE("hessian integral: vanishing cases") {
    // linear flat profile has zero Hessian
    const SolveOutput lin = solve_with_solution(Problem::Sigma, flat(3, 1.0), 1);
    CHECK(std::abs(reilly::hessian_sq_integral(flat(3, 1.0), 1, lin.solution)) < 1e-8);

    // constant eigenfunction: every term vanishes
    const SolveOutput cst = solve_with_solution(Problem::Sigma, flat(4, 1.0), 0);
    CHECK(reilly::hessian_sq_integral(flat(4, 1.0), 0, cst.solution) == 0.0);
}

TEST_CASE("hessian integral matches the polar finite-difference reference") {
    const Geometry g = flat(2, 1.0);

    // psi = r^2, degree-2 harmonic factor: |Hess|^2 integrates to 8
    const double ref2 = fd_polar_hessian_sq([](double r) { return r * r; }, 2, 1.0);
    CHECK(ref2 == doctest::Approx(8.0).epsilon(1e-6));
    const RadialSolution sol2 = integrate_homogeneous(g, 2);
    CHECK(reilly::hessian_sq_integral(g, 2, sol2) == doctest::Approx(ref2).epsilon(1e-6));

    // psi = r^4 with pt = L psi = 12 r^2: integrand 216 r^5, integral 36
    const RadialSolution sol4 = synthetic_solution(
        g, 2, 1025, [](double r) { return r * r * r * r; }, [](double r) { return 4.0 * r * r * r; },
        [](double r) { return 12.0 * r * r; }, [](double r) { return 24.0 * r; });
    const double ref4 = fd_polar_hessian_sq([](double r) { return r * r * r * r; }, 2, 1.0);
    CHECK(ref4 == doctest::Approx(36.0).epsilon(1e-6));
    CHECK(reilly::hessian_sq_integral(g, 2, sol4) == doctest::Approx(36.0).epsilon(1e-9));
}

TEST_CASE("laplacian integral") {
    // harmonic sigma profile: exactly zero
    const SolveOutput lin = solve_with_solution(Problem::Sigma, flat(3, 1.0), 1);
    CHECK(reilly::laplacian_sq_integral(flat(3, 1.0), 1, lin.solution) == 0.0);

    // flat n=3 xi at m=1: pt = r (Frobenius scale), int r^2 r^2 = R^5/5
    const SolveOutput xi = solve_with_solution(Problem::Xi, flat(3, 1.0), 1);
    CHECK(reilly::laplacian_sq_integral(flat(3, 1.0), 1, xi.solution) ==
          doctest::Approx(0.2).epsilon(1e-8));

    // equals int pt^2 h^{n-1} by construction
    double direct = 0.0;
    {
        std::vector<double> y(xi.solution.r.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = xi.solution.psit[i] * xi.solution.psit[i] *
                   std::pow(flat(3, 1.0).h(xi.solution.r[i]), 2);
        direct = simpson_uniform(y, xi.solution.r[1] - xi.solution.r[0]);
    }
    CHECK(reilly::laplacian_sq_integral(flat(3, 1.0), 1, xi.solution) ==
          doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("ricci integral signs") {
    const SolveOutput f = solve_with_solution(Problem::Sigma, flat(4, 1.0), 2);
    CHECK(reilly::ricci_integral(flat(4, 1.0), 2, f.solution) == 0.0);

    const Geometry cap = Geometry::make(3, 1.0, WarpSpec::sphere_cap(1.0));
    const SolveOutput c = solve_with_solution(Problem::Sigma, cap, 1);
    const double vc = reilly::ricci_integral(cap, 1, c.solution);
    CHECK(vc >= -1e-10 * std::abs(vc));
    CHECK(vc > 0.0);

    const Geometry hyp = Geometry::make(3, 1.0, WarpSpec::hyperbolic(1.0));
    const SolveOutput h = solve_with_solution(Problem::Sigma, hyp, 1);
    CHECK(reilly::ricci_integral(hyp, 1, h.solution) <= 0.0);
}

TEST_CASE("frozen flat breakdowns pin the boundary assembly") {
    // sigma, n=3, m=2, psi = r^2: hess = 10, boundary = -10, lap = ric = 0
    const Geometry g3 = flat(3, 1.0);
    const SolveOutput s2 = solve_with_solution(Problem::Sigma, g3, 2);
    const reilly::Breakdown bs = reilly::reilly_residual(g3, Problem::Sigma, 2, s2.solution);
    CHECK(bs.hess_sq == doctest::Approx(10.0).epsilon(1e-7));
    CHECK(bs.boundary_term == doctest::Approx(-10.0).epsilon(1e-7));
    CHECK(std::abs(bs.lap_sq) < 1e-12);
    CHECK(bs.ric_term == 0.0);
    CHECK(std::abs(bs.residual) < 1e-6 * bs.scale);

    // xi, n=3, m=1: psi = (r^3 - 3r)/10, pt = r
    const SolveOutput x1 = solve_with_solution(Problem::Xi, g3, 1);
    const reilly::Breakdown bx = reilly::reilly_residual(g3, Problem::Xi, 1, x1.solution);
    CHECK(bx.lap_sq == doctest::Approx(0.2).epsilon(1e-7));
    CHECK(bx.hess_sq == doctest::Approx(0.12).epsilon(1e-7));
    CHECK(bx.boundary_term == doctest::Approx(0.08).epsilon(1e-7));
    CHECK(std::abs(bx.residual) < 1e-6 * bx.scale);

    // eta, n=3, m=1: psi = (r^3 - r)/10, pt = r
    const SolveOutput e1 = solve_with_solution(Problem::Eta, g3, 1);
    const reilly::Breakdown be = reilly::reilly_residual(g3, Problem::Eta, 1, e1.solution);
    CHECK(be.lap_sq == doctest::Approx(0.2).epsilon(1e-7));
    CHECK(be.hess_sq == doctest::Approx(0.12).epsilon(1e-7));
    CHECK(be.boundary_term == doctest::Approx(0.08).epsilon(1e-7));
    CHECK(std::abs(be.residual) < 1e-6 * be.scale);

    // m = 0 sigma: all four terms vanish
    const SolveOutput s0 = solve_with_solution(Problem::Sigma, g3, 0);
    const reilly::Breakdown b0 = reilly::reilly_residual(g3, Problem::Sigma, 0, s0.solution);
    CHECK(b0.hess_sq == 0.0);
    CHECK(b0.lap_sq == 0.0);
    CHECK(b0.ric_term == 0.0);
    CHECK(b0.boundary_term == 0.0);
}

TEST_CASE("reilly identity holds across problems, families, dimensions") {
    const std::vector<WarpSpec> specs = {WarpSpec::euclidean(), WarpSpec::sphere_cap(1.0),
                                         WarpSpec::hyperbolic(1.0)};
    ShootingConfig cfg;
    cfg.certify_eps = false;
    for (const auto& spec : specs) {
        for (int n : {2, 4}) {
            const Geometry g = Geometry::make(n, 1.0, spec);
            for (Problem p : {Problem::Sigma, Problem::Xi, Problem::Eta}) {
                for (int m : {0, 1, 3}) {
                    const SolveOutput out = solve_with_solution(p, g, m, cfg);
                    const reilly::Breakdown b = reilly::reilly_residual(g, p, m, out.solution);
                    CHECK(std::abs(b.residual) <= 1e-6 * std::max(b.scale, 1e-30));
                }
            }
        }
    }

    // spot check from the curved fourth-order family
    const Geometry cap4 = Geometry::make(4, 1.0, WarpSpec::sphere_cap(1.0));
    const SolveOutput out = solve_with_solution(Problem::Xi, cap4, 2);
    const reilly::Breakdown b = reilly::reilly_residual(cap4, Problem::Xi, 2, out.solution);
    CHECK(std::abs(b.residual) < 1e-6 * std::max({std::abs(b.lap_sq), std::abs(b.boundary_term)}));
}

TEST_CASE("pointwise Cauchy-Schwarz survives integration") {
    // |Hess phi|^2 >= (Lap phi)^2 / n
    for (const auto& spec : {WarpSpec::sphere_cap(1.0), WarpSpec::hyperbolic(0.5)}) {
        for (int n : {2, 3, 5}) {
            const Geometry g = Geometry::make(n, 1.0, spec);
            for (Problem p : {Problem::Xi, Problem::Eta}) {
                const SolveOutput out = solve_with_solution(p, g, 2);
                const double hess = reilly::hessian_sq_integral(g, 2, out.solution);
                const double lap = reilly::laplacian_sq_integral(g, 2, out.solution);
                CHECK(hess >= lap / n - 1e-10 * std::abs(hess));
            }
        }
    }
}

TEST_CASE("rayleigh quotients agree with shooting eigenvalues") {
    ShootingConfig cfg;
    cfg.certify_eps = false;
    CHECK(reilly::rayleigh_quotient(flat(3, 1.0), Problem::Sigma, 1,
                                    solve_with_solution(Problem::Sigma, flat(3, 1.0), 1, cfg).solution) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(reilly::rayleigh_quotient(flat(2, 1.0), Problem::Xi, 1,
                                    solve_with_solution(Problem::Xi, flat(2, 1.0), 1, cfg).solution) ==
          doctest::Approx(4.0).epsilon(1e-8));
    CHECK(reilly::rayleigh_quotient(flat(4, 1.0), Problem::Eta, 1,
                                    solve_with_solution(Problem::Eta, flat(4, 1.0), 1, cfg).solution) ==
          doctest::Approx(6.0).epsilon(1e-8));

    for (const auto& spec : {WarpSpec::sphere_cap(1.0), WarpSpec::hyperbolic(1.0)}) {
        for (int n : {2, 3}) {
            const Geometry g = Geometry::make(n, 1.0, spec);
            for (Problem p : {Problem::Sigma, Problem::Xi, Problem::Eta}) {
                for (int m : {1, 2}) {
                    const SolveOutput out = solve_with_solution(p, g, m, cfg);
                    const double ray = reilly::rayleigh_quotient(g, p, m, out.solution);
                    CHECK(std::abs(ray - out.result.value) <= 1e-6 * std::abs(out.result.value));
                }
            }
        }
    }
}

TEST_CASE("a coarse wiggly grid is rejected") {
    const Geometry g = flat(2, 1.0);
    RadialSolution sol;
    sol.m = 1;
    sol.n = 2;
    for (int i = 0; i <= 8; ++i) {
        const double r = 0.1 + 0.9 * i / 8.0;
        sol.r.push_back(r);
        sol.psi.push_back(std::sin(40.0 * r));
        sol.dpsi.push_back(40.0 * std::cos(40.0 * r));
    }
    CHECK_THROWS_AS(reilly::hessian_sq_integral(g, 1, sol), GridTooCoarse);
}
