// Library tour: build a warped ball, classify its curvature, compute the
// three boundary spectra, and check every applicable bound plus the
// integrated Bochner identity.
//
//   ./warped_ball_report [warp] [n] [R] [m_max]
//   ./warped_ball_report sphere:0.9 3 1.0 4

#include <cstdio>
#include <cstdlib>
#include <string>

#include "steklov/steklov.hpp"

using namespace steklov;

int main(int argc, char** argv) {
    const std::string warp = argc > 1 ? argv[1] : "sphere:0.9";
    const int n = argc > 2 ? std::atoi(argv[2]) : 3;
    const double R = argc > 3 ? std::atof(argv[3]) : 1.0;
    const int m_max = argc > 4 ? std::atoi(argv[4]) : 4;

    const Geometry g = Geometry::make(n, R, WarpSpec::parse(warp));
    const CurvatureReport curv = curvature_classify(g);

    std::printf("warped ball: %s, n=%d, R=%g\n", g.warp.spec().to_config().c_str(), n, R);
    std::printf("  kappa = h'(R)/h(R) = %.8g, boundary convex: %s\n", curv.kappa,
                curv.boundary_convex ? "yes" : "no");
    std::printf("  Ricci eigenvalue ranges: radial [%.4g, %.4g], tangential [%.4g, %.4g]\n",
                curv.ric_radial_min, curv.ric_radial_max, curv.ric_tangential_min,
                curv.ric_tangential_max);

    ShootingConfig cfg;
    cfg.certify_eps = false;

    for (Problem p : {Problem::Sigma, Problem::Xi, Problem::Eta}) {
        const SpectrumTable table = assemble_spectrum(p, g, m_max, cfg);
        std::printf("\n%s spectrum%s\n", problem_name(p),
                    table.ordering_certified ? "" : "  (per-degree values; order uncertified)");
        for (const auto& row : table.rows) {
            const BoundReport rep = verify(p, g, row.m, cfg, &curv);
            if (rep.bound_kind == BoundKind::None)
                std::printf("  m=%d  value %-14.8g x%-3lld  [no bound: %s]\n", row.m,
                            row.eigenvalue, row.multiplicity, rep.applicability.c_str());
            else
                std::printf("  m=%d  value %-14.8g x%-3lld  %s %s bound %-12.8g -> %s\n", row.m,
                            row.eigenvalue, row.multiplicity, rep.theorem_tag.c_str(),
                            bound_kind_name(rep.bound_kind), rep.bound_value,
                            verdict_name(rep.verdict));
        }
    }

    std::printf("\nintegrated Bochner identity (m = 1):\n");
    for (Problem p : {Problem::Sigma, Problem::Xi, Problem::Eta}) {
        const SolveOutput out = solve_with_solution(p, g, 1, cfg);
        const reilly::Breakdown b = reilly::reilly_residual(g, p, 1, out.solution);
        std::printf("  %-6s lap=%-12.6g hess=%-12.6g ric=%-12.6g bdry=%-12.6g residual=%.2e\n",
                    problem_name(p), b.lap_sq, b.hess_sq, b.ric_term, b.boundary_term, b.residual);
    }
    return 0;
}
