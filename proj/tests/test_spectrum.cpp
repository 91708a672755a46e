#include <doctest.h>

#include <cmath>

#include "steklov/spectrum.hpp"

using namespace steklov;

namespace {

Geometry flat(int n, double R) { return Geometry::make(n, R, WarpSpec::euclidean()); }

ShootingConfig quiet() {
    ShootingConfig cfg;
    cfg.certify_eps = false;
    return cfg;
}

}  // namespace

TEST_CASE("bound case table") {
    const Geometry f3 = flat(3, 1.0);
    const auto b_sigma = theoretical_bound(Problem::Sigma, f3, 2);
    CHECK(b_sigma.kind == BoundKind::LowerRicNonneg);
    CHECK(b_sigma.value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(b_sigma.tag == "Thm1/(1.4)");

    // tau_1 = 3 at n = 4: (12+0)*3/(6+0) = 6, which the flat ball attains
    const Geometry f4 = flat(4, 1.0);
    const auto b_xi4 = theoretical_bound(Problem::Xi, f4, 1);
    CHECK(b_xi4.kind == BoundKind::LowerRicNonneg);
    CHECK(b_xi4.value == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(b_xi4.tag == "Thm2/(bound4)");

    // open case
    const auto b_open = theoretical_bound(Problem::Xi, f3, 1);
    CHECK(b_open.kind == BoundKind::None);
    const auto b_open_eta = theoretical_bound(Problem::Eta, f3, 1);
    CHECK(b_open_eta.kind == BoundKind::None);

    // n = 3, m = 2: (4*6-13)*6/(2*6-6) = 11
    const auto b_xi3 = theoretical_bound(Problem::Xi, f3, 2);
    CHECK(b_xi3.value == doctest::Approx(11.0).epsilon(1e-14));
    CHECK(b_xi3.tag == "Thm2/(bound3)");
    // eta counterpart: (4*6-13)/(6-3) = 11/3
    const auto b_eta3 = theoretical_bound(Problem::Eta, f3, 2);
    CHECK(b_eta3.value == doctest::Approx(11.0 / 3.0).epsilon(1e-14));
    CHECK(b_eta3.tag == "Thm3/(bound6)");

    // first eta eigenvalue bound applies in every dimension
    const auto b_eta0 = theoretical_bound(Problem::Eta, f3, 0);
    CHECK(b_eta0.kind == BoundKind::LowerRicNonneg);
    CHECK(b_eta0.value == doctest::Approx(3.0).epsilon(1e-14));

    // Ric <= 0 flips sigma and covers only n = 2 for the fourth-order problems
    const Geometry hyp2 = Geometry::make(2, 1.0, WarpSpec::hyperbolic(1.0));
    const Geometry hyp3 = Geometry::make(3, 1.0, WarpSpec::hyperbolic(1.0));
    CHECK(theoretical_bound(Problem::Sigma, hyp3, 2).kind == BoundKind::UpperRicNonpos);
    CHECK(theoretical_bound(Problem::Xi, hyp2, 1).kind == BoundKind::UpperRicNonpos);
    CHECK(theoretical_bound(Problem::Xi, hyp3, 1).kind == BoundKind::None);
    CHECK(theoretical_bound(Problem::Eta, hyp2, 0).kind == BoundKind::UpperRicNonpos);
    CHECK(theoretical_bound(Problem::Eta, hyp3, 1).kind == BoundKind::None);

    // indefinite curvature: nothing is predicted
    const Geometry mixed = Geometry::make(2, 1.0, WarpSpec::odd_series({1.0, 0.05, -0.05}));
    const CurvatureReport rep = curvature_classify(mixed);
    REQUIRE(rep.ric_sign == RicciSign::Indefinite);
    CHECK(theoretical_bound(Problem::Sigma, mixed, 1).kind == BoundKind::None);
}

TEST_CASE("verify: curved lower bound holds with a visible margin") {
    const Geometry cap = Geometry::make(2, 1.0, WarpSpec::sphere_cap(1.0));
    const BoundReport rep = verify(Problem::Sigma, cap, 1, quiet());
    CHECK(rep.eigenvalue == doctest::Approx(1.0 / std::sin(1.0)).epsilon(1e-9));
    CHECK(rep.bound_value == doctest::Approx(std::cos(1.0) / std::sin(1.0)).epsilon(1e-12));
    CHECK(rep.verdict == Verdict::Holds);
    CHECK(rep.margin > 1e-3 * rep.bound_value);
}

TEST_CASE("verify: flat equality cases fire exactly where stated") {
    // Thm 1: every m on the flat ball
    for (int n : {2, 3, 4, 5}) {
        for (int m = 0; m <= 6; ++m) {
            const BoundReport rep = verify(Problem::Sigma, flat(n, 1.0), m, quiet());
            CHECK(rep.verdict == Verdict::EqualityCase);
        }
    }
    // fourth order: n = 2 all m >= 1; n >= 4 only m = 1
    for (int m = 1; m <= 6; ++m) {
        CHECK(verify(Problem::Xi, flat(2, 1.0), m, quiet()).verdict == Verdict::EqualityCase);
        CHECK(verify(Problem::Eta, flat(2, 1.0), m, quiet()).verdict == Verdict::EqualityCase);
    }
    for (int n : {4, 5}) {
        CHECK(verify(Problem::Xi, flat(n, 1.0), 1, quiet()).verdict == Verdict::EqualityCase);
        CHECK(verify(Problem::Eta, flat(n, 1.0), 1, quiet()).verdict == Verdict::EqualityCase);
        for (int m = 2; m <= 4; ++m) {
            CHECK(verify(Problem::Xi, flat(n, 1.0), m, quiet()).verdict == Verdict::Holds);
            CHECK(verify(Problem::Eta, flat(n, 1.0), m, quiet()).verdict == Verdict::Holds);
        }
    }
    // n = 3, m >= 2: strict inequality on the flat ball
    CHECK(verify(Problem::Xi, flat(3, 1.0), 2, quiet()).verdict == Verdict::Holds);
    CHECK(verify(Problem::Eta, flat(3, 1.0), 2, quiet()).verdict == Verdict::Holds);
    // eta first eigenvalue: equality on the flat ball in every dimension
    for (int n : {2, 3, 5})
        CHECK(verify(Problem::Eta, flat(n, 1.0), 0, quiet()).verdict == Verdict::EqualityCase);
}

TEST_CASE("verify: equality never fires on genuinely curved caps") {
    const Geometry cap = Geometry::make(2, 1.0, WarpSpec::sphere_cap(1.0));
    for (Problem p : {Problem::Sigma, Problem::Xi, Problem::Eta}) {
        for (int m = 0; m <= 6; ++m) {
            const BoundReport rep = verify(p, cap, m, quiet());
            CHECK(rep.verdict != Verdict::EqualityCase);
            CHECK(rep.verdict != Verdict::ViolationSuspected);
            if (rep.bound_kind != BoundKind::None && !(p == Problem::Sigma && m == 0))
                CHECK(rep.margin > 1e-3 * rep.bound_value);
        }
    }
}

TEST_CASE("verify: Ric <= 0 upper bounds hold") {
    const Geometry hyp3 = Geometry::make(3, 1.0, WarpSpec::hyperbolic(1.0));
    const BoundReport rep = verify(Problem::Sigma, hyp3, 1, quiet());
    CHECK(rep.bound_kind == BoundKind::UpperRicNonpos);
    CHECK(rep.verdict == Verdict::Holds);
    CHECK(rep.eigenvalue <= std::cosh(1.0) / std::sinh(1.0) + 1e-9);

    const Geometry hyp2 = Geometry::make(2, 1.0, WarpSpec::hyperbolic(0.5));
    for (int m = 0; m <= 4; ++m) {
        CHECK(verify(Problem::Sigma, hyp2, m, quiet()).verdict == Verdict::Holds);
        CHECK(verify(Problem::Eta, hyp2, m, quiet()).verdict == Verdict::Holds);
        if (m >= 1) CHECK(verify(Problem::Xi, hyp2, m, quiet()).verdict == Verdict::Holds);
    }
}

TEST_CASE("verify: indefinite curvature reports no verdict") {
    const Geometry mixed = Geometry::make(2, 1.0, WarpSpec::odd_series({1.0, 0.05, -0.05}));
    const BoundReport rep = verify(Problem::Sigma, mixed, 1, quiet());
    CHECK(rep.bound_kind == BoundKind::None);
    CHECK(rep.verdict == Verdict::NotApplicable);
    CHECK(rep.applicability.find("curvature") != std::string::npos);
}

TEST_CASE("assemble_spectrum: flat tables with multiplicity index ranges") {
    const SpectrumTable sig = assemble_spectrum(Problem::Sigma, flat(3, 1.0), 2, quiet());
    REQUIRE(sig.rows.size() == 3);
    CHECK(sig.ordering_certified);
    CHECK(sig.rows[0].eigenvalue == doctest::Approx(0.0));
    CHECK(sig.rows[0].multiplicity == 1);
    CHECK(sig.rows[0].index_from == 0);
    CHECK(sig.rows[0].index_to == 0);
    CHECK(sig.rows[1].eigenvalue == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sig.rows[1].multiplicity == 3);
    CHECK(sig.rows[1].index_from == 1);
    CHECK(sig.rows[1].index_to == 3);
    CHECK(sig.rows[2].eigenvalue == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(sig.rows[2].multiplicity == 5);
    CHECK(sig.rows[2].index_from == 4);
    CHECK(sig.rows[2].index_to == 8);

    const SpectrumTable eta = assemble_spectrum(Problem::Eta, flat(2, 1.0), 2, quiet());
    REQUIRE(eta.rows.size() == 3);
    CHECK(eta.rows[0].eigenvalue == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(eta.rows[1].eigenvalue == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(eta.rows[2].eigenvalue == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(eta.rows[0].multiplicity == 1);
    CHECK(eta.rows[1].multiplicity == 2);
    CHECK(eta.rows[2].multiplicity == 2);
}

TEST_CASE("assemble_spectrum: ordering certification") {
    const Geometry hyp2 = Geometry::make(2, 1.0, WarpSpec::hyperbolic(1.0));
    CHECK_FALSE(assemble_spectrum(Problem::Xi, hyp2, 2, quiet()).ordering_certified);
    CHECK(assemble_spectrum(Problem::Sigma, hyp2, 2, quiet()).ordering_certified);
    const Geometry cap2 = Geometry::make(2, 1.0, WarpSpec::sphere_cap(1.0));
    CHECK(assemble_spectrum(Problem::Xi, cap2, 2, quiet()).ordering_certified);
}

TEST_CASE("the m=1 fourth-order bound matches the conjectured curvature form") {
    // xi_(1) >= (n+2)/(n-1) kappa lambda_1 under Ric >= 0, n = 2 or n >= 4
    for (int n : {2, 4, 5}) {
        for (const auto& spec : {WarpSpec::sphere_cap(0.75), WarpSpec::odd_series({1.0, -0.08})}) {
            const Geometry g = Geometry::make(n, 1.0, spec);
            const double conj = (n + 2.0) / (n - 1.0) * g.kappa() * boundary_eigenvalue(g, 1);
            const auto bd = theoretical_bound(Problem::Xi, g, 1);
            REQUIRE(bd.kind == BoundKind::LowerRicNonneg);
            CHECK(bd.value == doctest::Approx(conj).epsilon(1e-12));
            CHECK(xi_eigenvalue(g, 1, quiet()).value >= conj - 1e-8);
        }
    }
}
