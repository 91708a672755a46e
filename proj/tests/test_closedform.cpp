#include <doctest.h>

#include <cmath>

#include "steklov/closedform.hpp"
#include "steklov/radial.hpp"

using namespace steklov;

TEST_CASE("euclidean ball spectra are exact arithmetic") {
    CHECK(closedform::euclid_sigma(3, 1.0, 2) == 2.0);
    CHECK(closedform::euclid_sigma(5, 2.0, 4) == 2.0);
    CHECK(closedform::euclid_xi(2, 1.0, 1) == 4.0);
    CHECK(closedform::euclid_xi(3, 1.0, 1) == 5.0);
    CHECK(closedform::euclid_xi(2, 2.0, 2) == 3.0);
    CHECK(closedform::euclid_eta(4, 2.0, 1) == 3.0);
    CHECK(closedform::euclid_eta(2, 0.5, 0) == 4.0);
}

TEST_CASE("sigma closed form for n = 2") {
    const Geometry flat2 = Geometry::make(2, 1.0, WarpSpec::euclidean());
    CHECK(closedform::sigma_n2(flat2, 3) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(closedform::sigma_n2(flat2, 0) == 0.0);

    const Geometry cap = Geometry::make(2, M_PI / 2.0, WarpSpec::sphere_cap(1.0));
    CHECK(closedform::sigma_n2(cap, 1) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(closedform::sigma_n2(Geometry::make(3, 1.0, WarpSpec::euclidean()), 1), Error);
}

TEST_CASE("xi closed form for n = 2") {
    const Geometry flat2 = Geometry::make(2, 1.0, WarpSpec::euclidean());
    CHECK(closedform::xi_n2(flat2, 1) == doctest::Approx(4.0).epsilon(1e-11));
    // m=2: E = (2r)^4 unnormalized, int_0^1 16 r^5 = 8/3, xi = 4*16/(8/3) = 24
    CHECK(closedform::xi_n2(flat2, 2) == doctest::Approx(24.0).epsilon(1e-11));
}

TEST_CASE("eta closed form for n = 2 and the xi/eta identity") {
    const Geometry flat2 = Geometry::make(2, 1.0, WarpSpec::euclidean());
    CHECK(closedform::eta_n2(flat2, 1) == doctest::Approx(4.0).epsilon(1e-11));
    const Geometry flatR2 = Geometry::make(2, 2.0, WarpSpec::euclidean());
    CHECK(closedform::eta_n2(flatR2, 3) == doctest::Approx(4.0).epsilon(1e-11));

    // eta m^2 = xi h(R)^2
    for (const auto& spec : {WarpSpec::sphere_cap(0.8), WarpSpec::hyperbolic(1.0)}) {
        const Geometry g = Geometry::make(2, 1.0, spec);
        const double hR2 = g.h(g.R) * g.h(g.R);
        for (int m = 1; m <= 4; ++m) {
            CHECK(closedform::eta_n2(g, m) * m * m ==
                  doctest::Approx(closedform::xi_n2(g, m) * hR2).epsilon(1e-10));
        }
    }
}

TEST_CASE("eta0 closed form") {
    CHECK(closedform::eta0(Geometry::make(3, 1.0, WarpSpec::euclidean())) ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK(closedform::eta0(Geometry::make(2, 4.0, WarpSpec::euclidean())) ==
          doctest::Approx(0.5).epsilon(1e-12));
    // int_0^{pi/2} sin = 1, h(R) = 1
    CHECK(closedform::eta0(Geometry::make(2, M_PI / 2.0, WarpSpec::sphere_cap(1.0))) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle agreement with the shooting solver at n = 2") {
    ShootingConfig cfg;
    cfg.certify_eps = false;
    for (const auto& spec : {WarpSpec::sphere_cap(1.0), WarpSpec::hyperbolic(0.5)}) {
        const Geometry g = Geometry::make(2, 1.0, spec);
        for (int m = 1; m <= 3; ++m) {
            const double rel = 1e-7;
            CHECK(sigma_eigenvalue(g, m, cfg).value ==
                  doctest::Approx(closedform::sigma_n2(g, m)).epsilon(rel));
            CHECK(xi_eigenvalue(g, m, cfg).value ==
                  doctest::Approx(closedform::xi_n2(g, m)).epsilon(rel));
            CHECK(eta_eigenvalue(g, m, cfg).value ==
                  doctest::Approx(closedform::eta_n2(g, m)).epsilon(rel));
        }
    }
}

TEST_CASE("G function vanishes identically on the flat disk") {
    const Geometry flat2 = Geometry::make(2, 1.0, WarpSpec::euclidean());
    const double scale = flat2.h(1.0) * flat2.h(1.0) / flat2.dh(1.0);
    for (double r : {1e-6, 0.01, 0.3, 0.7, 1.0})
        CHECK(std::abs(closedform::g_function(flat2, 1, r)) < 1e-12 * scale);
    for (int m = 1; m <= 6; ++m) CHECK(std::abs(closedform::g_min(flat2, m)) < 1e-10 * scale);
}

TEST_CASE("G stays nonnegative under nonnegative curvature") {
    CHECK(closedform::g_min(Geometry::make(2, 1.0, WarpSpec::sphere_cap(1.0)), 2) >= -1e-12);
    for (const auto& spec :
         {WarpSpec::sphere_cap(0.5), WarpSpec::sphere_cap(1.0), WarpSpec::odd_series({1.0, -0.1})}) {
        const Geometry g = Geometry::make(2, 1.0, spec);
        const double scale = g.h(g.R) * g.h(g.R) / g.dh(g.R);
        for (int m = 1; m <= 6; ++m) CHECK(closedform::g_min(g, m) >= -1e-10 * scale);
    }
}

TEST_CASE("G requires a strictly convex profile") {
    // aR = 2 keeps h > 0 but h'(R) = cos 2 < 0
    const Geometry wide = Geometry::make(2, 2.0, WarpSpec::sphere_cap(1.0));
    CHECK_THROWS_AS(closedform::g_min(wide, 1), ConvexityFailure);
    CHECK_THROWS_AS(closedform::g_function(wide, 1, 2.0), ConvexityFailure);
}
