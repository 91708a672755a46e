#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "steklov/errors.hpp"
#include "steklov/quadrature.hpp"

namespace steklov {

// ============================================================================
// Warping-function families
//
// The metric is g = dr^2 + h^2(r) g_S on [0,R) x S^{n-1}. Every family below
// is analytic with h(0)=0, h'(0)=1 and vanishing even derivatives at 0, so the
// metric closes up smoothly at the origin. Arbitrary sampled h tables are not
// accepted: the origin conditions involve all derivatives and cannot be
// validated from samples.
// ============================================================================

enum class WarpFamily { Euclidean, SphereCap, Hyperbolic, OddSeries };

struct WarpSpec {
    WarpFamily family = WarpFamily::Euclidean;
    double a = 1.0;               // curvature scale, SphereCap/Hyperbolic only
    std::vector<double> coeffs;   // c1,c3,c5,... for OddSeries (c1 must be 1)

    static WarpSpec euclidean() { return {}; }
    static WarpSpec sphere_cap(double a) { return {WarpFamily::SphereCap, a, {}}; }
    static WarpSpec hyperbolic(double a) { return {WarpFamily::Hyperbolic, a, {}}; }
    static WarpSpec odd_series(std::vector<double> c) {
        return {WarpFamily::OddSeries, 0.0, std::move(c)};
    }

    std::string to_config() const;
    static WarpSpec parse(std::string_view text);  // accepts config and CLI forms
};

namespace detail {

inline double parse_number(std::string_view s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last) throw InvalidWarp("bad number in warp spec: '" + std::string(s) + "'");
    return v;
}

inline std::string format_number(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

inline std::vector<double> parse_number_list(std::string_view s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string_view::npos) comma = s.size();
        out.push_back(parse_number(s.substr(pos, comma - pos)));
        pos = comma + 1;
        if (comma == s.size()) break;
    }
    return out;
}

}  // namespace detail

// Analytic evaluator for h, h', h'' on [0, R]. Values at r=R use the analytic
// extension; every theorem quantity is evaluated there.
class Warp {
public:
    Warp() = default;

    double h(double r) const {
        switch (spec_.family) {
            case WarpFamily::Euclidean: return r;
            case WarpFamily::SphereCap: return std::sin(spec_.a * r) / spec_.a;
            case WarpFamily::Hyperbolic: return std::sinh(spec_.a * r) / spec_.a;
            case WarpFamily::OddSeries: return series(r, 0);
        }
        return r;
    }
    double dh(double r) const {
        switch (spec_.family) {
            case WarpFamily::Euclidean: return 1.0;
            case WarpFamily::SphereCap: return std::cos(spec_.a * r);
            case WarpFamily::Hyperbolic: return std::cosh(spec_.a * r);
            case WarpFamily::OddSeries: return series(r, 1);
        }
        return 1.0;
    }
    double d2h(double r) const {
        switch (spec_.family) {
            case WarpFamily::Euclidean: return 0.0;
            case WarpFamily::SphereCap: return -spec_.a * std::sin(spec_.a * r);
            case WarpFamily::Hyperbolic: return spec_.a * std::sinh(spec_.a * r);
            case WarpFamily::OddSeries: return series(r, 2);
        }
        return 0.0;
    }

    const WarpSpec& spec() const { return spec_; }
    double radius() const { return R_; }

    // Max |h(r) - r| over the validation grid; used for rigidity detection.
    double max_dev_from_euclidean() const { return max_dev_euclid_; }

private:
    friend Warp make_warp(const WarpSpec&, double);

    double series(double r, int deriv) const {
        // h = sum_k c_k r^{2k+1}, Horner in r^2 (k indexes c1,c3,c5,...)
        const double r2 = r * r;
        const auto& c = spec_.coeffs;
        double acc = 0.0;
        if (deriv == 0) {
            for (std::size_t i = c.size(); i-- > 0;) acc = acc * r2 + c[i];
            return acc * r;
        }
        if (deriv == 1) {
            for (std::size_t i = c.size(); i-- > 0;) acc = acc * r2 + c[i] * (2.0 * i + 1.0);
            return acc;
        }
        // h'' = r * sum_{k>=1} c_k (2k+1)(2k) r^{2(k-1)}
        for (std::size_t i = c.size(); i-- > 1;) acc = acc * r2 + c[i] * (2.0 * i + 1.0) * (2.0 * i);
        return acc * r;
    }

    WarpSpec spec_;
    double R_ = 1.0;
    double max_dev_euclid_ = 0.0;
};

inline Warp make_warp(const WarpSpec& spec, double R) {
    if (!(R > 0.0) || !std::isfinite(R)) throw InvalidWarp("radius must be positive and finite");
    switch (spec.family) {
        case WarpFamily::Euclidean:
            break;
        case WarpFamily::SphereCap:
            if (!(spec.a > 0.0)) throw InvalidWarp("sphere warp needs a > 0");
            if (!(spec.a * R < M_PI)) throw InvalidWarp("sphere warp needs a*R < pi");
            break;
        case WarpFamily::Hyperbolic:
            if (!(spec.a > 0.0)) throw InvalidWarp("sinh warp needs a > 0");
            break;
        case WarpFamily::OddSeries:
            if (spec.coeffs.empty()) throw InvalidWarp("series warp needs coefficients");
            if (std::abs(spec.coeffs.front() - 1.0) > 1e-15)
                throw InvalidWarp("series warp needs c1 = 1");
            break;
    }

    Warp w;
    w.spec_ = spec;
    w.R_ = R;

    // h must stay positive on (0,R]; 1000-point screen.
    double dev = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        const double r = R * static_cast<double>(i) / 1000.0;
        const double hr = w.h(r);
        if (!(hr > 0.0) || !std::isfinite(hr)) throw InvalidWarp("warp is nonpositive inside (0,R]");
        dev = std::max(dev, std::abs(hr - r));
    }
    w.max_dev_euclid_ = dev;
    return w;
}

// Full problem instance: dimension, radius, warp.
struct Geometry {
    int n = 2;
    double R = 1.0;
    Warp warp;

    static Geometry make(int n, double R, const WarpSpec& spec) {
        if (n < 2) throw Error("geometry needs dimension n >= 2");
        return {n, R, make_warp(spec, R)};
    }

    double h(double r) const { return warp.h(r); }
    double dh(double r) const { return warp.dh(r); }
    double d2h(double r) const { return warp.d2h(r); }

    // Umbilical principal curvature of the boundary slice.
    double kappa() const { return warp.dh(R) / warp.h(R); }
};

// ============================================================================
// Curvature diagnostics
// ============================================================================

enum class RicciSign { NonNegative, NonPositive, Indefinite, Zero };

struct RicciPair {
    double radial;      // -(n-1) h''/h
    double tangential;  // -(h''/h - (n-2)(1-h'^2)/h^2); equals radial for n=2
};

inline RicciPair ricci_eigenvalues(const Geometry& g, double r) {
    if (!(r > 0.0) || r > g.R) throw Error("ricci_eigenvalues: r outside (0,R]");
    const double h = g.h(r), hp = g.dh(r), hpp = g.d2h(r);
    const double radial = -static_cast<double>(g.n - 1) * hpp / h;
    if (g.n == 2) return {radial, radial};
    const double tangential = -(hpp / h - static_cast<double>(g.n - 2) * (1.0 - hp * hp) / (h * h));
    return {radial, tangential};
}

struct CurvatureReport {
    double ric_radial_min = 0.0, ric_radial_max = 0.0;
    double ric_tangential_min = 0.0, ric_tangential_max = 0.0;
    RicciSign ric_sign = RicciSign::Zero;
    bool boundary_convex = false;  // h'(R) > 0
    bool lemma23_holds = false;    // h'' <= 0 and 0 < h' <= 1 on the grid
    double kappa = 0.0;            // h'(R)/h(R)
    int grid_points = 0;
    double sign_tol = 0.0;
};

// Grid-based sign classification; no symbolic decision. Grid density and
// tolerance are reported so borderline cases stay visible.
inline CurvatureReport curvature_classify(const Geometry& g, int grid_points = 1000) {
    if (grid_points < 100) throw Error("curvature_classify: need at least 100 grid points");

    CurvatureReport rep;
    rep.grid_points = grid_points;
    rep.kappa = g.kappa();
    rep.boundary_convex = g.dh(g.R) > 0.0;

    double vmax = 0.0;
    std::vector<double> rad(grid_points), tan(grid_points);
    bool lemma = true;
    for (int i = 1; i <= grid_points; ++i) {
        const double r = g.R * static_cast<double>(i) / grid_points;
        const RicciPair p = ricci_eigenvalues(g, r);
        rad[i - 1] = p.radial;
        tan[i - 1] = p.tangential;
        vmax = std::max({vmax, std::abs(p.radial), std::abs(p.tangential)});
        const double hp = g.dh(r);
        if (g.d2h(r) > 1e-12 || !(hp > 0.0) || hp > 1.0 + 1e-12) lemma = false;
    }
    rep.lemma23_holds = lemma;

    const auto [rmin, rmax] = std::minmax_element(rad.begin(), rad.end());
    const auto [tmin, tmax] = std::minmax_element(tan.begin(), tan.end());
    rep.ric_radial_min = *rmin;
    rep.ric_radial_max = *rmax;
    rep.ric_tangential_min = *tmin;
    rep.ric_tangential_max = *tmax;

    const double tol = 1e-12 * std::max(1.0, vmax);
    rep.sign_tol = tol;
    const double lo = std::min(*rmin, *tmin);
    const double hi = std::max(*rmax, *tmax);
    if (lo >= -tol && hi <= tol) rep.ric_sign = RicciSign::Zero;
    else if (lo >= -tol) rep.ric_sign = RicciSign::NonNegative;
    else if (hi <= tol) rep.ric_sign = RicciSign::NonPositive;
    else rep.ric_sign = RicciSign::Indefinite;
    return rep;
}

// s(r) = int_{R/2}^r h^{1-n}(t) dt, the flattening coordinate. Strictly
// increasing; s(R/2) = 0 exactly.
inline double s_coordinate(const Geometry& g, double r) {
    if (!(r > 0.0) || r > g.R) throw Error("s_coordinate: r outside (0,R]");
    const double base = 0.5 * g.R;
    if (r == base) return 0.0;
    const int n = g.n;
    auto f = [&](double t) { return std::pow(g.h(t), 1.0 - static_cast<double>(n)); };
    return integrate_adaptive(f, base, r, 1e-12, 0.0, 8000).value;
}

// ============================================================================
// Spec serialization
//
// Config form: "family=euclidean", "family=sphere a=1.0",
//              "family=series coeffs=1,-0.1,0.002"
// CLI form:    "euclidean", "sphere:1.0", "sinh:0.5", "series:1,-0.1"
// ============================================================================

inline std::string WarpSpec::to_config() const {
    switch (family) {
        case WarpFamily::Euclidean: return "family=euclidean";
        case WarpFamily::SphereCap: return "family=sphere a=" + detail::format_number(a);
        case WarpFamily::Hyperbolic: return "family=sinh a=" + detail::format_number(a);
        case WarpFamily::OddSeries: {
            std::string s = "family=series coeffs=";
            for (std::size_t i = 0; i < coeffs.size(); ++i) {
                if (i) s += ',';
                s += detail::format_number(coeffs[i]);
            }
            return s;
        }
    }
    return "family=euclidean";
}

inline WarpSpec WarpSpec::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text.empty()) throw InvalidWarp("empty warp spec");

    std::string family;
    std::string arg;

    if (text.find('=') != std::string_view::npos) {
        // key-value config form
        std::string_view rest = text;
        std::string coeffs_str;
        double a_val = 0.0;
        bool have_a = false;
        while (!rest.empty()) {
            std::size_t sp = rest.find(' ');
            std::string_view token = trim(rest.substr(0, sp));
            rest = (sp == std::string_view::npos) ? std::string_view{} : trim(rest.substr(sp + 1));
            if (token.empty()) continue;
            std::size_t eq = token.find('=');
            if (eq == std::string_view::npos) throw InvalidWarp("expected key=value in warp spec");
            std::string_view key = token.substr(0, eq), val = token.substr(eq + 1);
            if (key == "family") family = std::string(val);
            else if (key == "a") { a_val = detail::parse_number(val); have_a = true; }
            else if (key == "coeffs") coeffs_str = std::string(val);
            else throw InvalidWarp("unknown warp spec key: '" + std::string(key) + "'");
        }
        if (family == "euclidean") return euclidean();
        if (family == "sphere" || family == "sinh") {
            if (!have_a) throw InvalidWarp("warp family '" + family + "' needs a=<value>");
            return family == "sphere" ? sphere_cap(a_val) : hyperbolic(a_val);
        }
        if (family == "series") {
            if (coeffs_str.empty()) throw InvalidWarp("series warp needs coeffs=<c1,c3,...>");
            return odd_series(detail::parse_number_list(coeffs_str));
        }
        throw InvalidWarp("unknown warp family: '" + family + "'");
    }

    // CLI short form
    std::size_t colon = text.find(':');
    family = std::string(text.substr(0, colon));
    if (colon != std::string_view::npos) arg = std::string(text.substr(colon + 1));

    if (family == "euclidean") {
        if (!arg.empty()) throw InvalidWarp("euclidean warp takes no parameter");
        return euclidean();
    }
    if (family == "sphere" || family == "sinh") {
        if (arg.empty()) throw InvalidWarp("warp '" + family + "' needs a parameter, e.g. '" + family + ":1.0'");
        return family == "sphere" ? sphere_cap(detail::parse_number(arg)) : hyperbolic(detail::parse_number(arg));
    }
    if (family == "series") {
        if (arg.empty()) throw InvalidWarp("series warp needs coefficients, e.g. 'series:1,-0.1'");
        return odd_series(detail::parse_number_list(arg));
    }
    throw InvalidWarp("unknown warp family: '" + family + "'");
}

}  // namespace steklov
