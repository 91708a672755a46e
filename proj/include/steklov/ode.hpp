#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include "steklov/errors.hpp"

namespace steklov {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;  // applied relative to the largest state component
    long max_steps = 1000000;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c2 = 1.0 / 5, dp_c3 = 3.0 / 10, dp_c4 = 4.0 / 5, dp_c5 = 8.0 / 9;
inline constexpr double dp_a21 = 1.0 / 5;
inline constexpr double dp_a31 = 3.0 / 40, dp_a32 = 9.0 / 40;
inline constexpr double dp_a41 = 44.0 / 45, dp_a42 = -56.0 / 15, dp_a43 = 32.0 / 9;
inline constexpr double dp_a51 = 19372.0 / 6561, dp_a52 = -25360.0 / 2187,
                        dp_a53 = 64448.0 / 6561, dp_a54 = -212.0 / 729;
inline constexpr double dp_a61 = 9017.0 / 3168, dp_a62 = -355.0 / 33, dp_a63 = 46732.0 / 5247,
                        dp_a64 = 49.0 / 176, dp_a65 = -5103.0 / 18656;
inline constexpr double dp_a71 = 35.0 / 384, dp_a73 = 500.0 / 1113, dp_a74 = 125.0 / 192,
                        dp_a75 = -2187.0 / 6784, dp_a76 = 11.0 / 84;
inline constexpr double dp_e1 = 71.0 / 57600, dp_e3 = -71.0 / 16695, dp_e4 = 71.0 / 1920,
                        dp_e5 = -17253.0 / 339200, dp_e6 = 22.0 / 525, dp_e7 = -1.0 / 40;

}  // namespace detail

inline constexpr std::size_t ode_max_dim = 8;

// Adaptive DP5(4) with PI step control, stepping exactly onto each point of
// `grid` (strictly increasing, grid[0] = start). The system must be LINEAR in
// y: whenever max|y| exceeds 1e100 the whole state is rescaled and the
// accumulated log-factor tracked, so trajectories spanning hundreds of orders
// of magnitude stay representable. on_grid(index, y, log_scale) fires at every
// grid point including the first. Returns the final log_scale.
template <class Rhs, class Obs>
double integrate_linear_to_grid(Rhs&& f, int dim, std::span<const double> grid,
                                std::span<double> y, const OdeOptions& opt, Obs&& on_grid) {
    using Vec = std::array<double, ode_max_dim>;
    if (dim < 1 || static_cast<std::size_t>(dim) > ode_max_dim) throw Error("ode: unsupported dimension");
    if (grid.size() < 2) throw Error("ode: grid needs at least two points");

    constexpr double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
    constexpr double facc1 = 5.0, facc2 = 0.1;  // max shrink 5x, max growth 10x
    constexpr double renorm_limit = 1e100;

    double r = grid[0];
    double log_scale = 0.0;
    double facold = 1e-4;

    Vec k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, yt{}, y5{};
    f(r, y.data(), k1.data());

    on_grid(std::size_t{0}, std::span<const double>(y.data(), dim), log_scale);

    double h = std::min(0.1 * std::abs(r) + 1e-300, grid[1] - grid[0]);
    if (!(h > 0.0)) h = (grid.back() - grid.front()) * 1e-9;

    long steps = 0;
    for (std::size_t idx = 1; idx < grid.size();) {
        const double target = grid[idx];
        bool clamped = false;
        double h_try = h;
        if (r + h_try >= target) {
            h_try = target - r;
            clamped = true;
        }
        if (!(h_try > std::abs(r) * 4.0 * std::numeric_limits<double>::epsilon()) && !clamped)
            throw StiffnessFailure("ode: step size underflow");
        if (++steps > opt.max_steps) throw StiffnessFailure("ode: step budget exceeded");

        using namespace detail;
        for (int i = 0; i < dim; ++i) yt[i] = y[i] + h_try * dp_a21 * k1[i];
        f(r + dp_c2 * h_try, yt.data(), k2.data());
        for (int i = 0; i < dim; ++i) yt[i] = y[i] + h_try * (dp_a31 * k1[i] + dp_a32 * k2[i]);
        f(r + dp_c3 * h_try, yt.data(), k3.data());
        for (int i = 0; i < dim; ++i)
            yt[i] = y[i] + h_try * (dp_a41 * k1[i] + dp_a42 * k2[i] + dp_a43 * k3[i]);
        f(r + dp_c4 * h_try, yt.data(), k4.data());
        for (int i = 0; i < dim; ++i)
            yt[i] = y[i] + h_try * (dp_a51 * k1[i] + dp_a52 * k2[i] + dp_a53 * k3[i] + dp_a54 * k4[i]);
        f(r + dp_c5 * h_try, yt.data(), k5.data());
        for (int i = 0; i < dim; ++i)
            yt[i] = y[i] + h_try * (dp_a61 * k1[i] + dp_a62 * k2[i] + dp_a63 * k3[i] +
                                    dp_a64 * k4[i] + dp_a65 * k5[i]);
        f(r + h_try, yt.data(), k6.data());
        for (int i = 0; i < dim; ++i)
            y5[i] = y[i] + h_try * (dp_a71 * k1[i] + dp_a73 * k3[i] + dp_a74 * k4[i] +
                                    dp_a75 * k5[i] + dp_a76 * k6[i]);
        f(r + h_try, y5.data(), k7.data());

        // Components span hundreds of orders of magnitude during the singular
        // launch; an absolute floor fixed in advance would let errors pile up
        // along the dominant mode. The floor therefore tracks the state scale.
        double smax = 1e-300;
        for (int i = 0; i < dim; ++i)
            smax = std::max({smax, std::abs(y[i]), std::abs(y5[i])});
        double err = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double e = h_try * (dp_e1 * k1[i] + dp_e3 * k3[i] + dp_e4 * k4[i] +
                                      dp_e5 * k5[i] + dp_e6 * k6[i] + dp_e7 * k7[i]);
            const double sc = opt.atol * smax + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / dim);

        const double fac11 = std::pow(std::max(err, 1e-32), expo1);
        if (err <= 1.0) {
            // accept
            const double fac = std::max(facc2, std::min(facc1, (fac11 / std::pow(facold, beta)) / safe));
            facold = std::max(err, 1e-4);
            r = clamped ? target : r + h_try;
            for (int i = 0; i < dim; ++i) y[i] = y5[i];
            for (int i = 0; i < dim; ++i) k1[i] = k7[i];  // FSAL

            double amax = 0.0;
            for (int i = 0; i < dim; ++i) amax = std::max(amax, std::abs(y[i]));
            if (amax > renorm_limit) {
                for (int i = 0; i < dim; ++i) {
                    y[i] /= amax;
                    k1[i] /= amax;
                }
                log_scale += std::log(amax);
            }

            if (clamped) {
                on_grid(idx, std::span<const double>(y.data(), dim), log_scale);
                ++idx;
            }
            h = h_try / fac;
        } else {
            h = h_try / std::min(facc1, fac11 / safe);
        }
    }
    return log_scale;
}

}  // namespace steklov
