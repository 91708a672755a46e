#pragma once

#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include "steklov/errors.hpp"

namespace steklov {

struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;
};

namespace detail {

// Gauss 7 / Kronrod 15 pair on [-1,1], positive half (node, gauss w, kronrod w).
inline constexpr double gk15_nodes[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

}  // namespace detail

template <class F>
QuadResult gauss_kronrod_15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double m = 0.5 * (b - a);

    const double y0 = f(c);
    double g7 = detail::gk15_nodes[0][1] * y0;
    double k15 = detail::gk15_nodes[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = m * detail::gk15_nodes[i][0];
        const double yi = f(c + dx) + f(c - dx);
        g7 += detail::gk15_nodes[i][1] * yi;
        k15 += detail::gk15_nodes[i][2] * yi;
    }
    g7 *= m;
    k15 *= m;
    return {k15, std::abs(k15 - g7)};
}

// Globally adaptive bisection: splits the interval with the largest error
// estimate until sum(err) <= max(abs_tol, rel_tol*|value|).
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                              double rel_tol = 0.0, int max_intervals = 4000) {
    if (a == b) return {0.0, 0.0};

    struct Interval {
        double a, b, value, err;
        bool operator<(const Interval& o) const { return err < o.err; }
    };

    std::priority_queue<Interval> queue;
    QuadResult whole = gauss_kronrod_15(f, a, b);
    queue.push({a, b, whole.value, whole.abs_err});
    double total = whole.value;
    double total_err = whole.abs_err;
    int n = 1;

    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (n >= max_intervals) throw QuadratureFailure("adaptive quadrature: interval budget exhausted");
        Interval worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at floating-point resolution; keep its estimate
            total_err -= worst.err;
            continue;
        }
        QuadResult left = gauss_kronrod_15(f, worst.a, mid);
        QuadResult right = gauss_kronrod_15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.abs_err + right.abs_err - worst.err;
        queue.push({worst.a, mid, left.value, left.abs_err});
        queue.push({mid, worst.b, right.value, right.abs_err});
        ++n;
    }
    return {total, total_err};
}

// Composite Simpson over sampled values on a uniform grid; y.size() odd.
inline double simpson_uniform(std::span<const double> y, double dx) {
    const std::size_t n = y.size();
    if (n < 3 || n % 2 == 0) throw Error("simpson_uniform: need an odd number of samples");
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i + 1 < n; i += 2) odd += y[i];
    for (std::size_t i = 2; i + 1 < n; i += 2) even += y[i];
    return dx / 3.0 * (y[0] + y[n - 1] + 4.0 * odd + 2.0 * even);
}

// Simpson value plus an error estimate from comparing against the stride-2
// subgrid; sample count must be = 4k+1.
inline QuadResult simpson_with_error(std::span<const double> y, double dx) {
    const std::size_t n = y.size();
    if (n < 5 || (n - 1) % 4 != 0) throw Error("simpson_with_error: need 4k+1 samples");
    const double fine = simpson_uniform(y, dx);
    std::vector<double> half;
    half.reserve((n + 1) / 2);
    for (std::size_t i = 0; i < n; i += 2) half.push_back(y[i]);
    const double coarse = simpson_uniform(half, 2.0 * dx);
    return {fine, std::abs(fine - coarse) / 15.0};
}

// Running integral I[i] = int_{grid[0]}^{grid[i]} f, one GK15 panel per cell.
template <class F>
std::vector<double> cumulative_gk15(F&& f, std::span<const double> grid) {
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i)
        out[i] = out[i - 1] + gauss_kronrod_15(f, grid[i - 1], grid[i]).value;
    return out;
}

}  // namespace steklov
