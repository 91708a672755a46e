#pragma once

#include <cmath>
#include <vector>

#include "steklov/errors.hpp"
#include "steklov/harmonics.hpp"
#include "steklov/radial.hpp"
#include "steklov/warp.hpp"

namespace steklov::oracle {

// ============================================================================
// Method-independent reference eigenvalues.
//
// Each quotient is discretized on a uniform r-grid and minimized by one
// direct banded solve; no shooting machinery is shared. Convergence is
// second order in the grid spacing and certified by Richardson comparison,
// not by a convergence theorem.
// ============================================================================

namespace detail {

// Thomas elimination for a symmetric positive-definite tridiagonal system.
inline std::vector<double> solve_tridiagonal(std::vector<double> diag, std::vector<double> off,
                                             std::vector<double> rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (diag[i - 1] <= 0.0) throw SingularSystem("tridiagonal pivot <= 0");
        const double w = off[i - 1] / diag[i - 1];
        diag[i] -= w * off[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (diag[n - 1] <= 0.0) throw SingularSystem("tridiagonal pivot <= 0");
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - off[i] * x[i + 1]) / diag[i];
    return x;
}

// Banded Cholesky (lower half stored as band[k][i] = A[i+k][i], k = 0..kd)
// followed by the two triangular solves.
inline std::vector<double> solve_banded_spd(std::vector<std::vector<double>> band,
                                            std::vector<double> rhs, int kd) {
    const std::size_t n = band[0].size();
    for (std::size_t j = 0; j < n; ++j) {
        double d = band[0][j];
        if (d <= 0.0) throw SingularSystem("banded pivot <= 0");
        d = std::sqrt(d);
        band[0][j] = d;
        const std::size_t kmax = std::min<std::size_t>(kd, n - 1 - j);
        for (std::size_t k = 1; k <= kmax; ++k) band[k][j] /= d;
        for (std::size_t k = 1; k <= kmax; ++k)
            for (std::size_t l = k; l <= kmax; ++l)
                band[l - k][j + k] -= band[l][j] * band[k][j];
    }
    // forward: L y = rhs
    for (std::size_t j = 0; j < n; ++j) {
        rhs[j] /= band[0][j];
        const std::size_t kmax = std::min<std::size_t>(kd, n - 1 - j);
        for (std::size_t k = 1; k <= kmax; ++k) rhs[j + k] -= band[k][j] * rhs[j];
    }
    // backward: L^T x = y
    for (std::size_t j = n; j-- > 0;) {
        const std::size_t kmax = std::min<std::size_t>(kd, n - 1 - j);
        for (std::size_t k = 1; k <= kmax; ++k) rhs[j] -= band[k][j] * rhs[j + k];
        rhs[j] /= band[0][j];
    }
    return rhs;
}

}  // namespace detail

// Classical quotient: minimize int ((psi')^2 + tau psi^2/h^2) h^{n-1} over
// piecewise-linear psi with psi(0) = 0, psi(R) = 1. Element coefficients are
// evaluated at midpoints; the psi^2 element integral is Simpson-exact.
inline double fd_sigma(const Geometry& g, int m, int grid_n) {
    if (m < 1) throw Error("fd_sigma: need m >= 1");
    if (grid_n < 8) throw Error("fd_sigma: grid too small");
    const int N = grid_n;
    const double dx = g.R / N;
    const double taum = tau(m, g.n);

    std::vector<double> S(N), C(N);
    for (int e = 0; e < N; ++e) {
        const double mid = (e + 0.5) * dx;
        S[e] = std::pow(g.h(mid), g.n - 1) / dx;
        C[e] = taum * std::pow(g.h(mid), g.n - 3) * dx / 3.0;
    }

    // quadratic form over interior nodes 1..N-1; psi_0 = 0, psi_N = 1
    std::vector<double> diag(N - 1, 0.0), off(N - 2, 0.0), rhs(N - 1, 0.0);
    for (int e = 0; e < N; ++e) {
        const int i = e, j = e + 1;  // element nodes
        const double dcoef = S[e] + C[e];
        const double ocoef = -S[e] + 0.5 * C[e];
        if (i >= 1) diag[i - 1] += dcoef;
        if (j <= N - 1) diag[j - 1] += dcoef;
        if (i >= 1 && j <= N - 1) off[i - 1] += ocoef;
        if (j == N && i >= 1) rhs[i - 1] -= ocoef;  // coupling to pinned psi_N = 1
    }
    std::vector<double> x = detail::solve_tridiagonal(diag, off, rhs);

    std::vector<double> psi(N + 1, 0.0);
    for (int i = 1; i <= N - 1; ++i) psi[i] = x[i - 1];
    psi[N] = 1.0;

    double Q = 0.0;
    for (int e = 0; e < N; ++e) {
        const double d = psi[e + 1] - psi[e];
        Q += S[e] * d * d + C[e] * (psi[e] * psi[e] + psi[e] * psi[e + 1] + psi[e + 1] * psi[e + 1]);
    }
    return Q / std::pow(g.h(g.R), g.n - 1);
}

namespace detail {

// Shared driver for the squared-operator quotients: minimize the trapezoid
// sum of (L psi)^2 h^{n-1} with L psi = psi'' + (n-1)(h'/h) psi' - tau psi/h^2
// discretized by central differences at nodes 1..N. The Neumann data at r = R
// enters through a ghost node folded into the row at N:
//   xi:  psi(R) = 1, psi'(R) = 0  ->  psi_{N+1} = psi_{N-1}
//   eta: psi(R) = 0, psi'(R) = 1  ->  psi_{N+1} = psi_{N-1} + 2 dx
// psi_0 = 0 always; free unknowns are psi_1..psi_{N-1}. A one-sided boundary
// stencil in the functional is first-order here: the minimizer buys an O(h)
// drop by bending the last nodes to deflate the boundary rows. The ghost form
// keeps every row central and restores clean second-order convergence.
inline double fd_fourth_order(const Geometry& g, int m, int grid_n, bool xi_constraints) {
    if (m < 1) throw Error("fd oracle: need m >= 1");
    if (grid_n < 8) throw Error("fd oracle: grid too small");
    const int N = grid_n;
    const double dx = g.R / N;
    const double taum = tau(m, g.n);

    const double psiN = xi_constraints ? 1.0 : 0.0;
    const double ghost_shift = xi_constraints ? 0.0 : 2.0 * dx;

    const int M = N - 1;  // free nodes 1..N-1
    struct Row {
        int col[4];
        double coef[4];
        int ncol = 0;
        double cnst = 0.0;
        double weight = 0.0;
    };
    std::vector<Row> rows;
    rows.reserve(N);

    auto add_entry = [&](Row& row, int node, double c) {
        // map node index to free column, folding constraints into the row
        if (node == 0) return;
        if (node == N) {
            row.cnst += c * psiN;
            return;
        }
        if (node == N + 1) {
            row.cnst += c * ghost_shift;
            node = N - 1;
        }
        for (int k = 0; k < row.ncol; ++k) {
            if (row.col[k] == node - 1) {
                row.coef[k] += c;
                return;
            }
        }
        row.col[row.ncol] = node - 1;
        row.coef[row.ncol] = c;
        ++row.ncol;
    };

    for (int i = 1; i <= N; ++i) {
        const double r = i * dx;
        const double h = g.h(r);
        const double gi = (g.n - 1) * g.dh(r) / h;
        Row row;
        row.weight = (i == N ? 0.5 * dx : dx) * std::pow(h, g.n - 1);
        add_entry(row, i - 1, 1.0 / (dx * dx) - gi / (2.0 * dx));
        add_entry(row, i, -2.0 / (dx * dx) - taum / (h * h));
        add_entry(row, i + 1, 1.0 / (dx * dx) + gi / (2.0 * dx));
        rows.push_back(row);
    }

    // normal equations, bandwidth 2
    constexpr int kd = 2;
    std::vector<std::vector<double>> band(kd + 1, std::vector<double>(M, 0.0));
    std::vector<double> rhs(M, 0.0);
    for (const Row& row : rows) {
        for (int a = 0; a < row.ncol; ++a) {
            rhs[row.col[a]] -= row.weight * row.coef[a] * row.cnst;
            for (int b = 0; b < row.ncol; ++b) {
                if (row.col[a] > row.col[b]) continue;  // lower band only
                band[row.col[b] - row.col[a]][row.col[a]] += row.weight * row.coef[a] * row.coef[b];
            }
        }
    }

    std::vector<double> y = detail::solve_banded_spd(band, rhs, kd);

    std::vector<double> psi(N + 1, 0.0);
    for (int i = 1; i <= N - 1; ++i) psi[i] = y[i - 1];
    psi[N] = psiN;

    double Q = 0.0;
    for (const Row& row : rows) {
        double v = row.cnst;
        for (int a = 0; a < row.ncol; ++a) v += row.coef[a] * psi[row.col[a] + 1];
        Q += row.weight * v * v;
    }
    return Q / std::pow(g.h(g.R), g.n - 1);
}

}  // namespace detail

// Biharmonic quotient with psi(R) = 1, psi'(R) = 0.
inline double fd_xi(const Geometry& g, int m, int grid_n) {
    return detail::fd_fourth_order(g, m, grid_n, true);
}

// Biharmonic quotient with psi(R) = 0, psi'(R) = 1.
inline double fd_eta(const Geometry& g, int m, int grid_n) {
    return detail::fd_fourth_order(g, m, grid_n, false);
}

inline double fd_value(Problem p, const Geometry& g, int m, int grid_n) {
    switch (p) {
        case Problem::Sigma: return fd_sigma(g, m, grid_n);
        case Problem::Xi: return fd_xi(g, m, grid_n);
        case Problem::Eta: return fd_eta(g, m, grid_n);
    }
    throw Error("unreachable problem kind");
}

struct RichardsonResult {
    double value = 0.0;       // extrapolated
    double error_est = 0.0;   // |value - finest|
    double order = 0.0;       // measured convergence order
    double coarse = 0.0, medium = 0.0, fine = 0.0;
};

// Three-grid Richardson: grids N, 2N, 4N; order from the ratio of successive
// differences, extrapolation from the finest pair.
inline RichardsonResult richardson(Problem p, const Geometry& g, int m, int base_n = 200) {
    RichardsonResult res;
    res.coarse = fd_value(p, g, m, base_n);
    res.medium = fd_value(p, g, m, 2 * base_n);
    res.fine = fd_value(p, g, m, 4 * base_n);
    const double d1 = res.coarse - res.medium;
    const double d2 = res.medium - res.fine;
    if (std::abs(d2) < 1e-14 * std::abs(res.fine)) {
        res.order = 2.0;
        res.value = res.fine;
        res.error_est = std::abs(d2);
        return res;
    }
    res.order = std::log2(std::abs(d1 / d2));
    const double factor = std::pow(2.0, res.order) - 1.0;
    res.value = res.fine + (res.fine - res.medium) / factor;
    res.error_est = std::abs(res.value - res.fine);
    return res;
}

}  // namespace steklov::oracle
