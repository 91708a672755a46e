#pragma once

#include <cstdint>

#include "steklov/errors.hpp"
#include "steklov/warp.hpp"

namespace steklov {

// Spherical-harmonic bookkeeping on S^{n-1}. Only the Laplace eigenvalue
// tau_m and the eigenspace dimension mu_m enter any computation here; the
// harmonics themselves are normalized away.

// tau_m = m(n-2+m), the degree-m eigenvalue of -Delta on S^{n-1}.
inline double tau(int m, int n) {
    if (m < 0 || n < 2) throw Error("tau: need m >= 0, n >= 2");
    return static_cast<double>(m) * static_cast<double>(n - 2 + m);
}

namespace detail {

inline long long binomial(long long top, long long k) {
    if (top < 0 || k < 0 || k > top) return 0;
    if (k > top - k) k = top - k;
    long long acc = 1;
    for (long long i = 1; i <= k; ++i) acc = acc * (top - k + i) / i;
    return acc;
}

}  // namespace detail

// mu_m: dimension of the space of degree-m harmonic homogeneous polynomials,
// C(n+m-1, n-1) - C(n+m-3, n-1); the second binomial vanishes for m < 2.
inline long long multiplicity(int m, int n) {
    if (m < 0 || n < 2) throw Error("multiplicity: need m >= 0, n >= 2");
    if (m == 0) return 1;
    if (m == 1) return n;
    return detail::binomial(n + m - 1, n - 1) - detail::binomial(n + m - 3, n - 1);
}

// lambda_(m) = tau_m / h(R)^2, the degree-m Laplacian eigenvalue of the
// boundary slice {R} x S^{n-1}.
inline double boundary_eigenvalue(const Geometry& g, int m) {
    const double hR = g.h(g.R);
    return tau(m, g.n) / (hR * hR);
}

}  // namespace steklov
