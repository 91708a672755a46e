#pragma once

#include <stdexcept>
#include <string>

namespace steklov {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Warp construction/validation failures (nonpositive h, bad coefficients, aR >= pi).
struct InvalidWarp : Error {
    using Error::Error;
};

// Adaptive quadrature could not reach the requested tolerance.
struct QuadratureFailure : Error {
    using Error::Error;
};

// ODE step count exceeded before reaching the right endpoint.
struct StiffnessFailure : Error {
    using Error::Error;
};

// h(r) <= 0 encountered during integration.
struct SingularWarp : Error {
    using Error::Error;
};

// Shooting combination collapsed (boundary value below noise scale).
struct DegenerateCombination : Error {
    using Error::Error;
};

// Estimated quadrature error on the stored grid exceeds the contract.
struct GridTooCoarse : Error {
    using Error::Error;
};

// Direct linear solve hit a nonpositive/zero pivot.
struct SingularSystem : Error {
    using Error::Error;
};

// h' <= 0 somewhere on the grid where strict convexity is required.
struct ConvexityFailure : Error {
    using Error::Error;
};

}  // namespace steklov
