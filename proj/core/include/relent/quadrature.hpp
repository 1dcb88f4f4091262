#pragma once

#include <array>
#include <functional>

#include "relent/hermitian.hpp"
#include "relent/measure.hpp"

namespace relent {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;          // panels in the final partition
    int max_depth = 0;       // deepest bisection level used
    bool converged = false;
};

// Matrix-valued counterpart; the error estimate is in Frobenius norm.
struct MatrixQuadratureResult {
    Matrix value;
    double error_estimate = 0.0;
    int panels = 0;
    int max_depth = 0;
    bool converged = false;
};

struct QuadratureOptions {
    double tol = 1e-9;       // absolute tolerance on the integral
    int max_depth = 40;      // bisection depth cap per panel lineage
    int max_panels = 400000; // global panel budget
};

// Integral of f against the measure: atoms are summed exactly, densities
// are integrated by adaptive Gauss-Legendre panels graded toward any
// density endpoint touching -1 or 1. Throws AccuracyError (carrying the
// best estimate) if the tolerance cannot be met within the depth cap.
QuadratureResult integrate_measure(const ProbabilityMeasure& mu,
                                   const std::function<double(double)>& f,
                                   const QuadratureOptions& opts = {});

MatrixQuadratureResult integrate_measure_matrix(const ProbabilityMeasure& mu, int dim,
                                                const std::function<Matrix(double)>& f,
                                                const QuadratureOptions& opts = {});

// Integral of g over [0, infinity) via the substitution t = u / (1 - u).
// decay_order is the guaranteed power-law decay of g at infinity and must
// exceed 1 for the substituted integrand to stay bounded.
QuadratureResult integrate_halfline(const std::function<double(double)>& g, double decay_order,
                                    const QuadratureOptions& opts = {});

MatrixQuadratureResult integrate_halfline_matrix(int dim, const std::function<Matrix(double)>& g,
                                                 double decay_order,
                                                 const QuadratureOptions& opts = {});

// Deviation between the two sides of the scalar resolvent identity
//   s / (1 + lambda s) = 1/lambda - (1/lambda) Int_0^inf (1 + lambda s + t)^-2 dt,
// with s = 1 - 2x, the left side evaluated directly and the right side
// through integrate_halfline. Requires |lambda| < 1 and x in [0, 1]. For
// |lambda| below 1e-4 the right side is taken in closed form, where the
// identity is exact.
double verify_resolvent_identity(double lambda, double x, double tol = 1e-9);

namespace detail {

// Nodes and weights of 16-point Gauss-Legendre on [-1, 1], computed once
// by Newton iteration on the Legendre polynomial.
const std::array<double, 16>& gauss_legendre_nodes();
const std::array<double, 16>& gauss_legendre_weights();

}  // namespace detail

}  // namespace relent
