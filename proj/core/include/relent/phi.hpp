#pragma once

#include <functional>
#include <string>

#include "relent/measure.hpp"
#include "relent/quadrature.hpp"

namespace relent {

// A convex function phi on [0, 1] together with the integral representation
// of its derivative
//   phi'(x) = a + b Int (2x-1) / (1 - lambda (2x-1)) dmu(lambda),
// mu a probability measure on [-1, 1]. The primitive recovered from the
// representation is
//   phi(x) = a x + c - (b/2) Int [ (2x-1)/lambda + ln(1 + lambda(1-2x)) / lambda^2 ] dmu,
// with the constant pinned by c = phi(1/2) - a/2. The representation with
// b >= 0 exists exactly when phi' extends to an operator monotone function;
// the flag records whether the stored phi claims that property.
struct PhiSpec {
    std::string name;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    ProbabilityMeasure mu;
    std::function<double(double)> phi;        // defined on [0, 1], boundary by continuity
    std::function<double(double)> phi_prime;  // defined at least on (0, 1)
    bool phi_prime_discontinuous_at_zero = false;
    bool phi_prime_discontinuous_at_one = false;
    bool operator_monotone_derivative = true;

    PhiSpec(std::string name, double a, double b, double c, ProbabilityMeasure mu,
            std::function<double(double)> phi, std::function<double(double)> phi_prime,
            bool discontinuous_at_zero, bool discontinuous_at_one,
            bool operator_monotone_derivative);
};

// Built-in specs by name: "fermionic", "bosonic", "power2", "atom(v)" with
// a numeric v strictly inside (-1, 1), e.g. "atom(0.5)".
PhiSpec builtin(const std::string& name);

// The integrand bridge (2x-1)/lambda + ln(1 - lambda (2x-1)) / lambda^2 of
// the primitive, switching to a Taylor expansion for |lambda| < 1e-4.
double primitive_bracket(double lambda, double s);

// phi'(x) and phi(x) evaluated through the measure representation rather
// than the stored closed forms. Interior x only when the derivative is
// unbounded at an endpoint.
double eval_phi_prime_rep(const PhiSpec& spec, double x, double tol = 1e-10);
double eval_phi_rep(const PhiSpec& spec, double x, double tol = 1e-10);

struct RepCheckReport {
    double max_phi_prime_deviation = 0.0;
    double max_phi_deviation = 0.0;
    int grid_size = 0;
    double tol = 0.0;
    bool pass = false;
};

// Maximum deviation between the stored closed forms and the representation
// over a Chebyshev-distributed grid in [0.02, 0.98]. Requires the
// operator monotone flag.
RepCheckReport check_rep_consistency(const PhiSpec& spec, int grid_size = 41, double tol = 1e-8,
                                     double quad_tol = 1e-10);

struct EndpointIntegral {
    bool divergent = false;
    double value = 0.0;  // integral when finite, else the partial sum at stop
    long panels = 0;
};

// Endpoint integrability of the measure: the four integrals
//   Int_{[1/2,1)}   -ln(1-lambda) dmu,   Int_{[1/2,1)}   (1-lambda)^-1 dmu,
//   Int_{(-1,-1/2]} -ln(1+lambda) dmu,   Int_{(-1,-1/2]} (1+lambda)^-1 dmu.
// The log integrals are finite for every admissible measure; an inverse
// integral diverges exactly when phi' is unbounded at the matching
// endpoint of [0, 1].
struct IntegrabilityReport {
    EndpointIntegral log_upper;
    EndpointIntegral inverse_upper;
    EndpointIntegral log_lower;
    EndpointIntegral inverse_lower;

    bool consistent_with(const PhiSpec& spec) const;
};

IntegrabilityReport integrability_diagnostics(const PhiSpec& spec, double tol = 1e-9,
                                              double divergence_threshold = 1e6);

}  // namespace relent
