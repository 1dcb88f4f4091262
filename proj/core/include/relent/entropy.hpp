#pragma once

#include <limits>

#include "relent/hermitian.hpp"
#include "relent/phi.hpp"

namespace relent {

enum class EntropyKind { Finite, PlusInfinity };

enum class InfinityReason {
    None,
    KernelMismatchAtZero,
    KernelMismatchAtOne,
    NotHilbertSchmidt,  // reserved for structured surrogate probes
};

// Value of the relative entropy in [0, infinity]. Finite values order
// below PlusInfinity; two infinite values compare equal.
struct EntropyValue {
    EntropyKind kind = EntropyKind::Finite;
    double value = 0.0;  // +inf when kind is PlusInfinity
    InfinityReason reason = InfinityReason::None;

    static EntropyValue finite(double v) { return {EntropyKind::Finite, v, InfinityReason::None}; }
    static EntropyValue infinite(InfinityReason r) {
        return {EntropyKind::PlusInfinity, std::numeric_limits<double>::infinity(), r};
    }
    bool is_finite() const { return kind == EntropyKind::Finite; }
};

enum class BoundaryClass { NoEigenvalue, EigenvalueWithAgreement, EigenvalueWithMismatch };

// Geometry of B's spectrum at one boundary of [0, 1]: eigenvalues within
// tol of the boundary value, and whether A agrees with B on that
// eigenspace. active records whether phi' is unbounded there, which is
// when the classification decides between finite and infinite entropy.
struct BoundaryCase {
    BoundaryClass cls = BoundaryClass::NoEigenvalue;
    int kernel_dim = 0;
    double max_mismatch = 0.0;
    bool active = false;
};

struct SingularCase {
    BoundaryCase at_zero;
    BoundaryCase at_one;

    bool forces_infinite() const;
    InfinityReason infinite_reason() const;  // zero takes priority over one
    bool needs_restriction() const;
};

SingularCase classify_singular_case(const PhiSpec& spec, const StateOperator& a,
                                    const StateOperator& b, double boundary_tol = 1e-10);

// tr[phi(A) - phi(B) - phi'(B)(A - B)] evaluated through the spectra of A
// and B. Active boundary eigenspaces with agreement are projected out
// first (the entropy lives on the complement); an active mismatch returns
// PlusInfinity with the matching reason.
EntropyValue relative_entropy_direct(const PhiSpec& spec, const StateOperator& a,
                                     const StateOperator& b, double boundary_tol = 1e-10);

// Derivative of X -> phi(X) at B in direction Q by first divided
// differences of phi on B's eigenbasis. Eigenvalue pairs closer than
// degeneracy_tol use phi' at the midpoint. Throws DomainError when an
// eigenvalue sits on a boundary where phi' is unbounded.
HermitianMatrix gateaux_derivative_spectral(const PhiSpec& spec, const StateOperator& b,
                                            const HermitianMatrix& q,
                                            double degeneracy_tol = 1e-7);

// tr[phi(A) - phi(B)] minus the trace of the spectral derivative.
EntropyValue relative_entropy_gateaux(const PhiSpec& spec, const StateOperator& a,
                                      const StateOperator& b, double boundary_tol = 1e-10);

struct MatrixDerivativeResult {
    HermitianMatrix value;
    double error_estimate = 0.0;
};

// The same derivative assembled from the measure representation: for each
// lambda a resolvent t-integral is evaluated by the half-line engine and
// the bracket is integrated against the measure. Near lambda = 0 the
// bracket switches to its quadratic Taylor polynomial.
MatrixDerivativeResult gateaux_derivative_resolvent(const PhiSpec& spec, const StateOperator& b,
                                                    const HermitianMatrix& q,
                                                    double tol_lambda = 1e-9,
                                                    double tol_t = 1e-9);

// Extremes of the double-integral integrand observed during
// relative_entropy_integral: the smallest sampled trace (nonnegative in
// exact arithmetic) and the largest excess over the bound
// (1 - |lambda| + t)^-3 ||A - B||_HS^2.
struct IntegrandStats {
    double min_value = std::numeric_limits<double>::infinity();
    double max_bound_excess = -std::numeric_limits<double>::infinity();
    long samples = 0;
};

// 2b Int dmu(lambda) Int_0^inf tr[ R_B Q R_A Q R_B ] dt with
// R_X = (1 + lambda(1 - 2X) + t)^-1 and Q = A - B. Singular handling as
// in relative_entropy_direct; b = 0 yields 0.
EntropyValue relative_entropy_integral(const PhiSpec& spec, const StateOperator& a,
                                       const StateOperator& b, double tol_lambda = 1e-9,
                                       double tol_t = 1e-9, double boundary_tol = 1e-10,
                                       IntegrandStats* stats = nullptr);

struct TraceIdentityReport {
    double derivative_trace = 0.0;  // tr of the spectral derivative
    double pairing_trace = 0.0;     // tr[phi'(B)(A - B)]
    double difference = 0.0;
};

// The two traces agree identically; the report shows the numerical gap.
TraceIdentityReport trace_identity_check(const PhiSpec& spec, const StateOperator& a,
                                         const StateOperator& b, double boundary_tol = 1e-10);

struct KleinReport {
    bool defined = false;
    double ratio = 0.0;
    double entropy = 0.0;
    double weighted_difference = 0.0;  // tr[(B^-2 + (1-B)^-2)(A-B)^2]
};

// Ratio of the entropy to the inverse-square weighted squared difference,
// the shape of the standard upper bound on the entropy. Undefined when
// B's spectrum touches a boundary or the entropy is infinite.
KleinReport klein_ratio(const PhiSpec& spec, const StateOperator& a, const StateOperator& b,
                        double boundary_tol = 1e-10);

}  // namespace relent
