#include "relent/entropy.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

namespace relent {

bool SingularCase::forces_infinite() const {
    return (at_zero.active && at_zero.cls == BoundaryClass::EigenvalueWithMismatch) ||
           (at_one.active && at_one.cls == BoundaryClass::EigenvalueWithMismatch);
}

InfinityReason SingularCase::infinite_reason() const {
    if (at_zero.active && at_zero.cls == BoundaryClass::EigenvalueWithMismatch) {
        return InfinityReason::KernelMismatchAtZero;
    }
    if (at_one.active && at_one.cls == BoundaryClass::EigenvalueWithMismatch) {
        return InfinityReason::KernelMismatchAtOne;
    }
    return InfinityReason::None;
}

bool SingularCase::needs_restriction() const {
    return (at_zero.active && at_zero.cls == BoundaryClass::EigenvalueWithAgreement) ||
           (at_one.active && at_one.cls == BoundaryClass::EigenvalueWithAgreement);
}

namespace {

BoundaryCase classify_boundary(const StateOperator& a, const StateOperator& b, double boundary,
                               bool active, double tol) {
    BoundaryCase out;
    out.active = active;
    const SpectralDecomposition& d = b.spectral();
    const Matrix diff = a.mat() - b.mat();
    for (int i = 0; i < d.dim(); ++i) {
        if (std::abs(d.values[i] - boundary) <= tol) {
            out.kernel_dim += 1;
            const double mismatch = (diff * d.vectors.col(i)).norm();
            out.max_mismatch = std::max(out.max_mismatch, mismatch);
        }
    }
    if (out.kernel_dim == 0) {
        out.cls = BoundaryClass::NoEigenvalue;
    } else if (out.max_mismatch > tol) {
        out.cls = BoundaryClass::EigenvalueWithMismatch;
    } else {
        out.cls = BoundaryClass::EigenvalueWithAgreement;
    }
    return out;
}

void check_same_dim(const StateOperator& a, const StateOperator& b) {
    if (a.dim() != b.dim()) {
        std::ostringstream os;
        os << "operators have different dimensions " << a.dim() << " and " << b.dim();
        throw ValidationError(os.str());
    }
}

double eval_phi_prime_checked(const PhiSpec& spec, double x) {
    if ((spec.phi_prime_discontinuous_at_zero && x <= 0.0) ||
        (spec.phi_prime_discontinuous_at_one && x >= 1.0)) {
        std::ostringstream os;
        os << "phi' is unbounded at eigenvalue " << x;
        throw DomainError(os.str(), x);
    }
    return spec.phi_prime(x);
}

// Outcome of the active-boundary analysis: either the entropy is already
// decided, or the (possibly restricted) pair it should be computed on.
struct ResolvedPair {
    std::optional<EntropyValue> early;
    std::optional<StateOperator> a;
    std::optional<StateOperator> b;
};

ResolvedPair resolve_boundaries(const PhiSpec& spec, const StateOperator& a,
                                const StateOperator& b, double tol) {
    check_same_dim(a, b);
    const SingularCase cls = classify_singular_case(spec, a, b, tol);
    if (cls.forces_infinite()) {
        return {EntropyValue::infinite(cls.infinite_reason()), std::nullopt, std::nullopt};
    }
    if (!cls.needs_restriction()) {
        return {std::nullopt, a, b};
    }
    const SpectralDecomposition& d = b.spectral();
    const int n = d.dim();
    std::vector<int> kernel;
    for (int i = 0; i < n; ++i) {
        const bool at_zero = cls.at_zero.active && std::abs(d.values[i]) <= tol;
        const bool at_one = cls.at_one.active && std::abs(d.values[i] - 1.0) <= tol;
        if (at_zero || at_one) {
            kernel.push_back(i);
        }
    }
    if (static_cast<int>(kernel.size()) == n) {
        // A equals B on the whole space up to tol; nothing is left to trace.
        return {EntropyValue::finite(0.0), std::nullopt, std::nullopt};
    }
    Matrix k(n, static_cast<Eigen::Index>(kernel.size()));
    for (std::size_t j = 0; j < kernel.size(); ++j) {
        k.col(static_cast<Eigen::Index>(j)) = d.vectors.col(kernel[j]);
    }
    Matrix p = Matrix::Identity(n, n) - k * k.adjoint();
    HermitianMatrix proj(p, 1e-8);
    StateOperator ra{restrict_to_range(a.hermitian(), proj)};
    StateOperator rb{restrict_to_range(b.hermitian(), proj)};
    return {std::nullopt, std::move(ra), std::move(rb)};
}

double direct_core(const PhiSpec& spec, const StateOperator& a, const StateOperator& b) {
    const SpectralDecomposition& da = a.spectral();
    const SpectralDecomposition& db = b.spectral();
    double phi_a = 0.0;
    double phi_b = 0.0;
    for (int i = 0; i < da.dim(); ++i) {
        phi_a += spec.phi(da.values[i]);
    }
    for (int i = 0; i < db.dim(); ++i) {
        phi_b += spec.phi(db.values[i]);
    }
    const Matrix qt = db.vectors.adjoint() * (a.mat() - b.mat()) * db.vectors;
    double pairing = 0.0;
    for (int i = 0; i < db.dim(); ++i) {
        pairing += eval_phi_prime_checked(spec, db.values[i]) * qt(i, i).real();
    }
    return phi_a - phi_b - pairing;
}

}  // namespace

SingularCase classify_singular_case(const PhiSpec& spec, const StateOperator& a,
                                    const StateOperator& b, double boundary_tol) {
    check_same_dim(a, b);
    SingularCase out;
    out.at_zero =
        classify_boundary(a, b, 0.0, spec.phi_prime_discontinuous_at_zero, boundary_tol);
    out.at_one = classify_boundary(a, b, 1.0, spec.phi_prime_discontinuous_at_one, boundary_tol);
    return out;
}

EntropyValue relative_entropy_direct(const PhiSpec& spec, const StateOperator& a,
                                     const StateOperator& b, double boundary_tol) {
    ResolvedPair r = resolve_boundaries(spec, a, b, boundary_tol);
    if (r.early) {
        return *r.early;
    }
    return EntropyValue::finite(direct_core(spec, *r.a, *r.b));
}

HermitianMatrix gateaux_derivative_spectral(const PhiSpec& spec, const StateOperator& b,
                                            const HermitianMatrix& q, double degeneracy_tol) {
    if (b.dim() != q.dim()) {
        throw ValidationError("direction and base point dimensions disagree");
    }
    const SpectralDecomposition& d = b.spectral();
    const int n = d.dim();
    const Matrix qt = d.vectors.adjoint() * q.mat() * d.vectors;
    Matrix dt(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double bi = d.values[i];
            const double bj = d.values[j];
            double slope = 0.0;
            if (std::abs(bi - bj) < degeneracy_tol) {
                slope = eval_phi_prime_checked(spec, 0.5 * (bi + bj));
            } else {
                slope = (spec.phi(bi) - spec.phi(bj)) / (bi - bj);
            }
            dt(i, j) = slope * qt(i, j);
        }
    }
    Matrix out = d.vectors * dt * d.vectors.adjoint();
    return HermitianMatrix(out, 1e-10);
}

EntropyValue relative_entropy_gateaux(const PhiSpec& spec, const StateOperator& a,
                                      const StateOperator& b, double boundary_tol) {
    ResolvedPair r = resolve_boundaries(spec, a, b, boundary_tol);
    if (r.early) {
        return *r.early;
    }
    const StateOperator& ra = *r.a;
    const StateOperator& rb = *r.b;
    double phi_a = 0.0;
    double phi_b = 0.0;
    for (int i = 0; i < ra.dim(); ++i) {
        phi_a += spec.phi(ra.spectral().values[i]);
    }
    for (int i = 0; i < rb.dim(); ++i) {
        phi_b += spec.phi(rb.spectral().values[i]);
    }
    HermitianMatrix q(ra.mat() - rb.mat(), 1e-10);
    HermitianMatrix deriv = gateaux_derivative_spectral(spec, rb, q);
    return EntropyValue::finite(phi_a - phi_b - trace_real(deriv.mat()));
}

MatrixDerivativeResult gateaux_derivative_resolvent(const PhiSpec& spec, const StateOperator& b,
                                                    const HermitianMatrix& q, double tol_lambda,
                                                    double tol_t) {
    if (!spec.operator_monotone_derivative) {
        throw ValidationError("resolvent derivative needs an operator monotone derivative");
    }
    if (b.dim() != q.dim()) {
        throw ValidationError("direction and base point dimensions disagree");
    }
    const SpectralDecomposition& d = b.spectral();
    const int n = d.dim();
    const Matrix qt = d.vectors.adjoint() * q.mat() * d.vectors;
    if (spec.b == 0.0) {
        return {HermitianMatrix(spec.a * q.mat(), 1e-10), 0.0};
    }
    RealVector sigma(n);
    for (int i = 0; i < n; ++i) {
        sigma[i] = 1.0 - 2.0 * d.values[i];
    }
    double max_t_error = 0.0;
    auto bracket = [&](double lambda) -> Matrix {
        Matrix m(n, n);
        if (std::abs(lambda) < 1e-4) {
            // (2/l)(Q - T(l)) expanded to second order; truncation ~ 4e-13.
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const double si = sigma[i];
                    const double sj = sigma[j];
                    const double c0 = si + sj;
                    const double c1 = si * si + si * sj + sj * sj;
                    const double c2 =
                        si * si * si + si * si * sj + si * sj * sj + sj * sj * sj;
                    m(i, j) =
                        (c0 - (2.0 / 3.0) * lambda * c1 + 0.5 * lambda * lambda * c2) * qt(i, j);
                }
            }
            return m;
        }
        RealVector c(n);
        for (int i = 0; i < n; ++i) {
            c[i] = 1.0 + lambda * sigma[i];
        }
        QuadratureOptions topts;
        topts.tol = tol_t;
        auto t_integral = integrate_halfline_matrix(
            n,
            [&](double t) -> Matrix {
                Matrix g(n, n);
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j) {
                        g(i, j) = qt(i, j) / ((c[i] + t) * (c[j] + t));
                    }
                }
                return g;
            },
            2.0, topts);
        if (!t_integral.converged) {
            throw AccuracyError("resolvent t-integral did not converge",
                                t_integral.value.norm(), t_integral.error_estimate);
        }
        max_t_error = std::max(max_t_error, t_integral.error_estimate);
        m = (2.0 / lambda) * (qt - t_integral.value);
        return m;
    };
    QuadratureOptions lopts;
    lopts.tol = tol_lambda;
    auto res = integrate_measure_matrix(spec.mu, n, bracket, lopts);
    if (!res.converged) {
        throw AccuracyError("resolvent derivative lambda integral did not converge",
                            res.value.norm(), res.error_estimate);
    }
    Matrix dt = spec.a * qt - 0.5 * spec.b * res.value;
    Matrix out = d.vectors * dt * d.vectors.adjoint();
    const double err =
        0.5 * spec.b * (res.error_estimate + max_t_error * spec.mu.total_mass()) + 1e-15;
    return {HermitianMatrix(out, 1e-10), err};
}

EntropyValue relative_entropy_integral(const PhiSpec& spec, const StateOperator& a,
                                       const StateOperator& b, double tol_lambda, double tol_t,
                                       double boundary_tol, IntegrandStats* stats) {
    if (!spec.operator_monotone_derivative) {
        throw ValidationError("integral form needs an operator monotone derivative");
    }
    ResolvedPair r = resolve_boundaries(spec, a, b, boundary_tol);
    if (r.early) {
        return *r.early;
    }
    if (spec.b == 0.0) {
        return EntropyValue::finite(0.0);
    }
    const StateOperator& ra = *r.a;
    const StateOperator& rb = *r.b;
    const SpectralDecomposition& da = ra.spectral();
    const SpectralDecomposition& db = rb.spectral();
    const int n = da.dim();
    const Matrix g = db.vectors.adjoint() * (ra.mat() - rb.mat()) * da.vectors;
    const Eigen::MatrixXd w = g.cwiseAbs2();
    const double hs_squared = w.sum();
    RealVector sa(n);
    RealVector sb(n);
    for (int i = 0; i < n; ++i) {
        sa[i] = 1.0 - 2.0 * da.values[i];
        sb[i] = 1.0 - 2.0 * db.values[i];
    }
    // The t-integrals feed the lambda integrand, so they run well below the
    // lambda tolerance to keep the adaptive refinement above its noise floor.
    const double tt = std::min(tol_t, tol_lambda / 64.0);
    RealVector rbv(n);
    RealVector rav(n);
    RealVector wra(n);
    auto trace_at = [&](double lambda, double t) {
        for (int i = 0; i < n; ++i) {
            rbv[i] = 1.0 / (1.0 + lambda * sb[i] + t);
            rav[i] = 1.0 / (1.0 + lambda * sa[i] + t);
        }
        wra.noalias() = w * rav;
        double h = 0.0;
        for (int i = 0; i < n; ++i) {
            h += rbv[i] * rbv[i] * wra[i];
        }
        if (stats != nullptr) {
            stats->min_value = std::min(stats->min_value, h);
            const double edge = 1.0 - std::abs(lambda) + t;
            const double bound = hs_squared / (edge * edge * edge);
            stats->max_bound_excess = std::max(stats->max_bound_excess, h - bound);
            stats->samples += 1;
        }
        return h;
    };
    auto lambda_integrand = [&](double lambda) {
        QuadratureOptions topts;
        topts.tol = tt;
        auto inner = integrate_halfline([&](double t) { return trace_at(lambda, t); }, 3.0, topts);
        return inner.value;
    };
    QuadratureOptions lopts;
    lopts.tol = tol_lambda;
    auto outer = integrate_measure(spec.mu, lambda_integrand, lopts);
    return EntropyValue::finite(2.0 * spec.b * outer.value);
}

TraceIdentityReport trace_identity_check(const PhiSpec& spec, const StateOperator& a,
                                         const StateOperator& b, double boundary_tol) {
    ResolvedPair r = resolve_boundaries(spec, a, b, boundary_tol);
    if (r.early) {
        if (!r.early->is_finite()) {
            throw ValidationError("trace identity needs a finite instance");
        }
        return {0.0, 0.0, 0.0};
    }
    const StateOperator& ra = *r.a;
    const StateOperator& rb = *r.b;
    HermitianMatrix q(ra.mat() - rb.mat(), 1e-10);
    HermitianMatrix deriv = gateaux_derivative_spectral(spec, rb, q);
    const SpectralDecomposition& db = rb.spectral();
    const Matrix qt = db.vectors.adjoint() * q.mat() * db.vectors;
    double pairing = 0.0;
    for (int i = 0; i < db.dim(); ++i) {
        pairing += eval_phi_prime_checked(spec, db.values[i]) * qt(i, i).real();
    }
    TraceIdentityReport report;
    report.derivative_trace = trace_real(deriv.mat());
    report.pairing_trace = pairing;
    report.difference = std::abs(report.derivative_trace - report.pairing_trace);
    return report;
}

KleinReport klein_ratio(const PhiSpec& spec, const StateOperator& a, const StateOperator& b,
                        double boundary_tol) {
    check_same_dim(a, b);
    KleinReport report;
    const SpectralDecomposition& db = b.spectral();
    for (int i = 0; i < db.dim(); ++i) {
        const double v = db.values[i];
        if (v <= boundary_tol || v >= 1.0 - boundary_tol) {
            return report;  // weights blow up; ratio undefined
        }
    }
    const Matrix qt = db.vectors.adjoint() * (a.mat() - b.mat()) * db.vectors;
    double weighted = 0.0;
    for (int i = 0; i < db.dim(); ++i) {
        const double v = db.values[i];
        const double wi = 1.0 / (v * v) + 1.0 / ((1.0 - v) * (1.0 - v));
        for (int j = 0; j < db.dim(); ++j) {
            weighted += wi * std::norm(qt(i, j));
        }
    }
    EntropyValue h = relative_entropy_direct(spec, a, b, boundary_tol);
    report.entropy = h.value;
    report.weighted_difference = weighted;
    if (!h.is_finite()) {
        return report;
    }
    report.defined = true;
    report.ratio = weighted > 0.0 ? h.value / weighted : 0.0;
    return report;
}

}  // namespace relent
