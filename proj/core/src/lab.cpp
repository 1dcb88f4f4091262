#include "relent/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace relent {

bool entropy_le(const EntropyValue& x, const EntropyValue& y, double tol) {
    if (!x.is_finite()) {
        return !y.is_finite();
    }
    if (!y.is_finite()) {
        return true;
    }
    return x.value <= y.value + tol;
}

bool ConvergenceTrace::nondecreasing(double tol) const {
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        if (!entropy_le(values[i], values[i + 1], tol)) {
            return false;
        }
    }
    return true;
}

bool ConvergenceTrace::last_matches_limit(double tol) const {
    if (values.empty()) {
        return false;
    }
    const EntropyValue& last = values.back();
    if (!last.is_finite() || !limit_value.is_finite()) {
        return last.is_finite() == limit_value.is_finite();
    }
    return std::abs(last.value - limit_value.value) <= tol;
}

ConvergenceTrace projection_sweep(const PhiSpec& spec, const StateOperator& a,
                                  const StateOperator& b, const ProjectionChain& chain,
                                  double boundary_tol) {
    if (chain.ambient_dim() != a.dim() || a.dim() != b.dim()) {
        throw ValidationError("chain ambient dimension must match both operators");
    }
    ConvergenceTrace trace;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        HermitianMatrix p{chain.projector(k)};
        StateOperator ra{restrict_to_range(a.hermitian(), p)};
        StateOperator rb{restrict_to_range(b.hermitian(), p)};
        trace.ranks.push_back(chain.rank(k));
        trace.values.push_back(relative_entropy_direct(spec, ra, rb, boundary_tol));
    }
    trace.limit_value = relative_entropy_gateaux(spec, a, b, boundary_tol);
    return trace;
}

ConvergenceTrace compression_sweep(const PhiSpec& spec, const StateOperator& a,
                                   const StateOperator& b,
                                   const std::vector<Contraction>& contractions,
                                   double boundary_tol) {
    if (a.dim() != b.dim()) {
        throw ValidationError("operators have different dimensions");
    }
    ConvergenceTrace trace;
    for (const Contraction& x : contractions) {
        if (x.cols() != a.dim()) {
            std::ostringstream os;
            os << "contraction acts on dimension " << x.cols() << ", operators have " << a.dim();
            throw ValidationError(os.str());
        }
        trace.ranks.push_back(x.rows());
        trace.values.push_back(
            relative_entropy_direct(spec, compress(a, x), compress(b, x), boundary_tol));
    }
    trace.limit_value = relative_entropy_direct(spec, a, b, boundary_tol);
    return trace;
}

double compression_gap(const PhiSpec& spec, const StateOperator& a, const StateOperator& b,
                       const Contraction& x, double boundary_tol) {
    const EntropyValue full = relative_entropy_direct(spec, a, b, boundary_tol);
    const EntropyValue compressed =
        relative_entropy_direct(spec, compress(a, x), compress(b, x), boundary_tol);
    if (!compressed.is_finite() && !full.is_finite()) {
        return 0.0;
    }
    if (!compressed.is_finite()) {
        return std::numeric_limits<double>::infinity();
    }
    if (!full.is_finite()) {
        return -std::numeric_limits<double>::infinity();
    }
    return compressed.value - full.value;
}

TrialReport monotonicity_trials(const PhiSpec& spec, int dim_from, int dim_to, long trials,
                                std::uint64_t seed, double tol) {
    if (!spec.operator_monotone_derivative) {
        throw ValidationError("monotonicity trials need an operator monotone derivative");
    }
    if (dim_from < 1 || dim_to < 1) {
        throw ValidationError("trial dimensions must be positive");
    }
    TrialReport report;
    report.trials = trials;
    for (long k = 0; k < trials; ++k) {
        const std::uint64_t stream = derive_stream(seed, static_cast<std::uint64_t>(k));
        Rng rng(stream);
        StateOperator a = random_state(dim_from, 0.1, 0.9, rng);
        StateOperator b = random_state(dim_from, 0.1, 0.9, rng);
        Contraction x = random_contraction(dim_to, dim_from, rng);
        const double gap = compression_gap(spec, a, b, x);
        report.max_violation = std::max(report.max_violation, gap);
        if (gap > tol) {
            report.violations.push_back({k, stream, gap});
        }
    }
    return report;
}

PhiSpec quartic_test_function() {
    return PhiSpec(
        "quartic", 0.0, 0.0, 1.0 / 64.0, ProbabilityMeasure::point(0.0),
        [](double x) { return 0.25 * x * x * x * x; }, [](double x) { return x * x * x; },
        false, false, false);
}

double search_trial_gap(const PhiSpec& spec, std::uint64_t seed, long index) {
    const std::uint64_t stream = derive_stream(seed, static_cast<std::uint64_t>(index));
    Rng rng(stream);
    const int dim = 2 + static_cast<int>(index % 2);
    StateOperator a = random_state(dim, 0.05, 0.95, rng);
    StateOperator b = random_state(dim, 0.05, 0.95, rng);
    const double mode = rng.uniform();
    Contraction x = mode < 0.5 ? random_contraction(dim - 1, dim, rng)
                               : random_contraction(dim, dim, rng);
    return compression_gap(spec, a, b, x);
}

TrialReport counterexample_search(const PhiSpec& spec, long trials, std::uint64_t seed,
                                  double threshold) {
    TrialReport report;
    for (long k = 0; k < trials; ++k) {
        const double gap = search_trial_gap(spec, seed, k);
        report.max_violation = std::max(report.max_violation, gap);
        if (gap > threshold) {
            report.trials = k + 1;
            report.violations.push_back({k, derive_stream(seed, static_cast<std::uint64_t>(k)), gap});
            return report;
        }
    }
    report.trials = trials;
    report.inconclusive = true;
    return report;
}

namespace {

struct ProbeInstance {
    StateOperator a;
    StateOperator b;
    Matrix boundary_vector;   // dim x 1
    Matrix complement_basis;  // dim x (dim - 1)
};

ProbeInstance build_probe_pair(SingularMode mode, int dim, Rng& rng) {
    const bool at_one = mode == SingularMode::MismatchAtOne || mode == SingularMode::AgreementAtOne;
    const bool agree = mode == SingularMode::AgreementAtZero || mode == SingularMode::AgreementAtOne;
    const double theta = at_one ? 1.0 : 0.0;
    const Matrix u = haar_unitary(dim, rng);
    RealVector beta(dim);
    beta[0] = theta;
    for (int i = 1; i < dim; ++i) {
        beta[i] = 0.2 + 0.6 * rng.uniform();
    }
    StateOperator b = StateOperator::from_spectrum(beta, u);
    // from_spectrum sorts ascending, so locate the planted eigenvalue
    int idx = 0;
    for (int i = 0; i < dim; ++i) {
        if (b.spectral().values[i] == theta) {
            idx = i;
            break;
        }
    }
    Matrix psi = b.spectral().vectors.col(idx);
    Matrix vc(dim, dim - 1);
    int col = 0;
    for (int i = 0; i < dim; ++i) {
        if (i != idx) {
            vc.col(col++) = b.spectral().vectors.col(i);
        }
    }
    if (agree) {
        // A = theta on psi plus a random interior block on the complement
        StateOperator block = random_state(dim - 1, 0.2, 0.8, rng);
        Matrix am = theta * (psi * psi.adjoint()) + vc * block.mat() * vc.adjoint();
        return {StateOperator{HermitianMatrix{am}}, b, psi, vc};
    }
    for (int attempt = 0; attempt < 16; ++attempt) {
        StateOperator a = random_state(dim, 0.2, 0.8, rng);
        const double mismatch = ((a.mat() - b.mat()) * psi).norm();
        if (mismatch > 1e-3) {
            return {a, b, psi, vc};
        }
    }
    throw Error("could not draw a mismatching probe operator");
}

ProjectionChain boundary_first_chain(const ProbeInstance& inst) {
    const int dim = inst.b.dim();
    std::vector<Matrix> projectors;
    Matrix p = inst.boundary_vector * inst.boundary_vector.adjoint();
    projectors.push_back(p);
    for (int k = 0; k < dim - 1; ++k) {
        p = p + inst.complement_basis.col(k) * inst.complement_basis.col(k).adjoint();
        projectors.push_back(p);
    }
    return ProjectionChain(std::move(projectors));
}

}  // namespace

SingularProbeReport singular_probe(const PhiSpec& spec, SingularMode mode, int dim,
                                   std::uint64_t seed) {
    if (dim < 2) {
        throw ValidationError("singular probe needs dimension at least 2");
    }
    Rng rng(seed);
    ProbeInstance inst = build_probe_pair(mode, dim, rng);
    SingularProbeReport report;
    report.mode = mode;
    report.direct = relative_entropy_direct(spec, inst.a, inst.b);
    report.derivative = relative_entropy_gateaux(spec, inst.a, inst.b);
    report.integral = relative_entropy_integral(spec, inst.a, inst.b);
    report.sweep = projection_sweep(spec, inst.a, inst.b, boundary_first_chain(inst));

    const bool at_one = mode == SingularMode::MismatchAtOne || mode == SingularMode::AgreementAtOne;
    const bool agree = mode == SingularMode::AgreementAtZero || mode == SingularMode::AgreementAtOne;
    const bool flagged =
        at_one ? spec.phi_prime_discontinuous_at_one : spec.phi_prime_discontinuous_at_zero;

    if (agree || !flagged) {
        // the complement-block evaluation every formula should reproduce
        // (for an unflagged mismatch the full evaluation is the reference)
        if (agree) {
            HermitianMatrix pc{Matrix::Identity(dim, dim) -
                               inst.boundary_vector * inst.boundary_vector.adjoint()};
            StateOperator ca{restrict_to_range(inst.a.hermitian(), pc)};
            StateOperator cb{restrict_to_range(inst.b.hermitian(), pc)};
            report.complement = relative_entropy_direct(spec, ca, cb);
        } else {
            report.complement = report.direct;
        }
        const bool finite = report.direct.is_finite() && report.derivative.is_finite() &&
                            report.integral.is_finite() && report.complement.is_finite();
        report.consistent =
            finite && std::abs(report.direct.value - report.complement.value) <= 1e-9 &&
            std::abs(report.derivative.value - report.complement.value) <= 1e-9 &&
            std::abs(report.integral.value - report.complement.value) <= 1e-9;
        return report;
    }

    const InfinityReason expected =
        at_one ? InfinityReason::KernelMismatchAtOne : InfinityReason::KernelMismatchAtZero;
    bool all_infinite = !report.direct.is_finite() && !report.derivative.is_finite() &&
                        !report.integral.is_finite() && report.direct.reason == expected &&
                        report.derivative.reason == expected && report.integral.reason == expected;
    bool sweep_infinite = true;
    for (const EntropyValue& v : report.sweep.values) {
        sweep_infinite = sweep_infinite && !v.is_finite();
    }
    report.complement = EntropyValue::infinite(expected);
    report.consistent = all_infinite && sweep_infinite;
    return report;
}

}  // namespace relent
