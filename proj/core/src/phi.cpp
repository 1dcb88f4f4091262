#include "relent/phi.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace relent {

PhiSpec::PhiSpec(std::string name_, double a_, double b_, double c_, ProbabilityMeasure mu_,
                 std::function<double(double)> phi_, std::function<double(double)> phi_prime_,
                 bool discontinuous_at_zero, bool discontinuous_at_one,
                 bool operator_monotone_derivative_)
    : name(std::move(name_)),
      a(a_),
      b(b_),
      c(c_),
      mu(std::move(mu_)),
      phi(std::move(phi_)),
      phi_prime(std::move(phi_prime_)),
      phi_prime_discontinuous_at_zero(discontinuous_at_zero),
      phi_prime_discontinuous_at_one(discontinuous_at_one),
      operator_monotone_derivative(operator_monotone_derivative_) {
    if (name.empty()) {
        throw ValidationError("phi spec needs a name");
    }
    if (!(b >= 0.0)) {
        throw ValidationError("representation coefficient b must be nonnegative");
    }
    if (!phi || !phi_prime) {
        throw ValidationError("phi spec needs both phi and phi' callables");
    }
}

double primitive_bracket(double lambda, double s) {
    if (std::abs(lambda) < 1e-4) {
        // s/l + ln(1 - l s)/l^2 = -s^2/2 (1 + 2 l s / 3 + l^2 s^2 / 2 + ...),
        // truncation below 1e-12 for |s| <= 1.
        return -0.5 * s * s * (1.0 + 2.0 * lambda * s / 3.0 + 0.5 * lambda * lambda * s * s);
    }
    return s / lambda + std::log1p(-lambda * s) / (lambda * lambda);
}

namespace {

double xlogx(double x) {
    return x > 0.0 ? x * std::log(x) : 0.0;
}

PhiSpec make_fermionic() {
    auto phi = [](double x) { return xlogx(x) + xlogx(1.0 - x); };
    auto dphi = [](double x) { return std::log(x / (1.0 - x)); };
    return PhiSpec("fermionic", 0.0, 2.0, -std::log(2.0),
                   ProbabilityMeasure::uniform(-1.0, 1.0, 0.5), phi, dphi, true, true, true);
}

PhiSpec make_bosonic() {
    auto phi = [](double x) { return xlogx(x) - (1.0 + x) * std::log1p(x); };
    auto dphi = [](double x) { return std::log(x / (1.0 + x)); };
    return PhiSpec("bosonic", -std::log(3.0), 2.0 / 3.0, std::log(2.0 / 3.0),
                   ProbabilityMeasure::uniform(-1.0, -1.0 / 3.0, 1.5), phi, dphi, true, false,
                   true);
}

PhiSpec make_power2() {
    auto phi = [](double x) { return x * x; };
    auto dphi = [](double x) { return 2.0 * x; };
    return PhiSpec("power2", 1.0, 1.0, -0.25, ProbabilityMeasure::point(0.0), phi, dphi, false,
                   false, true);
}

PhiSpec make_atom(double v, const std::string& name) {
    if (!(std::abs(v) < 1.0)) {
        std::ostringstream os;
        os << "atom location " << v << " must lie strictly inside (-1, 1)";
        throw ValidationError(os.str());
    }
    auto phi = [v](double x) { return -0.5 * primitive_bracket(v, 2.0 * x - 1.0); };
    auto dphi = [v](double x) {
        const double s = 2.0 * x - 1.0;
        return s / (1.0 - v * s);
    };
    return PhiSpec(name, 0.0, 1.0, 0.0, ProbabilityMeasure::point(v), phi, dphi, false, false,
                   true);
}

}  // namespace

PhiSpec builtin(const std::string& name) {
    if (name == "fermionic") {
        return make_fermionic();
    }
    if (name == "bosonic") {
        return make_bosonic();
    }
    if (name == "power2") {
        return make_power2();
    }
    if (name.rfind("atom(", 0) == 0 && name.back() == ')') {
        const std::string inner = name.substr(5, name.size() - 6);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(inner, &used);
        } catch (const std::exception&) {
            throw ValidationError("cannot parse atom location in '" + name + "'");
        }
        if (used != inner.size()) {
            throw ValidationError("cannot parse atom location in '" + name + "'");
        }
        return make_atom(v, name);
    }
    throw ValidationError("unknown phi spec '" + name + "'");
}

double eval_phi_prime_rep(const PhiSpec& spec, double x, double tol) {
    if (!spec.operator_monotone_derivative) {
        throw ValidationError("representation evaluation needs an operator monotone derivative");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw ValidationError("representation evaluation needs x in [0, 1]");
    }
    if (spec.b == 0.0) {
        return spec.a;
    }
    const double s = 2.0 * x - 1.0;
    QuadratureOptions opts;
    opts.tol = tol;
    auto r = integrate_measure(
        spec.mu, [s](double lambda) { return s / (1.0 - lambda * s); }, opts);
    return spec.a + spec.b * r.value;
}

double eval_phi_rep(const PhiSpec& spec, double x, double tol) {
    if (!spec.operator_monotone_derivative) {
        throw ValidationError("representation evaluation needs an operator monotone derivative");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw ValidationError("representation evaluation needs x in [0, 1]");
    }
    const double affine = spec.a * x + spec.c;
    if (spec.b == 0.0) {
        return affine;
    }
    const double s = 2.0 * x - 1.0;
    QuadratureOptions opts;
    opts.tol = tol;
    auto r = integrate_measure(
        spec.mu, [s](double lambda) { return primitive_bracket(lambda, s); }, opts);
    return affine - 0.5 * spec.b * r.value;
}

RepCheckReport check_rep_consistency(const PhiSpec& spec, int grid_size, double tol,
                                     double quad_tol) {
    if (!spec.operator_monotone_derivative) {
        throw ValidationError("consistency check needs an operator monotone derivative");
    }
    if (grid_size < 2) {
        throw ValidationError("consistency grid needs at least two points");
    }
    RepCheckReport report;
    report.grid_size = grid_size;
    report.tol = tol;
    const double lo = 0.02;
    const double hi = 0.98;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (int k = 0; k < grid_size; ++k) {
        const double x = mid + half * std::cos(std::numbers::pi * (2.0 * k + 1.0) /
                                               (2.0 * grid_size));
        const double dev_prime = std::abs(eval_phi_prime_rep(spec, x, quad_tol) - spec.phi_prime(x));
        const double dev_phi = std::abs(eval_phi_rep(spec, x, quad_tol) - spec.phi(x));
        report.max_phi_prime_deviation = std::max(report.max_phi_prime_deviation, dev_prime);
        report.max_phi_deviation = std::max(report.max_phi_deviation, dev_phi);
    }
    report.pass = report.max_phi_prime_deviation <= tol && report.max_phi_deviation <= tol;
    return report;
}

namespace {

enum class EndpointKind { Log, Inverse };

// One density piece against -ln(w) or 1/w, where w is the distance to the
// endpoint. In the coordinate v = -ln w the panels [v0 + k ln2, v0 + (k+1) ln2]
// are exactly the dyadic subdivisions toward the endpoint, and the weight
// e^{-v} cancels the 1/w growth analytically, so the march stays finite in
// floating point arbitrarily close to the endpoint.
void march_density(const MeasureDensity& d, bool upper, EndpointKind kind, double tol,
                   double threshold, EndpointIntegral& out) {
    // Region of integration: [1/2, 1) at the upper end, (-1, -1/2] mirrored.
    const double lo = upper ? std::max(d.lo, 0.5) : std::max(-d.hi, 0.5);
    const double hi = upper ? d.hi : -d.lo;  // distance coordinate flips the lower end
    if (!(lo < hi)) {
        return;
    }
    const double v0 = -std::log1p(-lo);                       // w = 1 - lo
    const bool to_endpoint = hi >= 1.0 - 1e-12;
    const double v1 = to_endpoint ? std::numeric_limits<double>::infinity() : -std::log1p(-hi);
    const auto& nodes = detail::gauss_legendre_nodes();
    const auto& weights = detail::gauss_legendre_weights();
    const double width = std::log(2.0);
    double prev_increment = -1.0;
    double a = v0;
    while (true) {
        const double b = std::min(a + width, v1);
        if (!(b > a)) {
            break;
        }
        double increment = 0.0;
        for (int k = 0; k < 16; ++k) {
            const double v = 0.5 * (a + b) + 0.5 * (b - a) * nodes[k];
            const double w = std::exp(-v);
            double lambda = upper ? 1.0 - w : -1.0 + w;
            lambda = std::min(std::max(lambda, d.lo), d.hi);
            const double rho = d.rho(lambda);
            const double g = (kind == EndpointKind::Log) ? rho * v * w : rho;
            increment += weights[k] * g;
        }
        increment *= 0.5 * (b - a);
        out.value += increment;
        out.panels += 1;
        if (b >= v1) {
            break;  // bounded region fully covered
        }
        if (out.value > threshold && increment >= prev_increment * (1.0 - 1e-12) &&
            prev_increment >= 0.0) {
            out.divergent = true;
            break;
        }
        if (increment == 0.0 && prev_increment == 0.0) {
            break;
        }
        if (increment <= std::max(1e-3 * tol * std::max(1.0, std::abs(out.value)), 1e-300) &&
            increment < prev_increment) {
            break;  // decaying tail below tolerance
        }
        prev_increment = increment;
        a = b;
    }
}

EndpointIntegral endpoint_integral(const ProbabilityMeasure& mu, bool upper, EndpointKind kind,
                                   double tol, double threshold) {
    EndpointIntegral out;
    for (const auto& atom : mu.atoms()) {
        const double pos = upper ? atom.lambda : -atom.lambda;
        if (pos >= 0.5) {
            const double w = 1.0 - pos;
            out.value += atom.weight * (kind == EndpointKind::Log ? -std::log(w) : 1.0 / w);
        }
    }
    for (const auto& d : mu.densities()) {
        if (!out.divergent) {
            march_density(d, upper, kind, tol, threshold, out);
        }
    }
    return out;
}

}  // namespace

bool IntegrabilityReport::consistent_with(const PhiSpec& spec) const {
    return !log_upper.divergent && !log_lower.divergent &&
           inverse_upper.divergent == spec.phi_prime_discontinuous_at_one &&
           inverse_lower.divergent == spec.phi_prime_discontinuous_at_zero;
}

IntegrabilityReport integrability_diagnostics(const PhiSpec& spec, double tol,
                                              double divergence_threshold) {
    if (!spec.operator_monotone_derivative) {
        throw ValidationError("integrability diagnostics need an operator monotone derivative");
    }
    IntegrabilityReport r;
    r.log_upper = endpoint_integral(spec.mu, true, EndpointKind::Log, tol, divergence_threshold);
    r.inverse_upper =
        endpoint_integral(spec.mu, true, EndpointKind::Inverse, tol, divergence_threshold);
    r.log_lower = endpoint_integral(spec.mu, false, EndpointKind::Log, tol, divergence_threshold);
    r.inverse_lower =
        endpoint_integral(spec.mu, false, EndpointKind::Inverse, tol, divergence_threshold);
    return r;
}

}  // namespace relent
