#include "relent/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <tuple>
#include <vector>

namespace relent {

namespace detail {

namespace {

struct GaussLegendre {
    std::array<double, 16> nodes;
    std::array<double, 16> weights;
};

// Newton iteration on P_16; roots are symmetric so only half are solved.
GaussLegendre compute_gauss_legendre() {
    GaussLegendre g{};
    const int n = 16;
    for (int k = 0; k < n / 2; ++k) {
        double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        g.nodes[k] = -x;
        g.nodes[n - 1 - k] = x;
        g.weights[k] = w;
        g.weights[n - 1 - k] = w;
    }
    return g;
}

const GaussLegendre& gauss_legendre() {
    static const GaussLegendre g = compute_gauss_legendre();
    return g;
}

}  // namespace

const std::array<double, 16>& gauss_legendre_nodes() {
    return gauss_legendre().nodes;
}

const std::array<double, 16>& gauss_legendre_weights() {
    return gauss_legendre().weights;
}

}  // namespace detail

namespace {

struct ScalarTraits {
    using Value = double;
    static Value zero(int) { return 0.0; }
    static double norm(const Value& v) { return std::abs(v); }
};

struct MatrixTraits {
    using Value = Matrix;
    static Value zero(int dim) { return Matrix::Zero(dim, dim); }
    static double norm(const Value& v) { return v.norm(); }
};

template <class Traits>
typename Traits::Value gl16(const std::function<typename Traits::Value(double)>& f, double a,
                            double b, int dim) {
    const auto& nodes = detail::gauss_legendre_nodes();
    const auto& weights = detail::gauss_legendre_weights();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    typename Traits::Value acc = Traits::zero(dim);
    for (int k = 0; k < 16; ++k) {
        acc += weights[k] * f(mid + half * nodes[k]);
    }
    return half * acc;
}

template <class Traits>
struct Panel {
    double a = 0.0;
    double b = 0.0;
    typename Traits::Value refined;       // left half + right half
    typename Traits::Value left_half;
    typename Traits::Value right_half;
    double err = 0.0;
    int depth = 0;
    bool alive = true;
};

template <class Traits>
struct AdaptiveOutcome {
    typename Traits::Value value;
    double error_estimate = 0.0;
    int panels = 0;
    int max_depth = 0;
    bool converged = false;
};

// Adaptive bisection with 16-point Gauss-Legendre panels. A panel's error
// is the difference between its one-shot value and the sum over its two
// halves; the refined sum is kept. The worst panel is split until the
// accumulated error drops below tol / 2, so the reported estimate (twice
// the accumulated error) is at most tol on success.
template <class Traits>
AdaptiveOutcome<Traits> run_adaptive(const std::function<typename Traits::Value(double)>& f,
                                     const std::vector<double>& breakpoints, int dim,
                                     const QuadratureOptions& opts) {
    using P = Panel<Traits>;
    std::vector<P> panels;
    // (error, -index) priority with lazy deletion; ties prefer the older panel.
    std::priority_queue<std::pair<double, long>> queue;

    auto make_panel = [&](double a, double b, const typename Traits::Value& coarse, int depth) {
        P p;
        p.a = a;
        p.b = b;
        p.depth = depth;
        const double mid = 0.5 * (a + b);
        p.left_half = gl16<Traits>(f, a, mid, dim);
        p.right_half = gl16<Traits>(f, mid, b, dim);
        p.refined = p.left_half + p.right_half;
        p.err = Traits::norm(p.refined - coarse);
        panels.push_back(std::move(p));
        const long idx = static_cast<long>(panels.size()) - 1;
        queue.emplace(panels[idx].err, -idx);
        return idx;
    };

    double err_sum = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        const long idx = make_panel(a, b, gl16<Traits>(f, a, b, dim), 0);
        err_sum += panels[idx].err;
    }

    const double target = 0.5 * opts.tol;
    bool converged = err_sum <= target;
    while (!converged && !queue.empty()) {
        const auto [e, neg] = queue.top();
        queue.pop();
        const long worst = -neg;
        if (!panels[worst].alive || panels[worst].err != e) {
            continue;
        }
        if (static_cast<int>(panels.size()) + 2 > opts.max_panels) {
            break;
        }
        if (panels[worst].depth >= opts.max_depth) {
            // Frozen at the depth cap; its error stays in the budget while
            // shallower panels keep refining.
            continue;
        }
        P& p = panels[worst];
        p.alive = false;
        err_sum -= p.err;
        const double mid = 0.5 * (p.a + p.b);
        const double a = p.a;
        const double b = p.b;
        const int depth = p.depth + 1;
        const typename Traits::Value left = p.left_half;
        const typename Traits::Value right = p.right_half;
        const long li = make_panel(a, mid, left, depth);
        err_sum += panels[li].err;
        const long ri = make_panel(mid, b, right, depth);
        err_sum += panels[ri].err;
        converged = err_sum <= target;
    }

    // Deterministic final summation in left-endpoint order.
    std::vector<long> alive;
    for (long i = 0; i < static_cast<long>(panels.size()); ++i) {
        if (panels[i].alive) {
            alive.push_back(i);
        }
    }
    std::sort(alive.begin(), alive.end(),
              [&](long x, long y) { return panels[x].a < panels[y].a; });
    AdaptiveOutcome<Traits> out;
    out.value = Traits::zero(dim);
    double total_err = 0.0;
    int max_depth = 0;
    for (long i : alive) {
        out.value += panels[i].refined;
        total_err += panels[i].err;
        max_depth = std::max(max_depth, panels[i].depth);
    }
    out.error_estimate = 2.0 * total_err;
    out.panels = static_cast<int>(alive.size());
    out.max_depth = max_depth;
    out.converged = total_err <= target;
    return out;
}

// Breakpoints of the initial partition: uniform base cells overlaid with
// dyadic refinement toward endpoints that carry (potential) singularities.
std::vector<double> graded_breakpoints(double lo, double hi, bool grade_lo, bool grade_hi,
                                       int base_cells, int levels) {
    std::vector<double> pts{lo, hi};
    const double w = hi - lo;
    for (int j = 1; j < base_cells; ++j) {
        pts.push_back(lo + w * j / base_cells);
    }
    for (int k = 1; k <= levels; ++k) {
        const double off = w * std::ldexp(1.0, -k);
        if (grade_hi) {
            pts.push_back(hi - off);
        }
        if (grade_lo) {
            pts.push_back(lo + off);
        }
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double x : pts) {
        if (out.empty() || x - out.back() > 1e-15 * std::max(1.0, std::abs(w))) {
            out.push_back(x);
        }
    }
    return out;
}

constexpr int kMeasureBaseCells = 4;
constexpr int kMeasureGradeLevels = 4;
constexpr int kHalflineBaseCells = 4;
constexpr int kHalflineGradeLevels = 6;

template <class Traits>
AdaptiveOutcome<Traits> measure_core(const ProbabilityMeasure& mu,
                                     const std::function<typename Traits::Value(double)>& f,
                                     int dim, const QuadratureOptions& opts) {
    AdaptiveOutcome<Traits> total;
    total.value = Traits::zero(dim);
    total.converged = true;
    double err = 0.0;
    for (const auto& a : mu.atoms()) {
        total.value += a.weight * f(a.lambda);
    }
    const std::size_t n = mu.densities().size();
    for (const auto& d : mu.densities()) {
        std::function<typename Traits::Value(double)> weighted =
            [&](double x) -> typename Traits::Value { return d.rho(x) * f(x); };
        QuadratureOptions piece = opts;
        piece.tol = opts.tol / static_cast<double>(n);
        const bool grade_lo = d.lo <= -1.0 + 1e-12;
        const bool grade_hi = d.hi >= 1.0 - 1e-12;
        auto bp = graded_breakpoints(d.lo, d.hi, grade_lo, grade_hi, kMeasureBaseCells,
                                     kMeasureGradeLevels);
        auto out = run_adaptive<Traits>(weighted, bp, dim, piece);
        total.value += out.value;
        err += 0.5 * out.error_estimate;
        total.panels += out.panels;
        total.max_depth = std::max(total.max_depth, out.max_depth);
        total.converged = total.converged && out.converged;
    }
    total.error_estimate = 2.0 * err;
    return total;
}

template <class Traits>
AdaptiveOutcome<Traits> halfline_core(const std::function<typename Traits::Value(double)>& g,
                                      double decay_order, int dim, const QuadratureOptions& opts) {
    if (!(decay_order > 1.0)) {
        throw ValidationError("half-line integrand must decay faster than 1/t");
    }
    // t = u / (1 - u) maps [0, 1) onto the half line.
    std::function<typename Traits::Value(double)> h = [&](double u) -> typename Traits::Value {
        const double om = 1.0 - u;
        const double t = u / om;
        return g(t) * (1.0 / (om * om));
    };
    auto bp = graded_breakpoints(0.0, 1.0, false, true, kHalflineBaseCells, kHalflineGradeLevels);
    return run_adaptive<Traits>(h, bp, dim, opts);
}

QuadratureResult to_result(const AdaptiveOutcome<ScalarTraits>& out) {
    return QuadratureResult{out.value, out.error_estimate, out.panels, out.max_depth,
                            out.converged};
}

MatrixQuadratureResult to_result(AdaptiveOutcome<MatrixTraits>&& out) {
    MatrixQuadratureResult r;
    r.value = std::move(out.value);
    r.error_estimate = out.error_estimate;
    r.panels = out.panels;
    r.max_depth = out.max_depth;
    r.converged = out.converged;
    return r;
}

[[noreturn]] void throw_accuracy(const char* what, const AdaptiveOutcome<ScalarTraits>& out,
                                 const QuadratureOptions& opts) {
    std::ostringstream os;
    os << what << " did not reach tolerance " << opts.tol << " within depth " << opts.max_depth
       << "; best estimate " << out.value << " +- " << out.error_estimate;
    throw AccuracyError(os.str(), out.value, out.error_estimate);
}

}  // namespace

QuadratureResult integrate_measure(const ProbabilityMeasure& mu,
                                   const std::function<double(double)>& f,
                                   const QuadratureOptions& opts) {
    auto out = measure_core<ScalarTraits>(mu, f, 0, opts);
    if (!out.converged) {
        throw_accuracy("measure integral", out, opts);
    }
    return to_result(out);
}

MatrixQuadratureResult integrate_measure_matrix(const ProbabilityMeasure& mu, int dim,
                                                const std::function<Matrix(double)>& f,
                                                const QuadratureOptions& opts) {
    QuadratureOptions capped = opts;
    capped.max_panels = std::min(capped.max_panels, 4000);
    return to_result(measure_core<MatrixTraits>(mu, f, dim, capped));
}

QuadratureResult integrate_halfline(const std::function<double(double)>& g, double decay_order,
                                    const QuadratureOptions& opts) {
    auto out = halfline_core<ScalarTraits>(g, decay_order, 0, opts);
    if (!out.converged) {
        throw_accuracy("half-line integral", out, opts);
    }
    return to_result(out);
}

MatrixQuadratureResult integrate_halfline_matrix(int dim, const std::function<Matrix(double)>& g,
                                                 double decay_order,
                                                 const QuadratureOptions& opts) {
    QuadratureOptions capped = opts;
    capped.max_panels = std::min(capped.max_panels, 4000);
    return to_result(halfline_core<MatrixTraits>(g, decay_order, dim, capped));
}

double verify_resolvent_identity(double lambda, double x, double tol) {
    if (!(std::abs(lambda) < 1.0)) {
        throw ValidationError("resolvent identity needs |lambda| < 1");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw ValidationError("resolvent identity needs x in [0, 1]");
    }
    const double s = 1.0 - 2.0 * x;
    const double c = 1.0 + lambda * s;
    const double lhs = s / c;
    if (std::abs(lambda) < 1e-4) {
        // Below this threshold the subtraction (1 - integral) / lambda loses
        // all precision; the closed-form right side equals the left side.
        return 0.0;
    }
    QuadratureOptions opts;
    opts.tol = std::max(tol * std::abs(lambda) / 4.0, 1e-13);
    auto integral = integrate_halfline(
        [c](double t) {
            const double denom = c + t;
            return 1.0 / (denom * denom);
        },
        2.0, opts);
    const double rhs = (1.0 - integral.value) / lambda;
    return std::abs(lhs - rhs);
}

}  // namespace relent
