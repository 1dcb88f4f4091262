// Acceptance gate: one self-contained check per advertised guarantee of
// the library, each printing a single PASS or FAIL line with the observed
// numbers and the pinned tolerance. The process exits nonzero when any
// check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "relent/io.hpp"
#include "relent/quadrature.hpp"

using namespace relent;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int number, const std::string& title, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", number, title.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) {
        ++failures;
    }
}

std::string fmt(double v) { return format_double(v); }

// ---- criterion 1: representation fidelity ------------------------------
constexpr double kRepTol = 1e-8;
constexpr double kRepBudgetSeconds = 5.0;

void criterion_rep_fidelity() {
    const auto t0 = std::chrono::steady_clock::now();
    double max_dphi = 0.0;
    double max_phi = 0.0;
    bool pass = true;
    for (const char* name : {"fermionic", "bosonic"}) {
        auto rep = check_rep_consistency(builtin(name), 101, kRepTol);
        max_dphi = std::max(max_dphi, rep.max_phi_prime_deviation);
        max_phi = std::max(max_phi, rep.max_phi_deviation);
        pass = pass && rep.pass;
    }
    const double dt = seconds_since(t0);
    pass = pass && max_dphi <= kRepTol && max_phi <= kRepTol && dt < kRepBudgetSeconds;
    report(1, "representation fidelity on 101 grid points",
           pass,
           "phi' dev " + fmt(max_dphi) + " and phi dev " + fmt(max_phi) + " vs tol 1e-8, " +
               fmt(dt) + " s of " + fmt(kRepBudgetSeconds) + " s");
}

// ---- criteria 2, 5, 9: formula triangle and its side products ----------
constexpr double kTriangleDerivTol = 1e-9;
constexpr double kTriangleIntegralRelTol = 1e-4;
constexpr double kTriangleBudgetSeconds = 180.0;
constexpr double kTraceIdentityTol = 1e-9;
constexpr double kIntegrandFloor = -1e-12;
constexpr double kIntegrandBoundSlack = 1e-9;
constexpr int kTrianglePairs = 100;

void criterion_triangle_family() {
    const auto t0 = std::chrono::steady_clock::now();
    double max_deriv_gap = 0.0;
    double max_integral_gap = 0.0;
    double max_identity = 0.0;
    IntegrandStats stats;
    bool pass = true;
    const std::vector<std::string> names{"fermionic", "bosonic", "power2", "atom(0.5)",
                                         "atom(-0.5)"};
    for (std::size_t s = 0; s < names.size(); ++s) {
        auto spec = builtin(names[s]);
        for (int k = 0; k < kTrianglePairs; ++k) {
            const int dim = 2 + (k % 15);
            Rng rng(derive_stream(777, s * 1000 + static_cast<std::uint64_t>(k)));
            auto a = random_state(dim, 0.1, 0.9, rng);
            auto b = random_state(dim, 0.1, 0.9, rng);
            auto hd = relative_entropy_direct(spec, a, b);
            auto hg = relative_entropy_gateaux(spec, a, b);
            auto hi = relative_entropy_integral(spec, a, b, 1e-9, 1e-9, 1e-10, &stats);
            if (!hd.is_finite() || !hg.is_finite() || !hi.is_finite()) {
                pass = false;
                continue;
            }
            max_deriv_gap = std::max(max_deriv_gap, std::abs(hd.value - hg.value));
            max_integral_gap =
                std::max(max_integral_gap,
                         std::abs(hd.value - hi.value) / std::max(hd.value, 1e-8));
            max_identity =
                std::max(max_identity, trace_identity_check(spec, a, b).difference);
        }
    }
    const double dt = seconds_since(t0);
    const bool triangle_pass = pass && max_deriv_gap <= kTriangleDerivTol &&
                               max_integral_gap <= kTriangleIntegralRelTol &&
                               dt < kTriangleBudgetSeconds;
    report(2, "formula triangle on 100 pairs x 5 specs, dims 2-16",
           triangle_pass,
           "derivative gap " + fmt(max_deriv_gap) + " vs 1e-9, integral relative gap " +
               fmt(max_integral_gap) + " vs 1e-4, " + fmt(dt) + " s of " +
               fmt(kTriangleBudgetSeconds) + " s");

    report(5, "derivative trace equals pairing trace on triangle instances",
           max_identity <= kTraceIdentityTol,
           "max difference " + fmt(max_identity) + " vs 1e-9");

    const bool integrand_pass =
        stats.samples > 0 && stats.min_value >= kIntegrandFloor &&
        stats.max_bound_excess <= kIntegrandBoundSlack;
    report(9, "double-integral integrand positivity and bound",
           integrand_pass,
           "min trace " + fmt(stats.min_value) + " vs -1e-12, bound excess " +
               fmt(stats.max_bound_excess) + " vs 1e-9, " + std::to_string(stats.samples) +
               " samples");
}

// ---- criterion 3: monotonicity trials and the quartic search -----------
constexpr double kTrialTol = 1e-9;
constexpr long kTrialsPerSpec = 1000;
constexpr long kSearchBudget = 100000;
constexpr double kSearchThreshold = 1e-6;
constexpr std::uint64_t kWitnessSeed = 4242;
constexpr long kWitnessIndex = 532;
constexpr double kWitnessMagnitude = 0.0015032641365316235;

void criterion_monotonicity() {
    struct Setup {
        const char* name;
        int from;
        int to;
        std::uint64_t seed;
    };
    const std::vector<Setup> setups{{"fermionic", 4, 3, 9001},
                                    {"bosonic", 5, 4, 9002},
                                    {"power2", 5, 5, 9003},
                                    {"atom(0.5)", 8, 6, 9004},
                                    {"atom(-0.5)", 6, 2, 9005}};
    double worst = 0.0;
    long total_violations = 0;
    for (const Setup& s : setups) {
        auto rep = monotonicity_trials(builtin(s.name), s.from, s.to, kTrialsPerSpec, s.seed,
                                       kTrialTol);
        worst = std::max(worst, rep.max_violation);
        total_violations += static_cast<long>(rep.violations.size());
    }

    auto search = counterexample_search(quartic_test_function(), kSearchBudget, kWitnessSeed,
                                        kSearchThreshold);
    const bool found = !search.inconclusive && search.violations.size() == 1 &&
                       search.violations[0].magnitude > kSearchThreshold;
    const double replay = search_trial_gap(quartic_test_function(), kWitnessSeed, kWitnessIndex);
    const bool replay_ok =
        found && search.violations[0].index == kWitnessIndex &&
        std::abs(replay - kWitnessMagnitude) <= 1e-12 * std::abs(kWitnessMagnitude);

    const bool pass = total_violations == 0 && worst <= kTrialTol && found && replay_ok;
    report(3, "monotonicity under contractions and the quartic counterexample",
           pass,
           std::to_string(total_violations) + " violations in 5x" +
               std::to_string(kTrialsPerSpec) + " trials (max gap " + fmt(worst) +
               "), quartic witness at trial " +
               std::to_string(found ? search.violations[0].index : -1) + " magnitude " +
               fmt(found ? search.violations[0].magnitude : 0.0) + ", replay gap " +
               fmt(replay));
}

// ---- criterion 4: projection sweeps ------------------------------------
constexpr double kSweepTol = 1e-9;
constexpr double kSweepBudgetSeconds = 120.0;
constexpr int kSweepCount = 50;

void criterion_projection_sweeps() {
    const auto t0 = std::chrono::steady_clock::now();
    auto ferm = builtin("fermionic");
    const std::vector<int> ambients{8, 12, 16, 20, 24, 32, 40, 48, 56, 64};
    bool monotone = true;
    bool limits = true;
    for (int k = 0; k < kSweepCount; ++k) {
        const int ambient = ambients[static_cast<std::size_t>(k) % ambients.size()];
        Rng rng(derive_stream(8800, static_cast<std::uint64_t>(k)));
        auto a = random_state(ambient, 0.1, 0.9, rng);
        auto b = random_state(ambient, 0.1, 0.9, rng);
        std::vector<int> ranks(static_cast<std::size_t>(ambient));
        for (int r = 1; r <= ambient; ++r) {
            ranks[static_cast<std::size_t>(r - 1)] = r;
        }
        auto trace =
            projection_sweep(ferm, a, b, ProjectionChain::coordinate_prefix(ambient, ranks));
        monotone = monotone && trace.nondecreasing(kSweepTol);
        limits = limits && trace.last_matches_limit(kSweepTol);
    }
    const double dt = seconds_since(t0);
    const bool pass = monotone && limits && dt < kSweepBudgetSeconds;
    report(4, "50 projection sweeps, ambient 8-64",
           pass,
           std::string("nondecreasing ") + (monotone ? "yes" : "NO") + ", limits match " +
               (limits ? "yes" : "NO") + " vs 1e-9, " + fmt(dt) + " s of " +
               fmt(kSweepBudgetSeconds) + " s");
}

// ---- criterion 6: singular fixtures ------------------------------------
void criterion_singular_fixtures() {
    auto ferm = builtin("fermionic");
    bool pass = true;
    std::string notes;
    const std::vector<std::pair<SingularMode, const char*>> modes{
        {SingularMode::MismatchAtZero, "mz"},
        {SingularMode::MismatchAtOne, "mo"},
        {SingularMode::AgreementAtZero, "az"},
        {SingularMode::AgreementAtOne, "ao"}};
    for (const auto& [mode, tag] : modes) {
        auto probe = singular_probe(ferm, mode, 4, 4100 + (tag[0] - 'a'));
        pass = pass && probe.consistent;
        notes += std::string(notes.empty() ? "" : ", ") + tag + (probe.consistent ? " ok" : " BAD");
    }
    auto control = singular_probe(builtin("power2"), SingularMode::MismatchAtZero, 4, 4200);
    pass = pass && control.consistent && control.direct.is_finite();
    notes += control.consistent ? ", control ok" : ", control BAD";
    report(6, "singular fixtures: infinities, sweeps and complement values", pass, notes);
}

// ---- criterion 7: analytic anchors -------------------------------------
constexpr double kAnchorTol = 1e-10;
constexpr double kCommutingPin = 0.1645658;
constexpr double kCommutingPinTol = 1e-7;

double classical_binary_sum(const std::vector<double>& a, const std::vector<double>& b) {
    double out = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        out += a[i] * std::log(a[i] / b[i]) + (1.0 - a[i]) * std::log((1.0 - a[i]) / (1.0 - b[i]));
    }
    return out;
}

void criterion_analytic_anchors() {
    auto p2 = builtin("power2");
    double max_gap = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int dim = 2 + (k % 15);
        Rng rng(derive_stream(1234, static_cast<std::uint64_t>(k)));
        auto a = random_state(dim, 0.05, 0.95, rng);
        auto b = random_state(dim, 0.05, 0.95, rng);
        const double target = std::pow(hs_norm(a.mat() - b.mat()), 2);
        auto h = relative_entropy_direct(p2, a, b);
        max_gap = std::max(max_gap, std::abs(h.value - target));
    }

    Matrix am = Matrix::Zero(2, 2);
    am(0, 0) = 0.3;
    am(1, 1) = 0.7;
    Matrix bm = Matrix::Zero(2, 2);
    bm(0, 0) = 0.5;
    bm(1, 1) = 0.5;
    auto h = relative_entropy_direct(builtin("fermionic"), StateOperator{HermitianMatrix{am}},
                                     StateOperator{HermitianMatrix{bm}});
    const double classical = classical_binary_sum({0.3, 0.7}, {0.5, 0.5});
    const double commuting_gap = std::abs(h.value - classical);
    const double pin_gap = std::abs(classical - kCommutingPin);

    const bool pass = max_gap <= kAnchorTol && commuting_gap <= kAnchorTol &&
                      pin_gap <= kCommutingPinTol;
    report(7, "quadratic and commuting anchors",
           pass,
           "power2 vs squared distance gap " + fmt(max_gap) + " vs 1e-10, commuting vs " +
               "classical sum gap " + fmt(commuting_gap) + " vs 1e-10, pin gap " + fmt(pin_gap) +
               " vs 1e-7");
}

// ---- criterion 8: resolvent identity and endpoint diagnostics ----------
constexpr double kResolventTol = 1e-9;
constexpr double kLogIntegralPin = 0.42328679513998635;  // (1 + ln 2) / 4
constexpr double kLogIntegralTol = 1e-9;

void criterion_resolvent_and_endpoints() {
    double max_dev = 0.0;
    const std::vector<double> lambdas{-0.95, -0.75, -0.5, -0.25, -0.05,
                                      0.05, 0.25, 0.5, 0.75, 0.95};
    for (int i = 0; i < 10; ++i) {
        const double x = 0.05 + 0.1 * i;
        for (double lambda : lambdas) {
            max_dev = std::max(max_dev, verify_resolvent_identity(lambda, x));
        }
    }
    auto integ = integrability_diagnostics(builtin("fermionic"));
    const double log_gap = std::abs(integ.log_upper.value - kLogIntegralPin);
    const bool pass = max_dev <= kResolventTol && !integ.log_upper.divergent &&
                      log_gap <= kLogIntegralTol && integ.inverse_upper.divergent &&
                      integ.inverse_lower.divergent;
    report(8, "resolvent identity grid and endpoint integrability",
           pass,
           "identity deviation " + fmt(max_dev) + " vs 1e-9, log integral gap " + fmt(log_gap) +
               " vs 1e-9, inverse integrals divergent " +
               ((integ.inverse_upper.divergent && integ.inverse_lower.divergent) ? "yes" : "NO"));
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_rep_fidelity();
    criterion_triangle_family();  // also prints criteria 5 and 9
    criterion_monotonicity();
    criterion_projection_sweeps();
    criterion_singular_fixtures();
    criterion_analytic_anchors();
    criterion_resolvent_and_endpoints();
    std::printf("%s: 9 criteria, %d failed, %.1f s total\n", failures == 0 ? "PASS" : "FAIL",
                failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
