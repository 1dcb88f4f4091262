// Command line front end: computes the relative entropies by all three
// formulas, runs projection sweeps and contraction trials, and checks
// derivative representations. Every number in a report comes from a
// library call; this file only parses flags and arranges output.
//
// Exit codes: 0 success, 1 input error, 2 internal disagreement or
// property violation, 3 inconclusive search.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "relent/io.hpp"

using namespace relent;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitDisagreement = 2;
constexpr int kExitInconclusive = 3;

// |direct - integral| is judged relative to the value; this factor is the
// documented agreement tolerance of the integral route.
constexpr double kIntegralRelativeTol = 1e-4;

int max_dim_cap() {
    const char* env = std::getenv("ENTROPY_MAX_DIM");
    if (env == nullptr) {
        return 200;
    }
    try {
        std::size_t used = 0;
        const long v = std::stol(env, &used);
        if (used != std::string(env).size() || v < 1) {
            throw std::invalid_argument(env);
        }
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ValidationError("ENTROPY_MAX_DIM must be a positive integer");
    }
}

void check_dim(int dim) {
    const int cap = max_dim_cap();
    if (dim > cap) {
        std::ostringstream os;
        os << "dimension " << dim << " exceeds the cap " << cap << " (ENTROPY_MAX_DIM)";
        throw ValidationError(os.str());
    }
}

bool looks_like_file(const std::string& token) {
    return token.find(".json") != std::string::npos;
}

PhiSpec resolve_spec(const std::string& token, bool allow_quartic) {
    if (looks_like_file(token)) {
        return read_phi_spec(token);
    }
    if (token == "quartic") {
        if (!allow_quartic) {
            throw ValidationError(
                "the quartic test function has no operator monotone derivative and only "
                "participates in trials");
        }
        return quartic_test_function();
    }
    return builtin(token);
}

StateOperator load_state(const std::string& path) {
    StateOperator s{HermitianMatrix{read_matrix(path)}};
    check_dim(s.dim());
    return s;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        write_text_file(out_path, content);
    }
}

std::string boundary_case_json(const BoundaryCase& c) {
    const char* label = c.cls == BoundaryClass::NoEigenvalue ? "no-eigenvalue"
                        : c.cls == BoundaryClass::EigenvalueWithAgreement ? "agreement"
                                                                         : "mismatch";
    std::ostringstream os;
    os << "{\"case\": \"" << label << "\", \"kernel_dim\": " << c.kernel_dim
       << ", \"max_mismatch\": " << format_double(c.max_mismatch) << ", \"active\": "
       << (c.active ? "true" : "false") << '}';
    return os.str();
}

struct AgreementVerdict {
    double derivative_gap = 0.0;
    double integral_gap = 0.0;  // relative
    bool pass = false;
};

AgreementVerdict judge(const EntropyValue& direct, const EntropyValue& derivative,
                       const EntropyValue& integral, double tol_agree) {
    AgreementVerdict v;
    auto gap = [](const EntropyValue& x, const EntropyValue& y, bool relative) {
        if (x.is_finite() != y.is_finite()) {
            return std::numeric_limits<double>::infinity();
        }
        if (!x.is_finite()) {
            return x.reason == y.reason ? 0.0 : std::numeric_limits<double>::infinity();
        }
        const double d = std::abs(x.value - y.value);
        return relative ? d / std::max(std::abs(x.value), 1e-8) : d;
    };
    v.derivative_gap = gap(direct, derivative, false);
    v.integral_gap = gap(direct, integral, true);
    v.pass = v.derivative_gap <= tol_agree && v.integral_gap <= kIntegralRelativeTol;
    return v;
}

int run_compute(const std::string& phi, const std::string& a_path, const std::string& b_path,
                double tol_lambda, double tol_t, double tol_agree, const std::string& out,
                const std::string& format) {
    PhiSpec spec = resolve_spec(phi, false);
    StateOperator a = load_state(a_path);
    StateOperator b = load_state(b_path);

    const SingularCase cls = classify_singular_case(spec, a, b);
    const EntropyValue direct = relative_entropy_direct(spec, a, b);
    const EntropyValue derivative = relative_entropy_gateaux(spec, a, b);
    const EntropyValue integral = relative_entropy_integral(spec, a, b, tol_lambda, tol_t);
    const AgreementVerdict verdict = judge(direct, derivative, integral, tol_agree);

    std::string identity_text = "\"undefined\"";
    if (direct.is_finite()) {
        identity_text = format_double(trace_identity_check(spec, a, b).difference);
    }
    const KleinReport klein = klein_ratio(spec, a, b);

    std::ostringstream os;
    if (format == "csv") {
        os << "key,value\n";
        os << "phi," << spec.name << '\n';
        os << "dim," << a.dim() << '\n';
        os << "direct," << entropy_cell(direct) << '\n';
        os << "direct_reason," << reason_label(direct.reason) << '\n';
        os << "derivative," << entropy_cell(derivative) << '\n';
        os << "derivative_reason," << reason_label(derivative.reason) << '\n';
        os << "integral," << entropy_cell(integral) << '\n';
        os << "integral_reason," << reason_label(integral.reason) << '\n';
        os << "trace_identity_difference,"
           << (direct.is_finite() ? format_double(trace_identity_check(spec, a, b).difference)
                                  : std::string("undefined"))
           << '\n';
        os << "klein_defined," << (klein.defined ? "true" : "false") << '\n';
        os << "klein_ratio," << format_double(klein.ratio) << '\n';
        os << "derivative_gap," << format_double(verdict.derivative_gap) << '\n';
        os << "integral_relative_gap," << format_double(verdict.integral_gap) << '\n';
        os << "agreement," << (verdict.pass ? "pass" : "fail") << '\n';
    } else {
        os << "{\n";
        os << "  \"phi\": \"" << spec.name << "\",\n";
        os << "  \"dim\": " << a.dim() << ",\n";
        os << "  \"tol_lambda\": " << format_double(tol_lambda) << ",\n";
        os << "  \"tol_t\": " << format_double(tol_t) << ",\n";
        os << "  \"tol_agree\": " << format_double(tol_agree) << ",\n";
        os << "  \"direct\": " << entropy_value_json(direct) << ",\n";
        os << "  \"derivative\": " << entropy_value_json(derivative) << ",\n";
        os << "  \"integral\": " << entropy_value_json(integral) << ",\n";
        os << "  \"classification\": {\n";
        os << "    \"at_zero\": " << boundary_case_json(cls.at_zero) << ",\n";
        os << "    \"at_one\": " << boundary_case_json(cls.at_one) << "\n";
        os << "  },\n";
        os << "  \"trace_identity_difference\": " << identity_text << ",\n";
        os << "  \"klein\": {\"defined\": " << (klein.defined ? "true" : "false")
           << ", \"ratio\": " << format_double(klein.ratio) << ", \"weighted_difference\": "
           << format_double(klein.weighted_difference) << "},\n";
        os << "  \"agreement\": {\"derivative_gap\": " << format_double(verdict.derivative_gap)
           << ", \"integral_relative_gap\": " << format_double(verdict.integral_gap)
           << ", \"pass\": " << (verdict.pass ? "true" : "false") << "}\n";
        os << "}\n";
    }
    emit(out, os.str());
    return verdict.pass ? kExitOk : kExitDisagreement;
}

int run_converge(const std::string& phi, const std::string& a_path, const std::string& b_path,
                 int ambient, bool seed_set, std::uint64_t seed, const std::string& chain_mode,
                 double tol_agree, const std::string& out, const std::string& format) {
    PhiSpec spec = resolve_spec(phi, false);
    StateOperator a = [&] {
        if (!a_path.empty() && !b_path.empty()) {
            return load_state(a_path);
        }
        if (!seed_set) {
            throw ValidationError("a random pair needs --seed (or pass --a and --b)");
        }
        check_dim(ambient);
        return random_state(ambient, 0.1, 0.9, derive_stream(seed, 1));
    }();
    StateOperator b = (!a_path.empty() && !b_path.empty())
                          ? load_state(b_path)
                          : random_state(ambient, 0.1, 0.9, derive_stream(seed, 2));
    if (a.dim() != b.dim()) {
        throw ValidationError("operators have different dimensions");
    }
    const int dim = a.dim();

    ProjectionChain chain = [&] {
        std::vector<int> ranks(static_cast<std::size_t>(dim));
        for (int r = 1; r <= dim; ++r) {
            ranks[static_cast<std::size_t>(r - 1)] = r;
        }
        if (chain_mode == "prefix") {
            return ProjectionChain::coordinate_prefix(dim, ranks);
        }
        if (chain_mode == "identity") {
            return ProjectionChain({Matrix::Identity(dim, dim)});
        }
        if (chain_mode == "random") {
            if (!seed_set) {
                throw ValidationError("--chain random needs --seed");
            }
            Rng rng(derive_stream(seed, 3));
            return random_nested_chain(dim, ranks, rng);
        }
        throw ValidationError("--chain must be prefix, random or identity");
    }();

    ConvergenceTrace trace = projection_sweep(spec, a, b, chain);
    emit(out, format == "csv" ? trace_to_csv(trace) : trace_to_json(trace));
    const bool ok = trace.nondecreasing(tol_agree) && trace.last_matches_limit(tol_agree);
    return ok ? kExitOk : kExitDisagreement;
}

int run_trials(const std::string& phi, long trials, bool seed_set, std::uint64_t seed,
               int ambient, int target, double tol_agree, const std::string& out,
               const std::string& format) {
    if (trials < 1) {
        throw ValidationError("--trials must be positive (nothing tested otherwise)");
    }
    if (!seed_set) {
        throw ValidationError("trials need --seed");
    }
    PhiSpec spec = resolve_spec(phi, true);
    if (spec.operator_monotone_derivative) {
        check_dim(ambient);
        check_dim(target);
        TrialReport report = monotonicity_trials(spec, ambient, target, trials, seed, tol_agree);
        emit(out, format == "csv" ? trials_to_csv(report) : trials_to_json(report));
        return report.violations.empty() ? kExitOk : kExitDisagreement;
    }
    TrialReport report = counterexample_search(spec, trials, seed);
    emit(out, format == "csv" ? trials_to_csv(report) : trials_to_json(report));
    return report.inconclusive ? kExitInconclusive : kExitOk;
}

int run_repcheck(const std::string& phi, const std::string& out, const std::string& format) {
    PhiSpec spec = resolve_spec(phi, false);
    RepCheckReport rep = check_rep_consistency(spec);
    IntegrabilityReport integ = integrability_diagnostics(spec);
    const bool consistent = integ.consistent_with(spec);

    std::ostringstream os;
    auto endpoint_json = [](const EndpointIntegral& e) {
        std::ostringstream s;
        s << "{\"divergent\": " << (e.divergent ? "true" : "false") << ", \"value\": "
          << format_double(e.value) << '}';
        return s.str();
    };
    if (format == "csv") {
        os << "key,value\n";
        os << "phi," << spec.name << '\n';
        os << "max_phi_prime_deviation," << format_double(rep.max_phi_prime_deviation) << '\n';
        os << "max_phi_deviation," << format_double(rep.max_phi_deviation) << '\n';
        os << "rep_pass," << (rep.pass ? "true" : "false") << '\n';
        os << "log_upper," << format_double(integ.log_upper.value) << '\n';
        os << "inverse_upper_divergent," << (integ.inverse_upper.divergent ? "true" : "false")
           << '\n';
        os << "log_lower," << format_double(integ.log_lower.value) << '\n';
        os << "inverse_lower_divergent," << (integ.inverse_lower.divergent ? "true" : "false")
           << '\n';
        os << "flags_consistent," << (consistent ? "true" : "false") << '\n';
    } else {
        os << "{\n";
        os << "  \"phi\": \"" << spec.name << "\",\n";
        os << "  \"rep_check\": {\"max_phi_prime_deviation\": "
           << format_double(rep.max_phi_prime_deviation) << ", \"max_phi_deviation\": "
           << format_double(rep.max_phi_deviation) << ", \"grid_size\": " << rep.grid_size
           << ", \"tol\": " << format_double(rep.tol) << ", \"pass\": "
           << (rep.pass ? "true" : "false") << "},\n";
        os << "  \"integrability\": {\n";
        os << "    \"log_upper\": " << endpoint_json(integ.log_upper) << ",\n";
        os << "    \"inverse_upper\": " << endpoint_json(integ.inverse_upper) << ",\n";
        os << "    \"log_lower\": " << endpoint_json(integ.log_lower) << ",\n";
        os << "    \"inverse_lower\": " << endpoint_json(integ.inverse_lower) << ",\n";
        os << "    \"flags_consistent\": " << (consistent ? "true" : "false") << "\n";
        os << "  }\n";
        os << "}\n";
    }
    emit(out, os.str());
    return (rep.pass && consistent) ? kExitOk : kExitDisagreement;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monotone relative entropies of Hermitian contractions"};
    app.require_subcommand(1);

    std::string phi = "fermionic";
    std::string a_path;
    std::string b_path;
    std::string out;
    std::string format = "json";
    std::string chain_mode = "prefix";
    double tol_lambda = 1e-9;
    double tol_t = 1e-9;
    double tol_agree = 1e-9;
    std::uint64_t seed = 0;
    bool seed_set = false;
    long trials = 1000;
    int ambient = 4;
    int target = 3;

    auto add_common = [&](CLI::App* cmd, bool with_pair) {
        cmd->add_option("--phi", phi, "built-in spec name or spec .json file");
        cmd->add_option("--out", out, "report file (stdout when omitted)");
        cmd->add_option("--format", format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        if (with_pair) {
            cmd->add_option("--a", a_path, "first operator file (.json or .csv)");
            cmd->add_option("--b", b_path, "second operator file (.json or .csv)");
        }
    };

    CLI::App* compute = app.add_subcommand(
        "compute", "evaluate one pair by all three formulas and cross-check");
    add_common(compute, true);
    compute->add_option("--tol-lambda", tol_lambda, "measure-integral tolerance")
        ->check(CLI::PositiveNumber);
    compute->add_option("--tol-t", tol_t, "half-line integral tolerance")
        ->check(CLI::PositiveNumber);
    compute->add_option("--tol-agree", tol_agree, "derivative-route agreement tolerance")
        ->check(CLI::PositiveNumber);

    CLI::App* converge = app.add_subcommand(
        "converge", "projection sweep along a nested chain");
    add_common(converge, true);
    converge->add_option("--ambient", ambient, "dimension of the generated pair")
        ->check(CLI::PositiveNumber);
    converge->add_option("--seed", seed, "stream seed for generated inputs")
        ->trigger_on_parse()
        ->each([&](const std::string&) { seed_set = true; });
    converge->add_option("--chain", chain_mode, "prefix, random or identity");
    converge->add_option("--tol-agree", tol_agree, "monotonicity and limit tolerance")
        ->check(CLI::PositiveNumber);

    CLI::App* trials_cmd = app.add_subcommand(
        "trials", "random compression trials (or counterexample search for quartic)");
    add_common(trials_cmd, false);
    trials_cmd->add_option("--trials", trials, "number of trials");
    trials_cmd->add_option("--seed", seed, "master seed")
        ->trigger_on_parse()
        ->each([&](const std::string&) { seed_set = true; });
    trials_cmd->add_option("--ambient", ambient, "source dimension")
        ->check(CLI::PositiveNumber);
    trials_cmd->add_option("--target", target, "contraction target dimension")
        ->check(CLI::PositiveNumber);
    trials_cmd->add_option("--tol-agree", tol_agree, "violation threshold")
        ->check(CLI::PositiveNumber);

    CLI::App* repcheck = app.add_subcommand(
        "repcheck", "verify the derivative representation and integrability flags");
    add_common(repcheck, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        max_dim_cap();  // reject a malformed ENTROPY_MAX_DIM for every command
        if (compute->parsed()) {
            if (a_path.empty() || b_path.empty()) {
                throw ValidationError("compute needs --a and --b");
            }
            return run_compute(phi, a_path, b_path, tol_lambda, tol_t, tol_agree, out, format);
        }
        if (converge->parsed()) {
            return run_converge(phi, a_path, b_path, ambient, seed_set, seed, chain_mode,
                                tol_agree, out, format);
        }
        if (trials_cmd->parsed()) {
            return run_trials(phi, trials, seed_set, seed, ambient, target, tol_agree, out,
                              format);
        }
        return run_repcheck(phi, out, format);
    } catch (const AccuracyError& e) {
        std::cerr << "accuracy failure: " << e.what() << '\n';
        return kExitDisagreement;
    } catch (const ValidationError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
}
