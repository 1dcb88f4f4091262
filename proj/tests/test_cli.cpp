#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "relent/io.hpp"

using namespace relent;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd =
        env_prefix + std::string(RELENT_BIN) + " " + args + " > cli_out.txt 2> cli_err.txt";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = read_text_file("cli_out.txt");
    r.err = read_text_file("cli_err.txt");
    return r;
}

void write_diag(const std::string& path, std::initializer_list<double> diag) {
    const int n = static_cast<int>(diag.size());
    Matrix m = Matrix::Zero(n, n);
    int i = 0;
    for (double v : diag) {
        m(i, i) = v;
        ++i;
    }
    write_matrix(path, m);
}

}  // namespace

TEST_CASE("compute cross-checks the commuting fixture and is byte deterministic") {
    write_diag("cli_a.json", {0.3, 0.7});
    write_diag("cli_b.json", {0.5, 0.5});
    auto r = run_cli("compute --phi fermionic --a cli_a.json --b cli_b.json");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("direct").at("value").get<double>() == doctest::Approx(0.1645659).epsilon(1e-6));
    CHECK(j.at("agreement").at("pass").get<bool>());
    CHECK(j.at("klein").at("defined").get<bool>());
    CHECK(j.at("trace_identity_difference").get<double>() <= 1e-12);

    auto again = run_cli("compute --phi fermionic --a cli_a.json --b cli_b.json");
    CHECK(again.code == 0);
    CHECK(again.out == r.out);
}

TEST_CASE("compute reports zero for identical inputs") {
    write_diag("cli_same.json", {0.25, 0.75});
    auto r = run_cli("compute --phi bosonic --a cli_same.json --b cli_same.json");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("direct").at("value").get<double>() == 0.0);
    CHECK(j.at("integral").at("value").get<double>() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("compute surfaces the kernel mismatch as inf with its reason") {
    write_diag("cli_am.json", {0.3, 0.5});
    write_diag("cli_bm.json", {0.0, 0.5});
    auto r = run_cli("compute --phi fermionic --a cli_am.json --b cli_bm.json");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("direct").at("value").get<std::string>() == "inf");
    CHECK(j.at("direct").at("reason").get<std::string>() == "kernel-mismatch-at-zero");
    CHECK(j.at("agreement").at("pass").get<bool>());
    CHECK(j.at("classification").at("at_zero").at("case").get<std::string>() == "mismatch");
}

TEST_CASE("compute csv variant carries the same verdict") {
    auto r = run_cli("compute --phi fermionic --a cli_a.json --b cli_b.json --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("key,value\n", 0) == 0);
    CHECK(r.out.find("agreement,pass\n") != std::string::npos);
}

TEST_CASE("compute input failures exit with code 1") {
    CHECK(run_cli("compute --phi fermionic --a cli_missing.json --b cli_b.json").code == 1);
    CHECK(run_cli("compute --phi nonsuch --a cli_a.json --b cli_b.json").code == 1);
    CHECK(run_cli("compute --phi quartic --a cli_a.json --b cli_b.json").code == 1);
    CHECK(run_cli("compute --phi fermionic --a cli_a.json").code == 1);
}

TEST_CASE("the dimension cap from the environment is enforced") {
    write_diag("cli_a4.json", {0.2, 0.4, 0.6, 0.8});
    write_diag("cli_b4.json", {0.3, 0.5, 0.6, 0.7});
    auto capped = run_cli("compute --phi power2 --a cli_a4.json --b cli_b4.json",
                          "ENTROPY_MAX_DIM=3 ");
    CHECK(capped.code == 1);
    CHECK(capped.err.find("ENTROPY_MAX_DIM") != std::string::npos);
    auto ok = run_cli("compute --phi power2 --a cli_a4.json --b cli_b4.json");
    CHECK(ok.code == 0);
    auto bad_env = run_cli("repcheck --phi power2", "ENTROPY_MAX_DIM=abc ");
    CHECK(bad_env.code == 1);
}

TEST_CASE("converge sweeps a seeded pair and writes the trace") {
    auto r = run_cli("converge --phi fermionic --ambient 8 --seed 17 --format csv "
                     "--out cli_trace.csv");
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    const std::string trace = read_text_file("cli_trace.csv");
    CHECK(trace.rfind("rank,value,reason\n", 0) == 0);
    int lines = 0;
    for (char c : trace) {
        lines += c == '\n';
    }
    CHECK(lines == 10);  // header + 8 ranks + limit
    CHECK(trace.find("limit,") != std::string::npos);

    auto again = run_cli("converge --phi fermionic --ambient 8 --seed 17 --format csv "
                         "--out cli_trace2.csv");
    CHECK(again.code == 0);
    CHECK(read_text_file("cli_trace2.csv") == trace);
}

TEST_CASE("converge identity chain stays constant and succeeds") {
    auto r = run_cli("converge --phi fermionic --a cli_a.json --b cli_b.json --chain identity");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("values").size() == 1);
    CHECK(j.at("values")[0].at("value").get<double>() ==
          doctest::Approx(j.at("limit").at("value").get<double>()).epsilon(1e-9));
}

TEST_CASE("converge random chain demands a seed") {
    auto r = run_cli("converge --phi fermionic --a cli_a.json --b cli_b.json --chain random");
    CHECK(r.code == 1);
    auto ok = run_cli(
        "converge --phi fermionic --a cli_a.json --b cli_b.json --chain random --seed 5");
    CHECK(ok.code == 0);
    auto no_seed_pair = run_cli("converge --phi fermionic --ambient 4");
    CHECK(no_seed_pair.code == 1);
}

TEST_CASE("monotonicity trials pass for builtin specs and need valid input") {
    auto r = run_cli("trials --phi fermionic --trials 200 --seed 9");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("trials").get<long>() == 200);
    CHECK(j.at("violations").empty());
    CHECK(run_cli("trials --phi power2 --trials 0 --seed 1").code == 1);
    CHECK(run_cli("trials --phi power2 --trials 50").code == 1);
}

TEST_CASE("quartic search exits by outcome") {
    auto found = run_cli("trials --phi quartic --trials 1000 --seed 4242");
    CHECK(found.code == 0);
    auto j = nlohmann::json::parse(found.out);
    REQUIRE(j.at("violations").size() == 1);
    CHECK(j.at("violations")[0].at("trial").get<long>() == 532);
    CHECK(j.at("violations")[0].at("magnitude").get<double>() > 1e-6);

    auto inconclusive = run_cli("trials --phi quartic --trials 10 --seed 4242");
    CHECK(inconclusive.code == 3);
}

TEST_CASE("repcheck validates builtins and rejects corrupt files") {
    CHECK(run_cli("repcheck --phi fermionic").code == 0);
    CHECK(run_cli("repcheck --phi bosonic").code == 0);
    CHECK(run_cli("repcheck --phi power2").code == 0);
    auto r = run_cli("repcheck --phi 'atom(0.5)'");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("rep_check").at("pass").get<bool>());
    CHECK(j.at("integrability").at("flags_consistent").get<bool>());

    write_text_file("cli_bad_spec.json",
                    "{\"name\": \"broken\", \"a\": 0, \"b\": -1, \"c\": 0,"
                    " \"phi_prime_discontinuous_at_zero\": false,"
                    " \"phi_prime_discontinuous_at_one\": false,"
                    " \"measure\": {\"atoms\": [[0, 1]], \"densities\": []}}");
    CHECK(run_cli("repcheck --phi cli_bad_spec.json").code == 1);
    CHECK(run_cli("repcheck --phi quartic").code == 1);
}

TEST_CASE("a written spec file feeds back into compute") {
    write_phi_spec("cli_spec.json", builtin("fermionic"));
    auto r = run_cli("compute --phi cli_spec.json --a cli_a.json --b cli_b.json");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("direct").at("value").get<double>() == doctest::Approx(0.1645659).epsilon(1e-6));
}
