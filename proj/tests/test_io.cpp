#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "relent/io.hpp"
#include "relent/random.hpp"

using namespace relent;

namespace {

Matrix tricky_matrix() {
    Rng rng(derive_stream(2024, 9));
    Matrix m(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            m(i, j) = std::complex<double>(rng.normal(), rng.normal());
        }
    }
    m(0, 0) = std::complex<double>(1.0 / 3.0, 0.1);
    m(1, 1) = std::complex<double>(1e-300, -6.02214076e23);
    m(2, 2) = std::complex<double>(0.0, -1.5e-17);
    return m;
}

bool bit_equal(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return false;
    }
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            if (a(i, j).real() != b(i, j).real() || a(i, j).imag() != b(i, j).imag()) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

TEST_CASE("seventeen digit text round-trips doubles exactly") {
    for (double v : {1.0 / 3.0, 0.1, 1e-300, 6.02214076e23, -1.5e-17, 2.0, 0.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("matrix files round-trip bit exactly in both formats") {
    Matrix m = tricky_matrix();
    write_matrix("io_mat.json", m);
    CHECK(bit_equal(read_matrix("io_mat.json"), m));
    write_matrix("io_mat.csv", m);
    CHECK(bit_equal(read_matrix("io_mat.csv"), m));
}

TEST_CASE("matrix writer rejects unknown extensions and shapes") {
    Matrix m = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(write_matrix("io_mat.txt", m), ValidationError);
    Matrix wide = Matrix::Zero(2, 3);
    CHECK_THROWS_AS(write_matrix("io_mat.json", wide), ValidationError);
    CHECK_THROWS_AS(read_matrix("io_no_such_file.json"), ValidationError);
}

TEST_CASE("matrix reader names the offending field") {
    write_text_file("io_broken.json", "{\"dim\": 2, \"re\": [[1, 0], [0, 1]]}");
    try {
        read_matrix("io_broken.json");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("im") != std::string::npos);
    }
    write_text_file("io_broken.csv", "1,0,0\n0,0,1,0\n");
    CHECK_THROWS_AS(read_matrix("io_broken.csv"), ValidationError);
    write_text_file("io_bad_cell.csv", "1,x\n");
    CHECK_THROWS_AS(read_matrix("io_bad_cell.csv"), ValidationError);
}

TEST_CASE("derivative representation files reproduce the builtin functions") {
    for (const char* name : {"fermionic", "bosonic", "power2", "atom(0.5)"}) {
        auto spec = builtin(name);
        write_phi_spec("io_spec.json", spec);
        auto loaded = read_phi_spec("io_spec.json");
        CHECK(loaded.name == spec.name);
        CHECK(loaded.a == spec.a);
        CHECK(loaded.b == spec.b);
        CHECK(loaded.c == spec.c);
        CHECK(loaded.phi_prime_discontinuous_at_zero == spec.phi_prime_discontinuous_at_zero);
        CHECK(loaded.phi_prime_discontinuous_at_one == spec.phi_prime_discontinuous_at_one);
        CHECK(loaded.operator_monotone_derivative);
        for (double x : {0.15, 0.4, 0.65, 0.9}) {
            CAPTURE(name);
            CAPTURE(x);
            CHECK(loaded.phi(x) == doctest::Approx(spec.phi(x)).epsilon(1e-8));
            CHECK(loaded.phi_prime(x) == doctest::Approx(spec.phi_prime(x)).epsilon(1e-8));
        }
    }
}

TEST_CASE("spec files without a representation are refused") {
    CHECK_THROWS_AS(write_phi_spec("io_spec.json", quartic_test_function()), ValidationError);
}

TEST_CASE("corrupted spec files fail with the invariant message") {
    write_text_file("io_bad_spec.json",
                    "{\"name\": \"broken\", \"a\": 0, \"b\": -1, \"c\": 0,\n"
                    " \"phi_prime_discontinuous_at_zero\": false,\n"
                    " \"phi_prime_discontinuous_at_one\": false,\n"
                    " \"measure\": {\"atoms\": [[0, 1]], \"densities\": []}}");
    CHECK_THROWS_AS(read_phi_spec("io_bad_spec.json"), ValidationError);
    write_text_file("io_bad_spec2.json", "{\"name\": \"broken\"}");
    try {
        read_phi_spec("io_bad_spec2.json");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find('a') != std::string::npos);
    }
}

TEST_CASE("entropy values render with the documented schema") {
    CHECK(entropy_value_json(EntropyValue::finite(0.5)) ==
          "{\"value\": 0.5, \"reason\": \"none\"}");
    CHECK(entropy_value_json(EntropyValue::infinite(InfinityReason::KernelMismatchAtZero)) ==
          "{\"value\": \"inf\", \"reason\": \"kernel-mismatch-at-zero\"}");
    CHECK(entropy_cell(EntropyValue::finite(2.0)) == "2");
    CHECK(entropy_cell(EntropyValue::infinite(InfinityReason::KernelMismatchAtOne)) == "inf");
}

TEST_CASE("trace renderings are pinned") {
    ConvergenceTrace trace;
    trace.ranks = {1, 2};
    trace.values = {EntropyValue::finite(0.5),
                    EntropyValue::infinite(InfinityReason::KernelMismatchAtZero)};
    trace.limit_value = EntropyValue::infinite(InfinityReason::KernelMismatchAtZero);
    CHECK(trace_to_csv(trace) ==
          "rank,value,reason\n"
          "1,0.5,none\n"
          "2,inf,kernel-mismatch-at-zero\n"
          "limit,inf,kernel-mismatch-at-zero\n");
    CHECK(trace_to_json(trace) ==
          "{\n"
          "  \"ranks\": [1, 2],\n"
          "  \"values\": [\n"
          "    {\"value\": 0.5, \"reason\": \"none\"},\n"
          "    {\"value\": \"inf\", \"reason\": \"kernel-mismatch-at-zero\"}\n"
          "  ],\n"
          "  \"limit\": {\"value\": \"inf\", \"reason\": \"kernel-mismatch-at-zero\"}\n"
          "}\n");
}

TEST_CASE("trial report renderings are pinned") {
    TrialReport report;
    report.trials = 8;
    report.max_violation = 0.25;
    report.violations.push_back({7, 11, 0.25});
    CHECK(trials_to_json(report) ==
          "{\n"
          "  \"trials\": 8,\n"
          "  \"max_violation\": 0.25,\n"
          "  \"inconclusive\": false,\n"
          "  \"violations\": [\n"
          "    {\"trial\": 7, \"stream\": 11, \"magnitude\": 0.25}\n"
          "  ]\n"
          "}\n");
    CHECK(trials_to_csv(report) ==
          "trial,value,reason\n"
          "7,0.25,violation\n");

    TrialReport clean;
    clean.trials = 3;
    CHECK(trials_to_json(clean) ==
          "{\n"
          "  \"trials\": 3,\n"
          "  \"max_violation\": 0,\n"
          "  \"inconclusive\": false,\n"
          "  \"violations\": []\n"
          "}\n");
    CHECK(trials_to_csv(clean) == "trial,value,reason\n");
}
