#include "relent/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

namespace relent {

namespace {

using nlohmann::json;

std::string json_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

enum class FileKind { Json, Csv };

FileKind kind_from_extension(const std::string& path) {
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
        return FileKind::Json;
    }
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
        return FileKind::Csv;
    }
    throw ValidationError("file format not recognized from extension: " + path);
}

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) {
        throw ValidationError("cannot open file: " + path);
    }
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        throw ValidationError("file is not valid JSON: " + path);
    }
    return j;
}

const json& require_field(const json& j, const char* field, const std::string& path) {
    auto it = j.find(field);
    if (it == j.end()) {
        throw ValidationError("missing field '" + std::string(field) + "' in " + path);
    }
    return *it;
}

double number_field(const json& j, const char* field, const std::string& path) {
    const json& v = require_field(j, field, path);
    if (!v.is_number()) {
        throw ValidationError("field '" + std::string(field) + "' must be a number in " + path);
    }
    return v.get<double>();
}

std::vector<std::vector<double>> grid_field(const json& j, const char* field, int dim,
                                            const std::string& path) {
    const json& v = require_field(j, field, path);
    if (!v.is_array() || static_cast<int>(v.size()) != dim) {
        std::ostringstream os;
        os << "field '" << field << "' must be an array of " << dim << " rows in " << path;
        throw ValidationError(os.str());
    }
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(dim));
    for (const json& row : v) {
        if (!row.is_array() || static_cast<int>(row.size()) != dim) {
            std::ostringstream os;
            os << "field '" << field << "' rows must hold " << dim << " numbers in " << path;
            throw ValidationError(os.str());
        }
        std::vector<double> r;
        for (const json& cell : row) {
            if (!cell.is_number()) {
                throw ValidationError("field '" + std::string(field) +
                                      "' contains a non-number in " + path);
            }
            r.push_back(cell.get<double>());
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string reason_label(InfinityReason r) {
    switch (r) {
        case InfinityReason::None: return "none";
        case InfinityReason::KernelMismatchAtZero: return "kernel-mismatch-at-zero";
        case InfinityReason::KernelMismatchAtOne: return "kernel-mismatch-at-one";
        case InfinityReason::NotHilbertSchmidt: return "not-hilbert-schmidt";
    }
    return "none";
}

std::string entropy_cell(const EntropyValue& v) {
    return v.is_finite() ? format_double(v.value) : "inf";
}

std::string entropy_value_json(const EntropyValue& v) {
    std::ostringstream os;
    if (v.is_finite()) {
        os << "{\"value\": " << format_double(v.value) << ", \"reason\": \"none\"}";
    } else {
        os << "{\"value\": \"inf\", \"reason\": \"" << reason_label(v.reason) << "\"}";
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out.good()) {
        throw Error("cannot open file for writing: " + path);
    }
    out << content;
    if (!out.good()) {
        throw Error("write failed: " + path);
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) {
        throw ValidationError("cannot open file: " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_matrix(const std::string& path, const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw ValidationError("matrix files hold square matrices");
    }
    const int n = static_cast<int>(m.rows());
    std::ostringstream os;
    if (kind_from_extension(path) == FileKind::Json) {
        os << "{\n  \"dim\": " << n << ",\n  \"re\": [\n";
        for (int i = 0; i < n; ++i) {
            os << "    [";
            for (int j = 0; j < n; ++j) {
                os << (j ? ", " : "") << format_double(m(i, j).real());
            }
            os << (i + 1 < n ? "],\n" : "]\n");
        }
        os << "  ],\n  \"im\": [\n";
        for (int i = 0; i < n; ++i) {
            os << "    [";
            for (int j = 0; j < n; ++j) {
                os << (j ? ", " : "") << format_double(m(i, j).imag());
            }
            os << (i + 1 < n ? "],\n" : "]\n");
        }
        os << "  ]\n}\n";
    } else {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                os << (j ? "," : "") << format_double(m(i, j).real()) << ','
                   << format_double(m(i, j).imag());
            }
            os << '\n';
        }
    }
    write_text_file(path, os.str());
}

Matrix read_matrix(const std::string& path) {
    if (kind_from_extension(path) == FileKind::Json) {
        json j = parse_file(path);
        const json& dim_field = require_field(j, "dim", path);
        if (!dim_field.is_number_integer() || dim_field.get<long>() < 1) {
            throw ValidationError("field 'dim' must be a positive integer in " + path);
        }
        const int n = dim_field.get<int>();
        auto re = grid_field(j, "re", n, path);
        auto im = grid_field(j, "im", n, path);
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                m(i, k) = std::complex<double>(re[i][k], im[i][k]);
            }
        }
        return m;
    }
    std::istringstream in(read_text_file(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<double> fields;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                std::size_t used = 0;
                fields.push_back(std::stod(cell, &used));
                if (used != cell.size()) {
                    throw std::invalid_argument(cell);
                }
            } catch (const std::exception&) {
                throw ValidationError("non-numeric cell '" + cell + "' in " + path);
            }
        }
        rows.push_back(std::move(fields));
    }
    const int n = static_cast<int>(rows.size());
    if (n == 0) {
        throw ValidationError("matrix file is empty: " + path);
    }
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != 2 * n) {
            std::ostringstream os;
            os << "csv matrix needs " << 2 * n << " columns per row (re,im interleaved), got "
               << r.size() << " in " << path;
            throw ValidationError(os.str());
        }
    }
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            m(i, k) = std::complex<double>(rows[i][2 * k], rows[i][2 * k + 1]);
        }
    }
    return m;
}

void write_phi_spec(const std::string& path, const PhiSpec& spec) {
    if (!spec.operator_monotone_derivative) {
        throw ValidationError(
            "only specs with an operator monotone derivative have a measure worth storing");
    }
    for (const MeasureDensity& d : spec.mu.densities()) {
        if (d.kind != "uniform") {
            throw ValidationError("density is not a serializable primitive");
        }
    }
    std::ostringstream os;
    os << "{\n  \"name\": \"" << json_escape(spec.name) << "\",\n";
    os << "  \"a\": " << format_double(spec.a) << ",\n";
    os << "  \"b\": " << format_double(spec.b) << ",\n";
    os << "  \"c\": " << format_double(spec.c) << ",\n";
    os << "  \"phi_prime_discontinuous_at_zero\": "
       << (spec.phi_prime_discontinuous_at_zero ? "true" : "false") << ",\n";
    os << "  \"phi_prime_discontinuous_at_one\": "
       << (spec.phi_prime_discontinuous_at_one ? "true" : "false") << ",\n";
    os << "  \"measure\": {\n    \"atoms\": [";
    bool first = true;
    for (const MeasureAtom& atom : spec.mu.atoms()) {
        os << (first ? "" : ", ") << '[' << format_double(atom.lambda) << ", "
           << format_double(atom.weight) << ']';
        first = false;
    }
    os << "],\n    \"densities\": [";
    first = true;
    for (const MeasureDensity& d : spec.mu.densities()) {
        os << (first ? "" : ", ") << "{\"kind\": \"uniform\", \"lo\": " << format_double(d.lo)
           << ", \"hi\": " << format_double(d.hi) << ", \"height\": " << format_double(d.height)
           << '}';
        first = false;
    }
    os << "]\n  }\n}\n";
    write_text_file(path, os.str());
}

PhiSpec read_phi_spec(const std::string& path) {
    json j = parse_file(path);
    const json& name_field = require_field(j, "name", path);
    if (!name_field.is_string()) {
        throw ValidationError("field 'name' must be a string in " + path);
    }
    const std::string name = name_field.get<std::string>();
    const double a = number_field(j, "a", path);
    const double b = number_field(j, "b", path);
    const double c = number_field(j, "c", path);
    const json& fz = require_field(j, "phi_prime_discontinuous_at_zero", path);
    const json& fo = require_field(j, "phi_prime_discontinuous_at_one", path);
    if (!fz.is_boolean() || !fo.is_boolean()) {
        throw ValidationError("boundary flags must be booleans in " + path);
    }
    const json& measure = require_field(j, "measure", path);
    std::vector<MeasureAtom> atoms;
    for (const json& pair : require_field(measure, "atoms", path)) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
            !pair[1].is_number()) {
            throw ValidationError("field 'atoms' must hold [lambda, weight] pairs in " + path);
        }
        atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    std::vector<MeasureDensity> densities;
    for (const json& d : require_field(measure, "densities", path)) {
        const json& kind = require_field(d, "kind", path);
        if (!kind.is_string() || kind.get<std::string>() != "uniform") {
            throw ValidationError("field 'kind' must be \"uniform\" in " + path);
        }
        const double lo = number_field(d, "lo", path);
        const double hi = number_field(d, "hi", path);
        const double height = number_field(d, "height", path);
        MeasureDensity md;
        md.lo = lo;
        md.hi = hi;
        md.height = height;
        md.kind = "uniform";
        md.rho = [height](double) { return height; };
        densities.push_back(std::move(md));
    }
    ProbabilityMeasure mu(std::move(atoms), std::move(densities));
    // Two-phase build: the callables close over a frozen copy of the
    // loaded parameters and evaluate through the representation.
    PhiSpec base(
        name, a, b, c, mu, [](double) { return 0.0; }, [](double) { return 0.0; },
        fz.get<bool>(), fo.get<bool>(), true);
    auto core = std::make_shared<const PhiSpec>(base);
    PhiSpec out = base;
    out.phi = [core](double x) { return eval_phi_rep(*core, x); };
    out.phi_prime = [core](double x) { return eval_phi_prime_rep(*core, x); };
    return out;
}

std::string trace_to_json(const ConvergenceTrace& trace) {
    std::ostringstream os;
    os << "{\n  \"ranks\": [";
    for (std::size_t i = 0; i < trace.ranks.size(); ++i) {
        os << (i ? ", " : "") << trace.ranks[i];
    }
    os << "],\n  \"values\": [\n";
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
        os << "    " << entropy_value_json(trace.values[i])
           << (i + 1 < trace.values.size() ? ",\n" : "\n");
    }
    os << "  ],\n  \"limit\": " << entropy_value_json(trace.limit_value) << "\n}\n";
    return os.str();
}

std::string trace_to_csv(const ConvergenceTrace& trace) {
    std::ostringstream os;
    os << "rank,value,reason\n";
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
        os << trace.ranks[i] << ',' << entropy_cell(trace.values[i]) << ','
           << reason_label(trace.values[i].reason) << '\n';
    }
    os << "limit," << entropy_cell(trace.limit_value) << ','
       << reason_label(trace.limit_value.reason) << '\n';
    return os.str();
}

std::string trials_to_json(const TrialReport& report) {
    std::ostringstream os;
    os << "{\n  \"trials\": " << report.trials << ",\n";
    os << "  \"max_violation\": " << format_double(report.max_violation) << ",\n";
    os << "  \"inconclusive\": " << (report.inconclusive ? "true" : "false") << ",\n";
    os << "  \"violations\": [";
    for (std::size_t i = 0; i < report.violations.size(); ++i) {
        const Violation& v = report.violations[i];
        os << (i ? ",\n    " : "\n    ") << "{\"trial\": " << v.index << ", \"stream\": "
           << v.stream << ", \"magnitude\": " << format_double(v.magnitude) << '}';
    }
    os << (report.violations.empty() ? "]\n}\n" : "\n  ]\n}\n");
    return os.str();
}

std::string trials_to_csv(const TrialReport& report) {
    std::ostringstream os;
    os << "trial,value,reason\n";
    for (const Violation& v : report.violations) {
        os << v.index << ',' << format_double(v.magnitude) << ",violation\n";
    }
    return os.str();
}

}  // namespace relent
