#pragma once

#include <string>

#include "relent/entropy.hpp"
#include "relent/lab.hpp"

namespace relent {

// Decimal text with 17 significant digits; parses back to the same bits.
// Non-finite values map to "inf", "-inf" and "nan".
std::string format_double(double v);

// Stable lowercase tokens for the infinity reasons; "none" when finite.
std::string reason_label(InfinityReason r);

// The value as report text: the number, or "inf".
std::string entropy_cell(const EntropyValue& v);

// {"value": <number or "inf">, "reason": "<label>"}
std::string entropy_value_json(const EntropyValue& v);

// Matrix files. JSON carries {"dim": n, "re": [[...]], "im": [[...]]};
// CSV interleaves real and imaginary parts column by column, one matrix
// row per line. write_matrix and read_matrix dispatch on the .json or
// .csv extension. Both formats round-trip bit exactly.
void write_matrix(const std::string& path, const Matrix& m);
Matrix read_matrix(const std::string& path);

// Derivative-representation files: name, the three coefficients, the two
// boundary flags and the measure (atoms as [lambda, weight] pairs,
// densities as named primitives; only "uniform" exists). Closed-form
// callables cannot travel through a file, so a loaded spec evaluates phi
// and phi' through the measure representation; writing a spec without the
// operator monotone flag is refused because such a spec has no faithful
// representation to store.
void write_phi_spec(const std::string& path, const PhiSpec& spec);
PhiSpec read_phi_spec(const std::string& path);

// Report renderings. JSON is hand-assembled with a fixed key order and
// format_double for every number, so identical inputs produce identical
// bytes. The CSV schemas are
//   trace:  rank,value,reason      (one row per rank, then a "limit" row)
//   trials: trial,value,reason     (one row per recorded violation)
std::string trace_to_json(const ConvergenceTrace& trace);
std::string trace_to_csv(const ConvergenceTrace& trace);
std::string trials_to_json(const TrialReport& report);
std::string trials_to_csv(const TrialReport& report);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace relent
