#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "ineqcond/condition.hpp"
#include "ineqcond/experiments.hpp"
#include "ineqcond/model.hpp"
#include "ineqcond/oracles.hpp"
#include "ineqcond/precondition.hpp"

namespace ineqcond {

using Json = nlohmann::json;

/// CSV: one matrix row per line, comma-separated decimal literals, no header.
/// Rejects NaN/Inf and ragged rows.
Matrix read_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const Matrix& m);

/// JSON object {"m": int, "n": int, "data": [[row], ...]}. Rejects NaN/Inf
/// and shape mismatches.
Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);

/// Reads a matrix from a file choosing the parser by `format` ("csv", "json",
/// or "auto" to pick by extension).
Matrix read_matrix_file(const std::string& path, const std::string& format = "auto");

/// {"order": string, "S": [n reals], "P": [[m x m]], "A_hat": matrix-JSON}.
/// Round-trips losslessly; the original instance is reconstructed from the
/// factors on load.
Json record_to_json(const TransformRecord& record);
TransformRecord record_from_json(const Json& j);

/// ConditionReport schema with "inf"/"degenerate" markers for diverging or
/// undefined entries.
Json report_to_json(const ConditionReport& report);

Json oracle_to_json(const OracleResult& result);

Json sweep_to_json(const SweepReport& report);

/// Vector file: decimal literals separated by commas and/or line breaks.
Vector read_vector_file(const std::string& path);

}  // namespace ineqcond
