#pragma once

#include "guided/common.hpp"
#include "guided/graph.hpp"
#include "guided/projector.hpp"
#include "guided/reconstruction.hpp"
#include "guided/solvers.hpp"
#include "guided/subspace.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace guided {

using Json = nlohmann::ordered_json;

// CSV: first line "# dim=<rows>", then one row per line, comma-separated.
void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_vector_csv(std::ostream& out, const Vector& v);
Matrix read_matrix_csv(std::istream& in);
Vector read_vector_csv(std::istream& in);
Matrix read_matrix_csv_file(const std::string& path);
Vector read_vector_csv_file(const std::string& path);
std::string matrix_csv(const Matrix& m);
std::string vector_csv(const Vector& v);

// {"repr": ..., "dim": n, "data": ...}; mask indices are 1-based.
Json projector_to_json(const Projector& p);
Projector projector_from_json(const Json& j);

Json to_json(const Vector& v);
Json to_json(const AngleReport& a);
Json to_json(const SolveResult& s);
Json to_json(const ReconstructionResult& r);
Json to_json(const BoundReport& b);
Json to_json(const UniquenessReport& u);

/// "iter,relres" header then one line per recorded residual, iter from 1.
std::string residual_history_csv(const SolveResult& s);

/// Writes to a temporary file next to `path`, then renames over it.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace guided
