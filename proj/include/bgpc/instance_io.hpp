#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "bgpc/instances.hpp"

namespace bgpc {

inline constexpr int kInstanceSchemaVersion = 1;

// Complex numbers are [re, im]; matrices are arrays of rows.
nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const CVector& v);
CVector vector_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const CMatrix& M);
CMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json basis_to_json(const BasisDescriptor& b);
BasisDescriptor basis_from_json(const nlohmann::json& j);

/// { schema_version, model, n, m_or_s, N, basis: {kind, params}, lambda0, X0,
///   [support], seed, rng, Y }
nlohmann::json instance_to_json(const ProblemInstance& inst);

/// Y is recomputed from (lambda0, basis, X0); a stored Y must agree with it.
/// Throws SchemaError on malformed input.
ProblemInstance instance_from_json(const nlohmann::json& j);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const nlohmann::json& j);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

void save_instance(const ProblemInstance& inst, const std::filesystem::path& path);
ProblemInstance load_instance(const std::filesystem::path& path);

}  // namespace bgpc
