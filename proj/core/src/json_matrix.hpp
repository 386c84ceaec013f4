#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rmpc/types.hpp"

namespace rmpc::detail {

using Json = nlohmann::json;

Json to_json(const Matrix& M);
Json to_json(const Vector& v);

/// Reads a row-major array of arrays; `what` names the field in diagnostics.
Matrix matrix_from_json(const Json& j, const std::string& what);
Vector vector_from_json(const Json& j, const std::string& what);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rmpc::detail
