#include "json_matrix.hpp"

#include <fstream>
#include <sstream>

#include "rmpc/errors.hpp"

namespace rmpc::detail {

Json to_json(const Matrix& M) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  if (!j[0].is_array()) throw FormatError(what + ": row 0 is not an array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array()) {
      throw FormatError(what + ": row " + std::to_string(i) + " is not an array");
    }
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw FormatError(what + ": row " + std::to_string(i) + " has " +
                        std::to_string(row.size()) + " columns, expected " +
                        std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_number()) {
        throw FormatError(what + ": entry (" + std::to_string(i) + ", " + std::to_string(c) +
                          ") is not a number");
      }
      M(i, c) = e.get<double>();
    }
  }
  return M;
}

Vector vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw FormatError(what + ": entry " + std::to_string(i) + " is not a number");
    }
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

}  // namespace rmpc::detail
