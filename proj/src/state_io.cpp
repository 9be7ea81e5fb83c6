#include "entmeas/state_io.hpp"

#include <fstream>
#include <sstream>

namespace entmeas {

namespace {

Complex complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ArgumentError("expected a complex number written as [re, im], got " + j.dump());
}

Dims dims_from_json(const nlohmann::json& j) {
  if (!j.contains("dims") || !j["dims"].is_array())
    throw ArgumentError("state file: missing \"dims\" array");
  Dims dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer()) throw ArgumentError("state file: dims entries must be integers");
    dims.push_back(d.get<int>());
  }
  return dims;
}

}  // namespace

nlohmann::json parse_json_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line = 1, column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream os;
    os << "malformed JSON at line " << line << ", column " << column << ": " << e.what();
    throw ParseError(os.str(), line, column);
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str());
}

CMatrix complex_matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ArgumentError("matrix must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ArgumentError("matrix rows must all have the same length");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

CVector complex_vector_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ArgumentError("vector must be a nonempty array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return v;
}

nlohmann::json complex_matrix_to_json(const CMatrix& m) {
  auto out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    out.push_back(std::move(row));
  }
  return out;
}

nlohmann::json complex_vector_to_json(const CVector& v) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

StateInput state_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ArgumentError("state file: top level must be an object");
  Dims dims = dims_from_json(j);
  const bool has_matrix = j.contains("matrix");
  const bool has_vector = j.contains("vector");
  if (has_matrix == has_vector)
    throw ArgumentError("state file: exactly one of \"matrix\" or \"vector\" is required");
  if (has_matrix) return DensityOperator(std::move(dims), complex_matrix_from_json(j["matrix"]));
  return PureState(std::move(dims), complex_vector_from_json(j["vector"]));
}

StateInput load_state(const std::filesystem::path& path) { return state_from_json(read_json_file(path)); }

DensityOperator to_density(const StateInput& s) {
  if (const auto* psi = std::get_if<PureState>(&s)) return DensityOperator::from_pure(*psi);
  return std::get<DensityOperator>(s);
}

nlohmann::json to_json(const DensityOperator& rho) {
  return {{"dims", rho.dims()}, {"matrix", complex_matrix_to_json(rho.matrix())}};
}

nlohmann::json to_json(const PureState& psi) {
  return {{"dims", psi.dims()}, {"vector", complex_vector_to_json(psi.amplitudes())}};
}

}  // namespace entmeas
