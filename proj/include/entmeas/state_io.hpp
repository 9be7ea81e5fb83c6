#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "entmeas/state.hpp"

namespace entmeas {

/// Malformed JSON text; line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

using StateInput = std::variant<DensityOperator, PureState>;

/// Parses JSON text, translating parser errors into ParseError with a
/// line/column position.
nlohmann::json parse_json_text(const std::string& text);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// {"dims":[...], "matrix":[[[re,im],...],...]} or {"dims":[...], "vector":[[re,im],...]}.
/// Type invariants are enforced; violations throw ValidationError.
StateInput state_from_json(const nlohmann::json& j);
StateInput load_state(const std::filesystem::path& path);

DensityOperator to_density(const StateInput& s);

nlohmann::json to_json(const DensityOperator& rho);
nlohmann::json to_json(const PureState& psi);

nlohmann::json complex_matrix_to_json(const CMatrix& m);
CMatrix complex_matrix_from_json(const nlohmann::json& j);
nlohmann::json complex_vector_to_json(const CVector& v);
CVector complex_vector_from_json(const nlohmann::json& j);

}  // namespace entmeas
