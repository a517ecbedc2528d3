#pragma once

// JSON helpers shared by the CLI and the Python bindings.

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "polyhom/algebra.hpp"

namespace polyhom {

/// Malformed JSON text, located by 1-based line and column.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error(what), line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

nlohmann::json parse_json_text(const std::string& text);

/// Throws std::runtime_error when the file cannot be read.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// {"invariant_factors": [...], "free_rank": k, "order": |G| (finite only), "name": "Z/2 + Z/4"}
nlohmann::json group_to_json(const FinAbelianGroup& G);
FinAbelianGroup group_from_json(const nlohmann::json& j);

nlohmann::json element_to_json(const GroupElement& g);

/// {"rows": r, "cols": c, "data": [row-major integers]}
nlohmann::json matrix_to_json(const IntMatrix& M);
IntMatrix matrix_from_json(const nlohmann::json& j);

/// Parses a comma-separated list of cyclic orders, e.g. "2,4" or "6".
FinAbelianGroup parse_group_spec(const std::string& spec);

}  // namespace polyhom
