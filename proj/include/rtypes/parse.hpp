#pragma once

// Textual formats: the defs file ("type"/"sig" declarations) and query
// expressions. Parsing validates well-formedness; accepted definitions are
// type preserving and carry a consistent signature with at least one
// constant.

#include <string>

#include "rtypes/defs.hpp"

namespace rtypes {

// Parses a full defs document. The returned definitions are validated but
// not simplified. Throws syntax_error / semantic_error with positions.
TypeDefs parse_definitions(const std::string& text);

// Parses a parameter-free query expression over defs' constructors.
TypeExprPtr parse_type_expr(const std::string& text, const TypeDefs& defs);

}  // namespace rtypes
