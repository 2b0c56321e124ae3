#pragma once

// Text form of function expressions:
//
//   expression := term (('+' | '-') term)*
//   term       := [coeff '*'] atom
//   atom       := 'poly:' float (',' float)*
//               | 'pow:omega=' float ',gamma=' float
//
// Whitespace between tokens is ignored. A leading sign on the first term is accepted.

#include "hardylab/series.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hardylab {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& what);

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Throws ParseError (with the byte offset of the problem) on malformed input or
/// gamma <= 0.
FunctionExpr parse_function(std::string_view src);

/// A finite float in decimal or scientific notation, or "inf"; throws std::invalid_argument.
double parse_exponent(std::string_view text);

} // namespace hardylab
