// Complex-number literals for flags and config files ("a+bi", "a-bi", "bi",
// "a"; whitespace-free) and lossless float formatting for CSV output.
#pragma once

#include <string>

#include "nhkc/polynomial.hpp"

namespace nhkc {

/// Parses "a+bi" / "a-bi" / "bi" / "a" (e.g. "2+1i", "-1.732", "3i", "-i").
/// Throws std::invalid_argument on malformed input.
Complex parse_complex(const std::string& text);

/// Formats with 17 significant digits in the same literal syntax.
std::string format_complex(Complex z);

/// One float with 17 significant digits (lossless double round-trip).
std::string format_double(double x);

}  // namespace nhkc
