#include "nhkc/complex_io.hpp"

#include <cstdio>
#include <cstdlib>

namespace nhkc {

namespace {

// parses one signed float starting at pos; returns the value and advances pos
double parse_real_part(const std::string& s, size_t& pos) {
  const char* start = s.c_str() + pos;
  char* end = nullptr;
  const double v = std::strtod(start, &end);
  if (end == start) throw std::invalid_argument("parse_complex: malformed number in '" + s + "'");
  pos += static_cast<size_t>(end - start);
  return v;
}

}  // namespace

Complex parse_complex(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_complex: empty string");
  for (char c : text)
    if (std::isspace(static_cast<unsigned char>(c)))
      throw std::invalid_argument("parse_complex: whitespace in '" + text + "'");

  size_t pos = 0;
  // bare "i", "+i", "-i"
  auto bare_i = [&](size_t at) {
    return at + 1 == text.size() && text[at] == 'i';
  };
  if (bare_i(0)) return Complex{0.0, 1.0};
  if (text.size() == 2 && (text[0] == '+' || text[0] == '-') && text[1] == 'i')
    return Complex{0.0, text[0] == '-' ? -1.0 : 1.0};

  const double first = parse_real_part(text, pos);
  if (pos == text.size()) return Complex{first, 0.0};  // pure real
  if (text[pos] == 'i') {
    if (pos + 1 != text.size())
      throw std::invalid_argument("parse_complex: trailing characters in '" + text + "'");
    return Complex{0.0, first};  // pure imaginary "bi"
  }
  // "a+bi" / "a-bi"; the sign belongs to the imaginary part
  if (text[pos] != '+' && text[pos] != '-')
    throw std::invalid_argument("parse_complex: expected '+', '-' or 'i' in '" + text + "'");
  if (pos + 2 == text.size() && text[pos + 1] == 'i')
    return Complex{first, text[pos] == '-' ? -1.0 : 1.0};  // "a+i" / "a-i"
  const double second = parse_real_part(text, pos);
  if (pos + 1 != text.size() || text[pos] != 'i')
    throw std::invalid_argument("parse_complex: expected trailing 'i' in '" + text + "'");
  return Complex{first, second};
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_double(z.real());
  if (z.real() == 0.0) return format_double(z.imag()) + "i";
  const std::string im = format_double(z.imag());
  return format_double(z.real()) + (im[0] == '-' ? "" : "+") + im + "i";
}

}  // namespace nhkc
