#ifndef GOF_CSV_HPP_
#define GOF_CSV_HPP_

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

// Locale-independent numeric formatting for CSV output: '.' decimal
// separator, 12 significant digits, stable across runs for golden diffs.

namespace gof {

inline std::string fmt_num(double v, int digits = 12) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

inline std::ostream& put_num(std::ostream& os, double v, int digits = 12) {
  return os << fmt_num(v, digits);
}

}  // namespace gof

#endif  // GOF_CSV_HPP_
