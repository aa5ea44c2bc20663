#pragma once

#include <cstdint>
#include <stdexcept>

namespace jtprop {

/// Multi-zero-conscious number: a positive magnitude together with a zero
/// multiplicity. Makes products, quotients and sums total when table entries
/// can be zero: (a,i) stands for a * 0^i with the zeros tracked symbolically.
struct MzcNumber {
  double mag = 1.0;
  std::int64_t zeros = 0;
};

inline MzcNumber mzc_from_real(double x) {
  if (x < 0.0) throw std::invalid_argument("mzc_from_real: negative input");
  if (x == 0.0) return {1.0, 1};
  return {x, 0};
}

inline double mzc_to_real(const MzcNumber& m) {
  if (m.zeros < 0)
    throw std::logic_error("mzc_to_real: negative zero count (engine bug)");
  return m.zeros != 0 ? 0.0 : m.mag;
}

inline MzcNumber mzc_mul(const MzcNumber& x, const MzcNumber& y) {
  return {x.mag * y.mag, x.zeros + y.zeros};
}

inline MzcNumber mzc_div(const MzcNumber& x, const MzcNumber& y) {
  return mzc_mul(x, {1.0 / y.mag, -y.zeros});
}

/// The summand with the smaller zero count wins; magnitudes add on a tie.
inline MzcNumber mzc_add(const MzcNumber& x, const MzcNumber& y) {
  if (x.zeros < y.zeros) return x;
  if (x.zeros > y.zeros) return y;
  return {x.mag + y.mag, x.zeros};
}

inline MzcNumber operator*(const MzcNumber& x, const MzcNumber& y) { return mzc_mul(x, y); }
inline MzcNumber operator/(const MzcNumber& x, const MzcNumber& y) { return mzc_div(x, y); }
inline MzcNumber operator+(const MzcNumber& x, const MzcNumber& y) { return mzc_add(x, y); }

}  // namespace jtprop
