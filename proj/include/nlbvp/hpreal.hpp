#pragma once

#include <mpfr.h>

#include <string>
#include <iosfwd>

namespace nlbvp {

// Working precision for extended-precision values, in decimal digits.
struct PrecisionConfig {
  int digits;
  explicit PrecisionConfig(int d = 50);  // throws std::domain_error if d < 16
};

// Arbitrary-precision real backed by MPFR. Precision travels with the value:
// binary operations produce results at the wider of the two operand
// precisions, and there is no global rounding/precision state. Values are
// immutable after construction apart from assignment, so they can be shared
// freely across threads.
class HPReal {
 public:
  HPReal();
  HPReal(int x);     // NOLINT: implicit by design, exact
  HPReal(long x);    // NOLINT: implicit, exact
  HPReal(double x);  // NOLINT: implicit, exact (53-bit payload)
  HPReal(const std::string& decimal, const PrecisionConfig& cfg);
  HPReal(const std::string& decimal, int digits);

  HPReal(const HPReal& o);
  HPReal(HPReal&& o) noexcept;
  HPReal& operator=(const HPReal& o);
  HPReal& operator=(HPReal&& o) noexcept;
  ~HPReal();

  static HPReal with_digits(long value, int digits);
  static HPReal pi(int digits);

  int precision_bits() const;
  int precision_digits() const;

  double to_double() const;
  long to_long() const;
  bool is_zero() const;
  bool is_negative() const;
  bool finite() const;
  int sign() const;  // -1, 0, +1

  // Decimal serialization; str() emits enough digits to reparse exactly.
  std::string str() const;
  std::string str(int ndigits) const;

  friend HPReal operator+(const HPReal& a, const HPReal& b);
  friend HPReal operator-(const HPReal& a, const HPReal& b);
  friend HPReal operator*(const HPReal& a, const HPReal& b);
  friend HPReal operator/(const HPReal& a, const HPReal& b);  // throws on /0
  friend HPReal operator-(const HPReal& a);

  HPReal& operator+=(const HPReal& b);
  HPReal& operator-=(const HPReal& b);
  HPReal& operator*=(const HPReal& b);
  HPReal& operator/=(const HPReal& b);

  friend bool operator==(const HPReal& a, const HPReal& b);
  friend bool operator!=(const HPReal& a, const HPReal& b);
  friend bool operator<(const HPReal& a, const HPReal& b);
  friend bool operator<=(const HPReal& a, const HPReal& b);
  friend bool operator>(const HPReal& a, const HPReal& b);
  friend bool operator>=(const HPReal& a, const HPReal& b);

  friend HPReal abs(const HPReal& x);
  friend HPReal sqrt(const HPReal& x);   // x >= 0
  friend HPReal exp(const HPReal& x);
  friend HPReal expm1(const HPReal& x);
  friend HPReal log(const HPReal& x);    // x > 0
  friend HPReal log1p(const HPReal& x);  // x > -1
  friend HPReal tanh(const HPReal& x);
  friend HPReal sinh(const HPReal& x);
  friend HPReal cosh(const HPReal& x);
  friend HPReal sech(const HPReal& x);
  friend HPReal atanh(const HPReal& x);  // |x| < 1
  friend HPReal pow(const HPReal& x, long n);
  friend HPReal floor(const HPReal& x);
  friend HPReal max(const HPReal& a, const HPReal& b);
  friend HPReal min(const HPReal& a, const HPReal& b);
  friend bool isfinite(const HPReal& x) { return x.finite(); }

  friend std::ostream& operator<<(std::ostream& os, const HPReal& x);

 private:
  explicit HPReal(mpfr_prec_t bits, int /*tag*/);
  mpfr_t v_;
};

}  // namespace nlbvp
