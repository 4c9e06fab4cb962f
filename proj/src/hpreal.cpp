#include "nlbvp/hpreal.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace nlbvp {

namespace {

constexpr double kLog2Of10 = 3.321928094887362;

mpfr_prec_t bits_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * kLog2Of10)) + 4;
}

mpfr_prec_t max_prec(const mpfr_t a, const mpfr_t b) {
  mpfr_prec_t pa = mpfr_get_prec(a), pb = mpfr_get_prec(b);
  return pa > pb ? pa : pb;
}

}  // namespace

PrecisionConfig::PrecisionConfig(int d) : digits(d) {
  if (d < 16) throw std::domain_error("PrecisionConfig: digits must be >= 16");
}

HPReal::HPReal(mpfr_prec_t bits, int) { mpfr_init2(v_, bits); }

HPReal::HPReal() {
  mpfr_init2(v_, 64);
  mpfr_set_zero(v_, 1);
}

HPReal::HPReal(int x) {
  mpfr_init2(v_, 64);
  mpfr_set_si(v_, x, MPFR_RNDN);
}

HPReal::HPReal(long x) {
  mpfr_init2(v_, 64);
  mpfr_set_si(v_, x, MPFR_RNDN);
}

HPReal::HPReal(double x) {
  mpfr_init2(v_, 64);
  mpfr_set_d(v_, x, MPFR_RNDN);
}

HPReal::HPReal(const std::string& decimal, const PrecisionConfig& cfg) {
  mpfr_init2(v_, bits_for_digits(cfg.digits));
  if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0)
    throw std::invalid_argument("HPReal: cannot parse decimal string '" + decimal + "'");
}

HPReal::HPReal(const std::string& decimal, int digits)
    : HPReal(decimal, PrecisionConfig(digits)) {}

HPReal::HPReal(const HPReal& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

HPReal::HPReal(HPReal&& o) noexcept {
  mpfr_init2(v_, 64);
  mpfr_swap(v_, o.v_);
}

HPReal& HPReal::operator=(const HPReal& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

HPReal& HPReal::operator=(HPReal&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

HPReal::~HPReal() { mpfr_clear(v_); }

HPReal HPReal::with_digits(long value, int digits) {
  HPReal r(bits_for_digits(digits), 0);
  mpfr_set_si(r.v_, value, MPFR_RNDN);
  return r;
}

HPReal HPReal::pi(int digits) {
  HPReal r(bits_for_digits(digits), 0);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

int HPReal::precision_bits() const { return static_cast<int>(mpfr_get_prec(v_)); }

int HPReal::precision_digits() const {
  return static_cast<int>(std::floor((precision_bits() - 4) / kLog2Of10));
}

double HPReal::to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

long HPReal::to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

bool HPReal::is_zero() const { return mpfr_zero_p(v_) != 0; }

bool HPReal::is_negative() const { return mpfr_sgn(v_) < 0; }

bool HPReal::finite() const { return mpfr_number_p(v_) != 0; }

int HPReal::sign() const {
  int s = mpfr_sgn(v_);
  return (s > 0) - (s < 0);
}

std::string HPReal::str() const {
  // n = 0 asks MPFR for enough digits to recover the value exactly.
  return str(0);
}

std::string HPReal::str(int ndigits) const {
  if (!finite()) return mpfr_nan_p(v_) ? "nan" : (mpfr_sgn(v_) > 0 ? "inf" : "-inf");
  if (is_zero()) return "0";
  mpfr_exp_t e;
  char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(ndigits), v_, MPFR_RNDN);
  std::string digits(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (digits[0] == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  // strip trailing zeros (keep at least one digit)
  size_t last = digits.find_last_not_of('0');
  digits.erase(last + 1);
  // scientific form d.ddd...e<exp-1>; exponent e is the position of the
  // radix point relative to the first digit
  std::string out = sign + digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  out += "e" + std::to_string(static_cast<long>(e) - 1);
  return out;
}

HPReal operator+(const HPReal& a, const HPReal& b) {
  HPReal r(max_prec(a.v_, b.v_), 0);
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

HPReal operator-(const HPReal& a, const HPReal& b) {
  HPReal r(max_prec(a.v_, b.v_), 0);
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

HPReal operator*(const HPReal& a, const HPReal& b) {
  HPReal r(max_prec(a.v_, b.v_), 0);
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

HPReal operator/(const HPReal& a, const HPReal& b) {
  if (b.is_zero()) throw std::domain_error("HPReal: division by zero");
  HPReal r(max_prec(a.v_, b.v_), 0);
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

HPReal operator-(const HPReal& a) {
  HPReal r(mpfr_get_prec(a.v_), 0);
  mpfr_neg(r.v_, a.v_, MPFR_RNDN);
  return r;
}

HPReal& HPReal::operator+=(const HPReal& b) { return *this = *this + b; }
HPReal& HPReal::operator-=(const HPReal& b) { return *this = *this - b; }
HPReal& HPReal::operator*=(const HPReal& b) { return *this = *this * b; }
HPReal& HPReal::operator/=(const HPReal& b) { return *this = *this / b; }

bool operator==(const HPReal& a, const HPReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
bool operator!=(const HPReal& a, const HPReal& b) { return !(a == b); }
bool operator<(const HPReal& a, const HPReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
bool operator<=(const HPReal& a, const HPReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
bool operator>(const HPReal& a, const HPReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
bool operator>=(const HPReal& a, const HPReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

HPReal abs(const HPReal& x) {
  HPReal r(mpfr_get_prec(x.v_), 0);
  mpfr_abs(r.v_, x.v_, MPFR_RNDN);
  return r;
}

HPReal sqrt(const HPReal& x) {
  if (x.is_negative()) throw std::domain_error("HPReal: sqrt of negative value");
  HPReal r(mpfr_get_prec(x.v_), 0);
  mpfr_sqrt(r.v_, x.v_, MPFR_RNDN);
  return r;
}

HPReal exp(const HPReal& x) {
  HPReal r(mpfr_get_prec(x.v_), 0);
  mpfr_exp(r.v_, x.v_, MPFR_RNDN);
  return r;
}

HPReal expm1(const HPReal& x) {
  HPReal r(mpfr_get_prec(x.v_), 0);
  mpfr_expm1(r.v_, x.v_, MPFR_RNDN);
  return r;
}

HPReal log(const HPReal& x) {
  if (x.sign() <= 0) throw std::domain_error("HPReal: log domain requires x > 0");
  HPReal r(mpfr_get_prec(x.v_), 0);
  mpfr_log(r.v_, x.v_, MPFR_RNDN);
  return r;
}

HPReal log1p(const HPReal& x) {
  if (x <= HPReal(-1)) throw std::domain_error("HPReal: log1p domain requires x > -1");
  HPReal r(mpfr_get_prec(x.v_), 0);
  mpfr_log1p(r.v_, x.v_, MPFR_RNDN);
  return r;
}

HPReal tanh(const HPReal& x) {
  HPReal r(mpfr_get_prec(x.v_), 0);
  mpfr_tanh(r.v_, x.v_, MPFR_RNDN);
  return r;
}

HPReal sinh(const HPReal& x) {
  HPReal r(mpfr_get_prec(x.v_), 0);
  mpfr_sinh(r.v_, x.v_, MPFR_RNDN);
  return r;
}

HPReal cosh(const HPReal& x) {
  HPReal r(mpfr_get_prec(x.v_), 0);
  mpfr_cosh(r.v_, x.v_, MPFR_RNDN);
  return r;
}

HPReal sech(const HPReal& x) {
  HPReal r(mpfr_get_prec(x.v_), 0);
  mpfr_sech(r.v_, x.v_, MPFR_RNDN);
  return r;
}

HPReal atanh(const HPReal& x) {
  if (abs(x) >= HPReal(1)) throw std::domain_error("HPReal: atanh domain requires |x| < 1");
  HPReal r(mpfr_get_prec(x.v_), 0);
  mpfr_atanh(r.v_, x.v_, MPFR_RNDN);
  return r;
}

HPReal pow(const HPReal& x, long n) {
  HPReal r(mpfr_get_prec(x.v_), 0);
  mpfr_pow_si(r.v_, x.v_, n, MPFR_RNDN);
  return r;
}

HPReal floor(const HPReal& x) {
  HPReal r(mpfr_get_prec(x.v_), 0);
  mpfr_floor(r.v_, x.v_);
  return r;
}

HPReal max(const HPReal& a, const HPReal& b) { return a >= b ? a : b; }
HPReal min(const HPReal& a, const HPReal& b) { return a <= b ? a : b; }

std::ostream& operator<<(std::ostream& os, const HPReal& x) { return os << x.str(); }

}  // namespace nlbvp
