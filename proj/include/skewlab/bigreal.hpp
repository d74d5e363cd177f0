#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <complex>
#include <string>

namespace skewlab {

using Quad = __float128;
using BigInt = mpz_class;
using BigRational = mpq_class;

// RAII wrapper over an mpfr_t with an explicit precision. Arithmetic results
// take the larger precision of the operands.
class BigReal {
 public:
  explicit BigReal(mpfr_prec_t prec = 256);
  BigReal(double v, mpfr_prec_t prec);
  BigReal(const BigInt& v, mpfr_prec_t prec);
  BigReal(const BigRational& v, mpfr_prec_t prec);
  BigReal(const std::string& decimal, mpfr_prec_t prec);
  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  Quad to_quad() const;
  std::string to_string(int digits = 40) const;

  BigReal& operator+=(const BigReal& o);
  BigReal& operator-=(const BigReal& o);
  BigReal& operator*=(const BigReal& o);
  BigReal& operator/=(const BigReal& o);
  BigReal& operator*=(const BigInt& o);
  BigReal& operator+=(const BigInt& o);
  BigReal& operator-=(const BigInt& o);

  friend BigReal operator+(BigReal a, const BigReal& b) { return a += b; }
  friend BigReal operator-(BigReal a, const BigReal& b) { return a -= b; }
  friend BigReal operator*(BigReal a, const BigReal& b) { return a *= b; }
  friend BigReal operator/(BigReal a, const BigReal& b) { return a /= b; }
  friend BigReal operator*(BigReal a, const BigInt& b) { return a *= b; }
  friend BigReal operator-(BigReal a, const BigInt& b) { return a -= b; }
  friend BigReal operator+(BigReal a, const BigInt& b) { return a += b; }
  BigReal operator-() const;

  friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_); }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  // Binary exponent e with 2^(e-1) <= |x| < 2^e; very negative for zero.
  long exponent() const;

  BigInt floor() const;
  BigInt round() const;
  // x - round(x), in [-1/2, 1/2].
  BigReal centered_frac() const;
  // x - floor(x), in [0, 1).
  BigReal frac() const;
  BigReal abs() const;

  static BigReal pi(mpfr_prec_t prec);
  static BigReal sqrt(const BigReal& x);
  static BigReal log(const BigReal& x);
  static BigReal exp(const BigReal& x);
  static void sin_cos(const BigReal& x, BigReal& s, BigReal& c);
  static BigReal sin(const BigReal& x);

 private:
  mpfr_t v_;
};

// Exact (to 106+ bits) conversion of a quad value.
BigReal from_quad(Quad v, mpfr_prec_t prec);
// Copy rounded to a new precision.
BigReal with_precision(const BigReal& v, mpfr_prec_t prec);

// log of a positive big integer, in double.
double log_big(const BigInt& n);

// Circle helpers for quad-precision phases.
Quad quad_round(Quad v);
inline Quad centered(Quad v) { return v - quad_round(v); }
inline Quad unit_interval(Quad v) {
  Quad c = centered(v);
  return c < 0 ? c + 1 : c;
}
// e(theta) = exp(2 pi i theta), reduced in quad before rounding to double.
std::complex<double> expi2pi(Quad theta);
std::complex<double> expi2pi(double theta);

// High precision complex numbers, only what the closed-form sums need.
struct BigComplex {
  BigReal re;
  BigReal im;
  explicit BigComplex(mpfr_prec_t prec = 256) : re(prec), im(prec) {}
  BigComplex(BigReal r, BigReal i) : re(std::move(r)), im(std::move(i)) {}
  BigComplex(std::complex<double> z, mpfr_prec_t prec)
      : re(z.real(), prec), im(z.imag(), prec) {}

  // exp(2 pi i theta)
  static BigComplex expi2pi(const BigReal& theta);

  BigComplex& operator+=(const BigComplex& o);
  BigComplex& operator-=(const BigComplex& o);
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b);
  friend BigComplex operator*(const BigComplex& a, const BigReal& b);
  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
};

}  // namespace skewlab
