#include "skewlab/bigreal.hpp"

#include <cmath>
#include <vector>

namespace skewlab {

namespace {
mpfr_prec_t max_prec(const BigReal& a, const BigReal& b) {
  return std::max(a.precision(), b.precision());
}
}  // namespace

BigReal::BigReal(mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_zero(v_, 1);
}

BigReal::BigReal(double v, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_d(v_, v, MPFR_RNDN);
}

BigReal::BigReal(const BigInt& v, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

BigReal::BigReal(const BigRational& v, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}

BigReal::BigReal(const std::string& decimal, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN);
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(v_, other.precision());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept {
  mpfr_init2(v_, other.precision());
  mpfr_swap(v_, other.v_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(v_); }

BigReal from_quad(Quad v, mpfr_prec_t prec) {
  double hi = (double)v;
  Quad r = v - (Quad)hi;
  double mid = (double)r;
  double lo = (double)(r - (Quad)mid);
  BigReal out(hi, prec);
  out += BigReal(mid, prec);
  out += BigReal(lo, prec);
  return out;
}

BigReal with_precision(const BigReal& v, mpfr_prec_t prec) {
  BigReal out(prec);
  mpfr_set(out.get(), v.get(), MPFR_RNDN);
  return out;
}

Quad BigReal::to_quad() const {
  // Two doubles carry 106 bits, enough for the quad mantissa in practice.
  double hi = mpfr_get_d(v_, MPFR_RNDN);
  mpfr_t rest;
  mpfr_init2(rest, precision());
  mpfr_sub_d(rest, v_, hi, MPFR_RNDN);
  double mid = mpfr_get_d(rest, MPFR_RNDN);
  mpfr_sub_d(rest, rest, mid, MPFR_RNDN);
  double lo = mpfr_get_d(rest, MPFR_RNDN);
  mpfr_clear(rest);
  return (Quad)hi + (Quad)mid + (Quad)lo;
}

std::string BigReal::to_string(int digits) const {
  std::vector<char> buf(digits + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return buf.data();
}

#define SKEWLAB_BINOP(op, fn)                                 \
  BigReal& BigReal::operator op(const BigReal& o) {           \
    mpfr_prec_t p = max_prec(*this, o);                       \
    if (p > precision()) mpfr_prec_round(v_, p, MPFR_RNDN);   \
    fn(v_, v_, o.v_, MPFR_RNDN);                              \
    return *this;                                             \
  }
SKEWLAB_BINOP(+=, mpfr_add)
SKEWLAB_BINOP(-=, mpfr_sub)
SKEWLAB_BINOP(*=, mpfr_mul)
SKEWLAB_BINOP(/=, mpfr_div)
#undef SKEWLAB_BINOP

BigReal& BigReal::operator*=(const BigInt& o) {
  mpfr_mul_z(v_, v_, o.get_mpz_t(), MPFR_RNDN);
  return *this;
}
BigReal& BigReal::operator+=(const BigInt& o) {
  mpfr_add_z(v_, v_, o.get_mpz_t(), MPFR_RNDN);
  return *this;
}
BigReal& BigReal::operator-=(const BigInt& o) {
  mpfr_sub_z(v_, v_, o.get_mpz_t(), MPFR_RNDN);
  return *this;
}

BigReal BigReal::operator-() const {
  BigReal r(*this);
  mpfr_neg(r.v_, r.v_, MPFR_RNDN);
  return r;
}

long BigReal::exponent() const {
  if (mpfr_zero_p(v_)) return -(1L << 40);
  return mpfr_get_exp(v_);
}

BigInt BigReal::floor() const {
  BigInt r;
  mpfr_get_z(r.get_mpz_t(), v_, MPFR_RNDD);
  return r;
}

BigInt BigReal::round() const {
  BigReal t(*this);
  mpfr_t half;
  mpfr_init2(half, 8);
  mpfr_set_d(half, 0.5, MPFR_RNDN);
  mpfr_add(t.v_, t.v_, half, MPFR_RNDN);
  mpfr_clear(half);
  return t.floor();
}

BigReal BigReal::centered_frac() const {
  BigReal r(*this);
  r -= round();
  return r;
}

BigReal BigReal::frac() const {
  BigReal r(*this);
  mpfr_frac(r.v_, v_, MPFR_RNDN);
  if (r.sign() < 0) mpfr_add_ui(r.v_, r.v_, 1, MPFR_RNDN);
  return r;
}

BigReal BigReal::abs() const {
  BigReal r(*this);
  mpfr_abs(r.v_, r.v_, MPFR_RNDN);
  return r;
}

BigReal BigReal::pi(mpfr_prec_t prec) {
  BigReal r(prec);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

BigReal BigReal::sqrt(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_sqrt(r.v_, x.v_, MPFR_RNDN);
  return r;
}

BigReal BigReal::log(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_log(r.v_, x.v_, MPFR_RNDN);
  return r;
}

BigReal BigReal::exp(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_exp(r.v_, x.v_, MPFR_RNDN);
  return r;
}

void BigReal::sin_cos(const BigReal& x, BigReal& s, BigReal& c) {
  mpfr_set_prec(s.v_, x.precision());
  mpfr_set_prec(c.v_, x.precision());
  mpfr_sin_cos(s.v_, c.v_, x.v_, MPFR_RNDN);
}

BigReal BigReal::sin(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_sin(r.v_, x.v_, MPFR_RNDN);
  return r;
}

double log_big(const BigInt& n) {
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, n.get_mpz_t());
  return std::log(mant) + exp2 * std::log(2.0);
}

Quad quad_round(Quad v) {
  // floor via conversion is exact for |v| < 2^63, which covers every phase
  // we reduce (callers keep products below that).
  Quad shifted = v + (Quad)0.5;
  long long f = (long long)shifted;
  if ((Quad)f > shifted) --f;
  return (Quad)f;
}

std::complex<double> expi2pi(Quad theta) {
  double t = (double)centered(theta);
  return std::polar(1.0, 2.0 * M_PI * t);
}

std::complex<double> expi2pi(double theta) {
  double t = theta - std::round(theta);
  return std::polar(1.0, 2.0 * M_PI * t);
}

BigComplex BigComplex::expi2pi(const BigReal& theta) {
  BigReal t = theta.centered_frac();
  BigReal arg = BigReal::pi(t.precision());
  arg *= t;
  arg *= BigInt(2);
  BigReal s(t.precision()), c(t.precision());
  BigReal::sin_cos(arg, s, c);
  return BigComplex(std::move(c), std::move(s));
}

BigComplex& BigComplex::operator+=(const BigComplex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

BigComplex operator*(const BigComplex& a, const BigComplex& b) {
  BigReal r = a.re * b.re - a.im * b.im;
  BigReal i = a.re * b.im + a.im * b.re;
  return BigComplex(std::move(r), std::move(i));
}

BigComplex operator*(const BigComplex& a, const BigReal& b) {
  return BigComplex(a.re * b, a.im * b);
}

}  // namespace skewlab
