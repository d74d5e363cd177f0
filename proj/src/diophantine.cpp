#include "skewlab/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skewlab/errors.hpp"

namespace skewlab {

double AnalysisParams::tau_from(double tau_prime) {
  return 0.5 * std::min(tau_prime * tau_prime, tau_prime / 8.0);
}

AnalysisParams AnalysisParams::make(double tau_prime, double delta, double eta,
                                    double epsilon, double xi, double A, double B) {
  if (!(tau_prime > 0.0 && tau_prime < 0.1))
    throw InvalidInput("tau_prime must lie in (0, 1/10)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
  if (!(eta > 0 && epsilon > 0 && xi > 0 && A > 0 && B > 0))
    throw InvalidInput("eta, epsilon, xi, A, B must be positive");
  AnalysisParams p;
  p.tau_prime = tau_prime;
  p.tau = tau_from(tau_prime);
  p.delta = delta;
  p.eta = eta;
  p.epsilon = epsilon;
  p.xi = xi;
  p.A = A;
  p.B = B;
  return p;
}

ContinuedFraction::ContinuedFraction(std::vector<BigInt> quotients, BigReal value,
                                     BigReal value_error) {
  auto d = std::make_shared<Data>(Data{std::move(quotients), {}, {}, std::move(value),
                                       std::move(value_error)});
  d->p = {BigInt(1), BigInt(0)};
  d->q = {BigInt(0), BigInt(1)};
  for (const BigInt& a : d->quotients) {
    std::size_t k = d->p.size();
    d->p.push_back(a * d->p[k - 1] + d->p[k - 2]);
    d->q.push_back(a * d->q[k - 1] + d->q[k - 2]);
  }
  d->alpha_quad = d->value.to_quad();
  d_ = std::move(d);
}

const BigInt& ContinuedFraction::p(long k) const {
  if (k < -1 || k > depth()) throw RangeError("convergent index " + std::to_string(k) +
                                              " outside computed depth");
  return d_->p[k + 1];
}

const BigInt& ContinuedFraction::q(long k) const {
  if (k < -1 || k > depth()) throw RangeError("convergent index " + std::to_string(k) +
                                              " outside computed depth");
  return d_->q[k + 1];
}

BigReal ContinuedFraction::phase_error(const BigInt& n) const {
  BigReal e(d_->error);
  BigReal ulp(1.0, 64);
  mpfr_mul_2si(ulp.get(), ulp.get(), -(long)precision() + 2, MPFR_RNDU);
  e += ulp;
  BigInt an = abs(n);
  if (an == 0) return BigReal(64);
  e *= an;
  return e;
}

BigReal ContinuedFraction::phase(const BigInt& n) const {
  BigReal t(d_->value);
  t *= n;
  BigReal c = t.centered_frac();
  if (n == 0) return c;
  BigReal err = phase_error(n);
  // Require about 40 correct bits relative to the result.
  BigReal scaled = c.abs();
  mpfr_mul_2si(scaled.get(), scaled.get(), -40, MPFR_RNDN);
  if (c.is_zero() || err > scaled) {
    throw PrecisionError("n*alpha not resolved at " + std::to_string(precision()) +
                             " bits (n has " +
                             std::to_string(mpz_sizeinbase(n.get_mpz_t(), 2)) + " bits)",
                         last_reliable_index());
  }
  return c;
}

BigReal ContinuedFraction::offset(long k) const {
  BigReal t(d_->value);
  t *= q(k);
  t -= p(k);
  return t;
}

long ContinuedFraction::last_reliable_index() const {
  long best = 0;
  for (long k = 1; k <= depth(); ++k) {
    BigReal off = offset(k).abs();
    BigReal err = phase_error(q(k));
    mpfr_mul_2si(off.get(), off.get(), -40, MPFR_RNDN);
    if (off.is_zero() || err > off) break;
    best = k;
  }
  return best;
}

long ContinuedFraction::index_of_denominator(const BigInt& n) const {
  for (long k = 0; k <= depth(); ++k)
    if (q(k) == n) return k;
  return -1;
}

ContinuedFraction cf_from_quotients(const std::vector<BigInt>& quotients, long depth,
                                    mpfr_prec_t prec) {
  if (quotients.empty()) throw InvalidInput("empty quotient list");
  if (depth < 1 || depth > (long)quotients.size())
    throw InvalidInput("depth must lie in [1, number of quotients]");
  for (const BigInt& a : quotients)
    if (a < 1) throw InvalidInput("partial quotients must be positive integers");
  std::vector<BigInt> used(quotients.begin(), quotients.begin() + depth);

  BigInt p0 = 1, q0 = 0, p1 = 0, q1 = 1;
  for (const BigInt& a : used) {
    BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
  }
  // Complete quotient after the prefix is the golden ratio phi.
  BigReal phi = BigReal::sqrt(BigReal(5.0, prec));
  phi += BigInt(1);
  mpfr_div_2ui(phi.get(), phi.get(), 1, MPFR_RNDN);
  BigReal num = phi * p1 + BigReal(p0, prec);
  BigReal den = phi * q1 + BigReal(q0, prec);
  BigReal value = num / den;
  BigReal err(1.0, 64);
  mpfr_mul_2si(err.get(), err.get(), -(long)prec + 4, MPFR_RNDU);
  return ContinuedFraction(std::move(used), std::move(value), std::move(err));
}

ContinuedFraction cf_from_quotients(const std::vector<long>& quotients, long depth,
                                    mpfr_prec_t prec) {
  std::vector<BigInt> big;
  big.reserve(quotients.size());
  for (long a : quotients) big.emplace_back(a);
  return cf_from_quotients(big, depth, prec);
}

ContinuedFraction cf_from_real(const BigReal& alpha, long depth, const BigReal& abs_error) {
  if (depth < 1) throw InvalidInput("depth must be positive");
  mpfr_prec_t prec = alpha.precision();
  BigReal zero(prec), one(1.0, prec);
  if (alpha <= zero || alpha >= one) throw InvalidInput("alpha must lie in (0,1)");

  BigReal lo(prec), hi(prec);
  mpfr_sub(lo.get(), alpha.get(), abs_error.get(), MPFR_RNDD);
  mpfr_add(hi.get(), alpha.get(), abs_error.get(), MPFR_RNDU);
  std::vector<BigInt> quotients;
  for (long k = 1; k <= depth; ++k) {
    if (lo.sign() <= 0) {
      if (abs_error.is_zero() && lo.is_zero())
        throw PrecisionError("continued fraction terminates: alpha is rational", k - 1);
      throw PrecisionError("precision exhausted after index " + std::to_string(k - 1), k - 1);
    }
    BigReal inv_hi(prec), inv_lo(prec);
    mpfr_ui_div(inv_hi.get(), 1, hi.get(), MPFR_RNDD);
    mpfr_ui_div(inv_lo.get(), 1, lo.get(), MPFR_RNDU);
    BigInt a_small = inv_hi.floor(), a_big = inv_lo.floor();
    if (a_small != a_big || a_small < 1)
      throw PrecisionError("precision exhausted after index " + std::to_string(k - 1), k - 1);
    quotients.push_back(a_small);
    mpfr_sub_z(lo.get(), inv_hi.get(), a_small.get_mpz_t(), MPFR_RNDD);
    mpfr_sub_z(hi.get(), inv_lo.get(), a_small.get_mpz_t(), MPFR_RNDU);
  }
  BigReal err(abs_error);
  BigReal ulp(1.0, 64);
  mpfr_mul_2si(ulp.get(), ulp.get(), -(long)prec + 2, MPFR_RNDU);
  err += ulp;
  return ContinuedFraction(std::move(quotients), alpha, std::move(err));
}

ContinuedFraction cf_from_real(const BigReal& alpha, long depth) {
  BigReal err(1.0, 64);
  mpfr_mul_2si(err.get(), err.get(), -(long)alpha.precision() + 2, MPFR_RNDU);
  return cf_from_real(alpha, depth, err);
}

ContinuedFraction cf_from_decimal(const std::string& decimal, long depth, mpfr_prec_t prec) {
  auto dot = decimal.find('.');
  long digits = dot == std::string::npos ? 0 : (long)(decimal.size() - dot - 1);
  BigReal alpha(decimal, prec);
  // Half a unit in the last printed digit.
  BigReal err(std::string("5e-") + std::to_string(digits + 1), 64);
  return cf_from_real(alpha, depth, err);
}

BigReal dist_to_integers_exact(const BigInt& q, const ContinuedFraction& cf) {
  if (q == 0) return BigReal(cf.precision());
  return cf.phase(q).abs();
}

double dist_to_integers(const BigInt& q, const ContinuedFraction& cf) {
  return dist_to_integers_exact(q, cf).to_double();
}

long n_star(long n, const ContinuedFraction& cf, double tau) {
  if (n < 1) throw InvalidInput("n_star needs n >= 1");
  if (n > cf.depth()) throw RangeError("n beyond computed depth");
  for (long k = n; k >= 2; --k) {
    // q_k >= exp(tau q_{k-1})  <=>  log q_k >= tau q_{k-1}
    BigReal lhs(cf.q(k), 128);
    lhs = BigReal::log(lhs);
    BigReal rhs(cf.q(k - 1), 128);
    rhs *= BigReal(tau, 128);
    if (lhs >= rhs) return k;
  }
  return 1;
}

long n_star(long n, const ContinuedFraction& cf, const AnalysisParams& params) {
  return n_star(n, cf, params.tau);
}

BigRational k_n(long n, const ContinuedFraction& cf, double tau) {
  if (n + 1 > cf.depth()) throw RangeError("k_n needs convergents to index n+1");
  long ns = n_star(n, cf, tau);
  BigRational r(cf.q(n + 1), cf.q(ns));
  r.canonicalize();
  return r;
}

BigRational k_n(long n, const ContinuedFraction& cf, const AnalysisParams& params) {
  return k_n(n, cf, params.tau);
}

std::vector<BigInt> parse_quotients(const std::string& csv) {
  std::vector<BigInt> out;
  std::string s;
  for (char c : csv)
    if (c != '[' && c != ']' && c != ' ') s.push_back(c);
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    BigInt v;
    if (v.set_str(tok, 10) != 0) throw InvalidInput("bad partial quotient '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace skewlab
