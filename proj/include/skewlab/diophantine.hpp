#pragma once

#include <memory>
#include <string>
#include <vector>

#include "skewlab/bigreal.hpp"

namespace skewlab {

constexpr mpfr_prec_t kDefaultPrecision = 4096;

// Decay and threshold knobs shared by the analytic experiments. tau is derived
// from tau_prime and never set directly.
struct AnalysisParams {
  double tau_prime = 0.05;
  double tau = 0.0;
  double delta = 0.2;
  double eta = 0.01;
  double epsilon = 0.01;
  double xi = 0.1;
  double A = 2.0;
  double B = 2.0;

  static AnalysisParams make(double tau_prime, double delta = 0.2, double eta = 0.01,
                             double epsilon = 0.01, double xi = 0.1, double A = 2.0,
                             double B = 2.0);
  static double tau_from(double tau_prime);
};

// Continued fraction of an irrational alpha in (0,1) with exact convergents.
// Cheap to copy; the data is immutable and shared.
class ContinuedFraction {
 public:
  ContinuedFraction(std::vector<BigInt> quotients, BigReal value, BigReal value_error);

  const std::vector<BigInt>& quotients() const { return d_->quotients; }
  long depth() const { return (long)d_->quotients.size(); }
  // Valid for -1 <= k <= depth().
  const BigInt& p(long k) const;
  const BigInt& q(long k) const;

  const BigReal& value() const { return d_->value; }
  const BigReal& value_error() const { return d_->error; }
  mpfr_prec_t precision() const { return d_->value.precision(); }
  double alpha() const { return d_->value.to_double(); }
  Quad alpha_quad() const { return d_->alpha_quad; }

  // n*alpha - round(n*alpha) at full precision. Throws PrecisionError when the
  // tracked error is not small against the result.
  BigReal phase(const BigInt& n) const;
  Quad centered_phase(const BigInt& n) const { return phase(n).to_quad(); }
  Quad centered_phase(long long n) const { return phase(BigInt(std::to_string(n))).to_quad(); }
  // Absolute error bound on n*alpha.
  BigReal phase_error(const BigInt& n) const;
  // q_k alpha - p_k (signed), k in [0, depth].
  BigReal offset(long k) const;
  // Largest k <= depth for which offset(k) is resolved by the working precision.
  long last_reliable_index() const;

  // Index k with q(k) == n, or -1.
  long index_of_denominator(const BigInt& n) const;

 private:
  struct Data {
    std::vector<BigInt> quotients;
    std::vector<BigInt> p;  // p[k+1] = p_k
    std::vector<BigInt> q;
    BigReal value;
    BigReal error;
    Quad alpha_quad = 0;
  };
  std::shared_ptr<const Data> d_;
};

// alpha = [0; a_1, ..., a_depth, 1, 1, 1, ...].
ContinuedFraction cf_from_quotients(const std::vector<BigInt>& quotients, long depth,
                                    mpfr_prec_t prec = kDefaultPrecision);
ContinuedFraction cf_from_quotients(const std::vector<long>& quotients, long depth,
                                    mpfr_prec_t prec = kDefaultPrecision);

// Expansion of a real known to within abs_error. Throws PrecisionError naming
// the last reliable index when the interval no longer pins the next quotient.
ContinuedFraction cf_from_real(const BigReal& alpha, long depth, const BigReal& abs_error);
ContinuedFraction cf_from_real(const BigReal& alpha, long depth);
ContinuedFraction cf_from_decimal(const std::string& decimal, long depth,
                                  mpfr_prec_t prec = kDefaultPrecision);

// ||q alpha|| in [0, 1/2].
double dist_to_integers(const BigInt& q, const ContinuedFraction& cf);
BigReal dist_to_integers_exact(const BigInt& q, const ContinuedFraction& cf);

// Largest n* <= n with q_{n*} >= exp(tau q_{n*-1}), comparing against 0 at n* = 1.
long n_star(long n, const ContinuedFraction& cf, double tau);
long n_star(long n, const ContinuedFraction& cf, const AnalysisParams& params);

// q_{n+1} / q_{n*}.
BigRational k_n(long n, const ContinuedFraction& cf, double tau);
BigRational k_n(long n, const ContinuedFraction& cf, const AnalysisParams& params);

std::vector<BigInt> parse_quotients(const std::string& csv);

}  // namespace skewlab
