#include "skewlab/phase_approx.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {

constexpr mpfr_prec_t kWork = 256;

double log_abs(const BigReal& v) {
  if (v.is_zero()) return -INFINITY;
  BigReal a = v.abs();
  return BigReal::log(a).to_double();
}

BigReal pow_big(const BigReal& v, int e) {
  BigReal out(1.0, v.precision());
  for (int i = 0; i < e; ++i) out *= v;
  return out;
}

}  // namespace

BigReal PhaseCoefficient::eval(const BigReal& x) const {
  BigReal v(shape.eval(x.to_quad()), prefactor.precision());
  return v * prefactor;
}

PhasePolynomial::PhasePolynomial(long n, int degree, double delta, BigInt q, BigInt q_next,
                                 std::vector<PhaseCoefficient> coeffs)
    : n_(n), degree_(degree), delta_(delta), q_(std::move(q)), q_next_(std::move(q_next)),
      coeffs_(std::move(coeffs)) {}

BigReal PhasePolynomial::eval(const BigReal& x, const BigInt& m, mpfr_prec_t prec) const {
  BigReal total(prec);
  BigReal mpow(1.0, prec);
  for (const auto& c : coeffs_) {
    mpow *= m;
    total += with_precision(c.eval(x), prec) * mpow;
  }
  return total;
}

double PhasePolynomial::eval(Quad x, const BigInt& m) const {
  return eval(from_quad(x, kWork), m).to_double();
}

PhasePolynomial build_phase_poly(const ReducedCocycle& gr, long n, const AnalysisParams& params) {
  const Block& blk = gr.block(n);
  const ContinuedFraction& cf = gr.cf;
  if (n + 1 > cf.depth()) throw RangeError("scale n needs q_{n+1} within the expansion depth");
  if (!(params.delta > 0 && params.delta <= 1)) throw InvalidInput("delta must lie in (0, 1]");
  int d = (int)std::floor(1.0 / params.delta);
  const BigInt& q = cf.q(n);
  const BigInt& qn1 = cf.q(n + 1);
  std::vector<PhaseCoefficient> coeffs;
  if (blk.g.modes().empty()) return PhasePolynomial(n, d, params.delta, q, qn1, {});

  const double lq = log_big(q), lq1 = log_big(qn1);
  BigReal sigma = with_precision(cf.offset(n), kWork);
  BigReal qr(q, kWork);

  for (int s = 1; s <= d; ++s) {
    PhaseCoefficient c;
    c.s = s;
    if (s == 1) {
      c.prefactor = BigReal(1.0, kWork);
      c.shape = blk.g;
      c.log_bound = -params.tau * q.get_d();
    } else {
      // S_{q_n}(e(f .))(x) = e(f x) (e(f q_n alpha) - 1) / (e(f alpha) - 1)
      TrigPolynomial deriv = blk.g.derivative(s - 1);
      std::vector<Mode> modes;
      for (const Mode& md : deriv.modes()) {
        BigInt f(std::to_string(md.m));
        cplx ratio = ratio_from_phases(cf.centered_phase(BigInt(f * q)), cf.centered_phase(f));
        modes.push_back({md.m, md.a * ratio});
      }
      c.shape = TrigPolynomial(0.0, std::move(modes));
      BigReal fact(1.0, kWork);
      for (int i = 2; i <= s; ++i) fact *= BigInt(i);
      c.prefactor = pow_big(sigma, s - 1) / (pow_big(qr, s) * fact);
      c.log_bound = -lq - (double)(s - 1) * lq1;
    }
    SupEstimate sup = sup_norm(c.shape, kPhaseBoundGrid);
    c.argmax = sup.argmax;
    c.log_sup = (sup.refined > 0 ? std::log(sup.refined) : -INFINITY) + log_abs(c.prefactor);
    if (c.log_sup > c.log_bound + 1e-9) {
      std::ostringstream msg;
      msg << "coefficient bound violated at scale " << n << ": s = " << s << ", x = " << c.argmax
          << ", log sup = " << c.log_sup << " > log bound = " << c.log_bound;
      throw IntegrityError(msg.str());
    }
    coeffs.push_back(std::move(c));
  }
  return PhasePolynomial(n, d, params.delta, q, qn1, std::move(coeffs));
}

double polap_error(const TrigPolynomial& g, const PhasePolynomial& P, Quad x, const BigInt& m,
                   const BigInt& w, const ContinuedFraction& cf) {
  if (m < 0) throw RangeError("m must be non-negative");
  double lq = log_big(P.q());
  if (w < 1 || w.get_d() > lq * lq * lq) throw RangeError("w must satisfy 1 <= w <= (log q_n)^3");
  if (m > 0 && log_big(m) > (1.0 - P.delta()) * log_big(P.q_next()) + 1e-12)
    throw RangeError("m exceeds q_{n+1}^{1-delta}");
  BigInt period = w * P.q();
  BigInt rest = m % period;
  // the error shrinks like a power of q_{n+1}; keep enough bits to see it
  mpfr_prec_t prec = std::min<mpfr_prec_t>(
      cf.precision(), kWork + 2 * (mpfr_prec_t)mpz_sizeinbase(P.q_next().get_mpz_t(), 2));
  BigReal xb = from_quad(x, prec);
  BigReal err = birkhoff_closed_mp(g, m, xb, cf, prec) - birkhoff_closed_mp(g, rest, xb, cf, prec);
  err -= P.eval(xb, m, prec);
  return err.abs().to_double();
}

double orbit_return_error(const TrigPolynomial& g, const ContinuedFraction& cf,
                          const AnalysisParams& params, long n, const BigInt& z, const BigInt& m,
                          Quad x, Quad y) {
  (void)y;  // the fibre offset cancels in the metric
  if (n < 1 || n + 1 > cf.depth()) throw RangeError("scale n outside the expansion depth");
  if (z < 1) throw RangeError("z must be positive");
  if (m < 0) throw RangeError("m must be non-negative");
  const BigInt& q = cf.q(n);
  long ns = n_star(n, cf, params);
  double cap = std::min(log_big(cf.q(n + 1)) - log_big(cf.q(ns)), 2.0 * params.tau * q.get_d());
  if (m > 0 && log_big(m) > log_big(q) + cap + 1e-12)
    throw RangeError("m exceeds q_n min(q_{n+1}/q_{n*}, e^{2 tau q_n})");
  BigInt rest = m % BigInt(z * q);
  BigReal xb = from_quad(x, kWork);
  BigReal dy = birkhoff_closed_mp(g, m, xb, cf, kWork) - birkhoff_closed_mp(g, rest, xb, cf, kWork);
  BigInt diff = m - rest;
  double dx = diff == 0 ? 0.0 : std::abs(with_precision(cf.phase(diff), kWork).to_double());
  return dx + std::abs(dy.centered_frac().to_double());
}

}  // namespace skewlab
