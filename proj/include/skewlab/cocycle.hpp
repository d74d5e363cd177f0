#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "skewlab/bigreal.hpp"
#include "skewlab/diophantine.hpp"

namespace skewlab {

using cplx = std::complex<double>;

// One positive frequency; the mirror -m carries conj(a).
struct Mode {
  long long m = 0;
  cplx a;
};

// Real trigonometric polynomial c + sum_{m>0} (a_m e(mx) + conj(a_m) e(-mx)).
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  TrigPolynomial(double constant, std::vector<Mode> modes);

  double constant() const { return constant_; }
  const std::vector<Mode>& modes() const { return modes_; }
  bool empty() const { return modes_.empty() && constant_ == 0.0; }
  // a_m for any integer m (conjugate filled for m < 0).
  cplx coefficient(long long m) const;
  long long max_frequency() const { return modes_.empty() ? 0 : modes_.back().m; }

  double eval(Quad x) const;
  double eval(double x) const { return eval((Quad)x); }
  // Complex sum over the full two-sided series; the imaginary part is rounding.
  cplx eval_complex(double x) const;
  TrigPolynomial derivative(int s) const;

  TrigPolynomial operator+(const TrigPolynomial& o) const;
  TrigPolynomial operator-(const TrigPolynomial& o) const;
  TrigPolynomial scaled(double s) const;

 protected:
  double constant_ = 0.0;
  std::vector<Mode> modes_;
};

// Zero-mean real-analytic cocycle with |a_m| <= exp(-tau' |m|).
class AnalyticCocycle : public TrigPolynomial {
 public:
  AnalyticCocycle() = default;
  // Rejects any coefficient above the decay certificate. M_max <= 0 picks the
  // smallest M with exp(-tau' M) < 1e-16 and drops modes above it.
  AnalyticCocycle(std::vector<Mode> modes, double decay_rate, long long M_max = 0);

  double decay_rate() const { return decay_rate_; }
  long long truncation() const { return M_max_; }

  static long long default_truncation(double decay_rate);
  // Lines "m, re, im"; negative m lines must be conjugate to the positive ones.
  static AnalyticCocycle from_csv(const std::string& text, double decay_rate,
                                  long long M_max = 0);

 private:
  double decay_rate_ = 0.05;
  long long M_max_ = 0;
};

// Precomputed rotation phases theta_m = m alpha - round(m alpha) for every
// mode of a polynomial; evaluates S_n in O(#modes).
class BirkhoffKernel {
 public:
  BirkhoffKernel(const TrigPolynomial& g, const ContinuedFraction& cf);

  // Per-mode factors (e(m n alpha) - 1) / (e(m alpha) - 1).
  std::vector<cplx> ratios(unsigned long long n) const;
  std::vector<cplx> ratios(const BigInt& n) const;
  double sum_with(const std::vector<cplx>& ratios, double n_as_real, Quad x) const;

  double sum(unsigned long long n, Quad x) const;
  double sum(const BigInt& n, Quad x) const;

  const TrigPolynomial& poly() const { return g_; }
  const std::vector<Quad>& thetas() const { return theta_; }
  const ContinuedFraction& cf() const { return cf_; }

 private:
  TrigPolynomial g_;
  ContinuedFraction cf_;
  std::vector<Quad> theta_;
};

cplx ratio_from_phases(Quad phi, Quad theta);

double birkhoff_direct(const TrigPolynomial& g, unsigned long long n, Quad x, Quad alpha);
double birkhoff_direct(const TrigPolynomial& g, unsigned long long n, Quad x,
                       const ContinuedFraction& cf);
double birkhoff_closed(const TrigPolynomial& g, unsigned long long n, Quad x,
                       const ContinuedFraction& cf);
double birkhoff_closed(const TrigPolynomial& g, const BigInt& n, Quad x,
                       const ContinuedFraction& cf);

// S_n(g)(x) in multiprecision, for differences of large Birkhoff sums.
BigReal birkhoff_closed_mp(const TrigPolynomial& g, const BigInt& n, const BigReal& x,
                           const ContinuedFraction& cf, mpfr_prec_t prec = 256);

struct Block {
  long n = 0;
  BigInt q;
  AnalyticCocycle g;
};

// g split into blocks g_n (frequencies q_n | m, q_n <= m <= log(q_{n+1})/tau'^2,
// m < q_{n+1}) plus the modes that no block claims.
struct ReducedCocycle {
  std::vector<Block> blocks;  // blocks[i].n == i + 1
  std::vector<Mode> residual;
  AnalyticCocycle source;
  ContinuedFraction cf;
  AnalysisParams params;
  long depth = 0;

  const Block& block(long n) const;
  bool has_block(long n) const { return n >= 1 && n <= depth; }
  AnalyticCocycle reduced() const;
  TrigPolynomial difference() const;  // g - reduced
};

ReducedCocycle reduce(const AnalyticCocycle& g, const ContinuedFraction& cf,
                      const AnalysisParams& params, long depth);

// sup_{k <= n_max} |S_k(g - reduced)(0)|.
double coboundary_drift(const ReducedCocycle& gr, unsigned long long n_max);

struct CircleFunction {
  std::function<double(double)> f;
  std::optional<double> mean;
};
CircleFunction as_circle_function(const TrigPolynomial& g);

// |S_q(h)(x) - q * mean(h)|; q must be a convergent denominator.
double denjoy_koksma_gap(const CircleFunction& h, const BigInt& q, Quad x,
                         const ContinuedFraction& cf);
double trapezoid_mean(const std::function<double(double)>& f, int points = 1 << 16);

struct SupEstimate {
  double grid = 0.0;
  double refined = 0.0;
  double argmax = 0.0;
};
SupEstimate sup_norm(const TrigPolynomial& p, int grid = 1 << 14);

// sup over an x-grid of |S_{K q_n}(g)(x)|, K restricted to the lemma range.
double block_sum_sup(const TrigPolynomial& g, const ContinuedFraction& cf,
                     const AnalysisParams& params, long n, const BigInt& K, int grid);
BigInt block_sum_max_K(const ContinuedFraction& cf, const AnalysisParams& params, long n);

}  // namespace skewlab
