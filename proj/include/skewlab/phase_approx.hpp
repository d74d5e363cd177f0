#pragma once

#include <vector>

#include "skewlab/bigreal.hpp"
#include "skewlab/cocycle.hpp"
#include "skewlab/diophantine.hpp"

namespace skewlab {

// a_s(x) = prefactor * shape(x). For s = 1 the shape is the block g_n and the
// prefactor is 1; for s >= 2 the shape is S_{q_n}(g_n^{(s-1)}) and the
// prefactor is (q_n alpha - p_n)^{s-1} / (q_n^s s!), kept in multiprecision
// since it underflows doubles for large q_{n+1}.
struct PhaseCoefficient {
  int s = 1;
  BigReal prefactor;
  TrigPolynomial shape;
  // Sampled sup |a_s| and its bound, both as natural logs.
  double log_sup = 0.0;
  double log_bound = 0.0;
  double argmax = 0.0;

  BigReal eval(const BigReal& x) const;
};

class PhasePolynomial {
 public:
  PhasePolynomial(long n, int degree, double delta, BigInt q, BigInt q_next,
                  std::vector<PhaseCoefficient> coeffs);

  long n() const { return n_; }
  // floor(1/delta); coefficients() is empty for an empty block.
  int degree() const { return degree_; }
  double delta() const { return delta_; }
  const BigInt& q() const { return q_; }
  const BigInt& q_next() const { return q_next_; }
  const std::vector<PhaseCoefficient>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  // P_n(x, m) = sum_s a_s(x) m^s
  BigReal eval(const BigReal& x, const BigInt& m, mpfr_prec_t prec = 256) const;
  double eval(Quad x, const BigInt& m) const;

 private:
  long n_;
  int degree_;
  double delta_;
  BigInt q_, q_next_;
  std::vector<PhaseCoefficient> coeffs_;
};

// Sup-norm sampling grid for the coefficient bound checks.
constexpr int kPhaseBoundGrid = 1 << 12;

// Throws IntegrityError naming the worst (s, x) when a sampled coefficient
// exceeds its bound by more than a relative 1e-9.
PhasePolynomial build_phase_poly(const ReducedCocycle& gr, long n, const AnalysisParams& params);

// |S_m(g)(x) - S_{m mod w q_n}(g)(x) - P_n(x, m)|
// for 0 <= m <= q_{n+1}^{1-delta} and 1 <= w <= (log q_n)^3.
double polap_error(const TrigPolynomial& g, const PhasePolynomial& P, Quad x, const BigInt& m,
                   const BigInt& w, const ContinuedFraction& cf);

// d(T^m(x,y), T^{m mod z q_n}(x,y)) = ||(m - m mod z q_n) alpha|| + ||S_m(g)(x) - S_{m mod z q_n}(g)(x)||
// for m <= q_n min(q_{n+1}/q_{n*}, e^{2 tau q_n}).
double orbit_return_error(const TrigPolynomial& g, const ContinuedFraction& cf,
                          const AnalysisParams& params, long n, const BigInt& z, const BigInt& m,
                          Quad x, Quad y);

}  // namespace skewlab
