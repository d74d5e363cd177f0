#pragma once

#include <complex>
#include <string>
#include <vector>

#include "skewlab/bigreal.hpp"
#include "skewlab/primes.hpp"

namespace skewlab {

// g(n) = sum_i coeffs[i] (n - N)^i, kept in the shifted basis.
struct ShiftedPolynomial {
  std::vector<Quad> coeffs;

  ShiftedPolynomial() = default;
  explicit ShiftedPolynomial(std::vector<Quad> c) : coeffs(std::move(c)) {}
  static ShiftedPolynomial from_doubles(const std::vector<double>& c);
  // Comma-separated decimal coefficients, parsed at high precision.
  static ShiftedPolynomial parse(const std::string& csv);

  int degree() const { return coeffs.empty() ? 0 : (int)coeffs.size() - 1; }
  // g(N + t) mod 1 in [0, 1), exact Horner with reduction after each step.
  Quad phase(u64 t) const;
};

// Coefficient regime: |g_1| <= e^{-tau r} <= eta^4 and |g_i| <= C H^{1-i}
// for i >= 2.
std::vector<std::string> regime_warnings(const ShiftedPolynomial& g, u64 H, u64 r, double tau,
                                         double eta, double C = 1.0);

// sum_{p = a (r), N <= p <= N+H} e(g(p)) log p; fixed block partition so the
// result does not depend on the thread count.
std::complex<double> prime_phase_sum(u64 N, u64 H, u64 r, u64 a, const ShiftedPolynomial& g,
                                     const PrimeSource& primes, int threads = 1);

// (1/phi(r)) sum_{N <= n <= N+H} e(g(n))
std::complex<double> integer_phase_main_term(u64 N, u64 H, u64 r, const ShiftedPolynomial& g,
                                             int threads = 1);

struct GapReport {
  double gap = 0.0;
  double budget = 0.0;
  double ratio = 0.0;
  std::complex<double> prime_side;
  std::complex<double> main_side;
  std::vector<std::string> warnings;
};
GapReport ms_gap(u64 N, u64 H, u64 r, u64 a, const ShiftedPolynomial& g, double eta,
                 const PrimeSource& primes, double tau, int threads = 1);

struct Oscillation {
  bool oscillatory = true;
  u64 witness = 0;  // q for the non-oscillatory case
};
// Non-oscillatory with witness q if some q <= (log N)^B has
// ||q g_i|| <= (log N)^B / H^i for every i >= 1.
Oscillation oscillation_classify(const ShiftedPolynomial& g, u64 H, u64 N, double B);

}  // namespace skewlab
