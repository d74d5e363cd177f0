#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "skewlab/cocycle.hpp"
#include "skewlab/diophantine.hpp"
#include "skewlab/primes.hpp"

namespace skewlab {

struct TorusPoint {
  Quad x = 0;
  Quad y = 0;
};

// e_{b,c}(x, y) = e(b x + c y)
struct Observable {
  long long b = 0;
  long long c = 0;
  std::complex<double> operator()(const TorusPoint& p) const;
};

// T(x, y) = (x + alpha, y + g(x)) on the torus. The cocycle is either a
// trigonometric polynomial (closed-form Birkhoff sums) or an arbitrary
// function handle (direct summation).
class SkewProduct {
 public:
  SkewProduct(ContinuedFraction cf, TrigPolynomial g);
  SkewProduct(ContinuedFraction cf, std::function<double(Quad)> g);

  const ContinuedFraction& cf() const { return cf_; }
  bool analytic() const { return kernel_.has_value(); }
  double g(Quad x) const;
  // S_n(g)(x)
  double birkhoff(unsigned long long n, Quad x) const;
  TorusPoint step(const TorusPoint& p) const;

 private:
  ContinuedFraction cf_;
  std::optional<BirkhoffKernel> kernel_;
  std::function<double(Quad)> handle_;
};

TorusPoint iterate(const SkewProduct& T, unsigned long long n, Quad x, Quad y);

struct PrimeAverage {
  std::complex<double> value;
  double theta_ratio = 0.0;  // theta(N)/N
};
// (1/N) sum_{p <= N} e_{b,c}(T^p(x, y)) log p
PrimeAverage prime_weighted_average(const SkewProduct& T, const Observable& f, u64 N, Quad x,
                                    Quad y, const PrimeSource& primes, int threads = 1);

// (d / (z phi(d))) sum_{k <= z, (k, d) = 1} e_{b,c}(T^k(x, y))
std::complex<double> reduced_residue_average(const SkewProduct& T, const Observable& f, u64 z,
                                             u64 d, Quad x, Quad y, int threads = 1);

// (1/N) sum e(k t) over circle points, and (1/N) sum e(b x + c y) on the torus.
std::complex<double> weyl_sum(const std::vector<double>& points, long long k);
std::complex<double> weyl_sum(const std::vector<TorusPoint>& points, const Observable& f);

// C1/K + C2 sum_{k <= K} |W_k| / k with C1 = 1, C2 = 3.
double star_discrepancy_bound(const std::vector<double>& points, int K);
// Exact star discrepancy of points in [0, 1).
double star_discrepancy_exact(std::vector<double> points);

// Grid estimate of Leb{x : |p(x)| <= eps}.
double nazarov_small_set(const TrigPolynomial& p, double eps, int grid);
// #{1 <= u <= q_n : |g_{n*-1}(x + u alpha)| <= q_n^{-eps}}
u64 nazarov_orbit_count(const ReducedCocycle& gr, long n, Quad x, double eps);

}  // namespace skewlab
