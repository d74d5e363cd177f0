#include "skewlab/skew_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "skewlab/errors.hpp"
#include "skewlab/parallel.hpp"

namespace skewlab {

namespace {

constexpr std::size_t kChunks = 64;

Quad wrap(Quad v) { return unit_interval(v); }

}  // namespace

std::complex<double> Observable::operator()(const TorusPoint& p) const {
  return expi2pi((Quad)b * p.x + (Quad)c * p.y);
}

SkewProduct::SkewProduct(ContinuedFraction cf, TrigPolynomial g)
    : cf_(cf), kernel_(BirkhoffKernel(g, cf)) {}

SkewProduct::SkewProduct(ContinuedFraction cf, std::function<double(Quad)> g)
    : cf_(std::move(cf)), handle_(std::move(g)) {
  if (!handle_) throw InvalidInput("cocycle handle is empty");
}

double SkewProduct::g(Quad x) const {
  return kernel_ ? kernel_->poly().eval(x) : handle_(wrap(x));
}

double SkewProduct::birkhoff(unsigned long long n, Quad x) const {
  if (kernel_) return kernel_->sum(n, x);
  const Quad a = cf_.alpha_quad();
  long double acc = 0;
  Quad t = wrap(x);
  for (unsigned long long k = 0; k < n; ++k) {
    acc += handle_(t);
    t = wrap(t + a);
  }
  return (double)acc;
}

TorusPoint SkewProduct::step(const TorusPoint& p) const {
  return {wrap(p.x + cf_.alpha_quad()), wrap(p.y + (Quad)g(p.x))};
}

TorusPoint iterate(const SkewProduct& T, unsigned long long n, Quad x, Quad y) {
  Quad xn = wrap(x + centered((Quad)n * T.cf().alpha_quad()));
  if (n >= (1ULL << 62)) xn = wrap(x + T.cf().centered_phase(BigInt(std::to_string(n))));
  return {xn, wrap(y + (Quad)T.birkhoff(n, x))};
}

PrimeAverage prime_weighted_average(const SkewProduct& T, const Observable& f, u64 N, Quad x,
                                    Quad y, const PrimeSource& primes, int threads) {
  if (N < 2) throw InvalidInput("prime averages need N >= 2");
  if (N > primes.limit()) throw RangeError("prime source does not cover [2, N]");
  std::vector<std::complex<double>> part(kChunks);
  std::vector<long double> logs(kChunks, 0.0L);
  if (T.analytic()) {
    u64 span = N / kChunks + 1;
    parallel_chunks(kChunks, threads, [&](std::size_t i) {
      u64 lo = i * span, hi = std::min(N, lo + span - 1);
      if (lo > N) return;
      std::complex<double> acc = 0.0;
      long double lg = 0;
      primes.scan(lo, hi, [&](u64 p) {
        double w = std::log((double)p);
        acc += f(iterate(T, p, x, y)) * w;
        lg += w;
      });
      part[i] = acc;
      logs[i] = lg;
    });
  } else {
    // orbit walked step by step; primes picked off in order
    TorusPoint pt{wrap(x), wrap(y)};
    std::complex<double> acc = 0.0;
    long double lg = 0;
    u64 k = 0;
    primes.scan(2, N, [&](u64 p) {
      while (k < p) {
        pt = T.step(pt);
        ++k;
      }
      double w = std::log((double)p);
      acc += f(pt) * w;
      lg += w;
    });
    part[0] = acc;
    logs[0] = lg;
  }
  std::complex<double> total = 0.0;
  long double th = 0;
  for (std::size_t i = 0; i < kChunks; ++i) {
    total += part[i];
    th += logs[i];
  }
  return {total / (double)N, (double)(th / (long double)N)};
}

std::complex<double> reduced_residue_average(const SkewProduct& T, const Observable& f, u64 z,
                                             u64 d, Quad x, Quad y, int threads) {
  if (z < 1 || d < 1) throw InvalidInput("z and d must be positive");
  if (z % d) throw InvalidInput("d must divide z");
  std::vector<u64> ps;
  for (auto& [p, e] : factorize(d)) ps.push_back(p);
  auto coprime = [&](u64 k) {
    for (u64 p : ps)
      if (k % p == 0) return false;
    return true;
  };
  std::vector<std::complex<double>> part(kChunks);
  if (T.analytic()) {
    u64 span = z / kChunks + 1;
    parallel_chunks(kChunks, threads, [&](std::size_t i) {
      u64 lo = 1 + i * span, hi = std::min(z, lo + span - 1);
      std::complex<double> acc = 0.0;
      for (u64 k = lo; k <= hi; ++k)
        if (coprime(k)) acc += f(iterate(T, k, x, y));
      part[i] = acc;
    });
  } else {
    TorusPoint pt{wrap(x), wrap(y)};
    std::complex<double> acc = 0.0;
    for (u64 k = 1; k <= z; ++k) {
      pt = T.step(pt);
      if (coprime(k)) acc += f(pt);
    }
    part[0] = acc;
  }
  std::complex<double> total = 0.0;
  for (auto& v : part) total += v;
  return total * ((double)d / ((double)z * (double)euler_phi(d)));
}

std::complex<double> weyl_sum(const std::vector<double>& points, long long k) {
  if (points.empty()) return 0.0;
  std::complex<double> acc = 0.0;
  for (double t : points) acc += expi2pi((Quad)k * (Quad)t);
  return acc / (double)points.size();
}

std::complex<double> weyl_sum(const std::vector<TorusPoint>& points, const Observable& f) {
  if (points.empty()) return 0.0;
  std::complex<double> acc = 0.0;
  for (const auto& p : points) acc += f(p);
  return acc / (double)points.size();
}

double star_discrepancy_bound(const std::vector<double>& points, int K) {
  if (K < 1) throw InvalidInput("frequency cutoff K must be >= 1");
  double s = 0.0;
  for (int k = 1; k <= K; ++k) s += std::abs(weyl_sum(points, k)) / k;
  return 1.0 / K + 3.0 * s;
}

double star_discrepancy_exact(std::vector<double> points) {
  if (points.empty()) return 0.0;
  std::sort(points.begin(), points.end());
  double n = (double)points.size(), d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    d = std::max(d, (double)(i + 1) / n - points[i]);
    d = std::max(d, points[i] - (double)i / n);
  }
  return d;
}

double nazarov_small_set(const TrigPolynomial& p, double eps, int grid) {
  if (grid < 1024) throw InvalidInput("grid must have at least 2^10 points");
  long long hits = 0;
  for (int i = 0; i < grid; ++i) hits += std::abs(p.eval((double)i / grid)) <= eps;
  return (double)hits / grid;
}

u64 nazarov_orbit_count(const ReducedCocycle& gr, long n, Quad x, double eps) {
  long ns = n_star(n, gr.cf, gr.params);
  if (ns - 1 < 1) throw InvalidInput("scale n has n* = 1, so no block g_{n*-1}");
  const BigInt& q = gr.cf.q(n);
  if (q > 100000000) throw ResourceError("orbit count limited to q_n <= 10^8");
  const TrigPolynomial& h = gr.block(ns - 1).g;
  const double thr = std::pow(q.get_d(), -eps);
  const Quad a = gr.cf.alpha_quad();
  u64 qn = q.get_ui(), count = 0;
  for (u64 u = 1; u <= qn; ++u)
    if (std::abs(h.eval(wrap(x + centered((Quad)u * a)))) <= thr) ++count;
  return count;
}

}  // namespace skewlab
