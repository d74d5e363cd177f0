#include "skewlab/poly_prime_sums.hpp"

#include <cmath>
#include <sstream>

#include "skewlab/errors.hpp"
#include "skewlab/parallel.hpp"

namespace skewlab {

namespace {

constexpr std::size_t kBlocks = 64;

Quad frac_quad(Quad v) {
  Quad f = v - quad_round(v);
  return f < 0 ? f + 1 : f;
}

Quad quad_abs(Quad v) { return v < 0 ? -v : v; }

}  // namespace

ShiftedPolynomial ShiftedPolynomial::from_doubles(const std::vector<double>& c) {
  std::vector<Quad> q(c.begin(), c.end());
  return ShiftedPolynomial(std::move(q));
}

ShiftedPolynomial ShiftedPolynomial::parse(const std::string& csv) {
  std::vector<Quad> c;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw InvalidInput("empty polynomial coefficient");
    c.push_back(BigReal(item.substr(b, e - b + 1), 256).to_quad());
  }
  if (c.empty()) throw InvalidInput("polynomial needs at least one coefficient");
  return ShiftedPolynomial(std::move(c));
}

Quad ShiftedPolynomial::phase(u64 t) const {
  Quad acc = 0;
  const Quad tq = (Quad)t;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    // t is an integer, so reducing acc mod 1 first leaves acc * t mod 1 unchanged
    acc = frac_quad(frac_quad(acc) * tq + frac_quad(coeffs[i]));
  }
  return acc;
}

std::vector<std::string> regime_warnings(const ShiftedPolynomial& g, u64 H, u64 r, double tau,
                                         double eta, double C) {
  std::vector<std::string> w;
  const auto& c = g.coeffs;
  if (c.size() > 1 && (double)quad_abs(c[1]) > std::exp(-tau * (double)r))
    w.push_back("linear coefficient exceeds e^{-tau r}");
  if (std::exp(-tau * (double)r) > std::pow(eta, 4))
    w.push_back("e^{-tau r} exceeds eta^4");
  for (std::size_t i = 2; i < c.size(); ++i)
    if ((double)quad_abs(c[i]) > C * std::pow((double)H, 1.0 - (double)i))
      w.push_back("coefficient " + std::to_string(i) + " exceeds C H^{1-i}");
  return w;
}

std::complex<double> prime_phase_sum(u64 N, u64 H, u64 r, u64 a, const ShiftedPolynomial& g,
                                     const PrimeSource& primes, int threads) {
  if (r < 1) throw InvalidInput("r must be positive");
  if (gcd_u64(a % r, r) != 1 && r > 1) throw PreconditionError("prime phase sum needs (a, r) = 1");
  if (N + H > primes.limit()) throw RangeError("prime range beyond the sieve limit");
  std::vector<std::complex<double>> part(kBlocks);
  u64 span = H / kBlocks + 1;
  parallel_chunks(kBlocks, threads, [&](std::size_t b) {
    u64 lo = N + b * span;
    if (lo > N + H) return;
    u64 hi = std::min(N + H, lo + span - 1);
    std::complex<double> acc = 0.0;
    primes.scan(lo, hi, [&](u64 p) {
      if (p % r != a % r) return;
      acc += expi2pi(g.phase(p - N)) * std::log((double)p);
    });
    part[b] = acc;
  });
  std::complex<double> total = 0.0;
  for (auto& v : part) total += v;
  return total;
}

std::complex<double> integer_phase_main_term(u64 N, u64 H, u64 r, const ShiftedPolynomial& g,
                                             int threads) {
  if (r < 1) throw InvalidInput("r must be positive");
  (void)N;
  std::vector<std::complex<double>> part(kBlocks);
  u64 span = H / kBlocks + 1;
  parallel_chunks(kBlocks, threads, [&](std::size_t b) {
    u64 lo = b * span;
    if (lo > H) return;
    u64 hi = std::min(H, lo + span - 1);
    std::complex<double> acc = 0.0;
    for (u64 t = lo; t <= hi; ++t) acc += expi2pi(g.phase(t));
    part[b] = acc;
  });
  std::complex<double> total = 0.0;
  for (auto& v : part) total += v;
  return total / (double)euler_phi(r);
}

GapReport ms_gap(u64 N, u64 H, u64 r, u64 a, const ShiftedPolynomial& g, double eta,
                 const PrimeSource& primes, double tau, int threads) {
  if (!(eta > 0 && eta < 1)) throw InvalidInput("eta must lie in (0, 1)");
  GapReport rep;
  rep.warnings = regime_warnings(g, H, r, tau, eta);
  rep.prime_side = prime_phase_sum(N, H, r, a, g, primes, threads);
  rep.main_side = integer_phase_main_term(N, H, r, g, threads);
  rep.gap = std::abs(rep.prime_side - rep.main_side);
  rep.budget = eta * std::log(1.0 / eta) * (double)H / (double)euler_phi(r);
  rep.ratio = rep.gap / rep.budget;
  return rep;
}

Oscillation oscillation_classify(const ShiftedPolynomial& g, u64 H, u64 N, double B) {
  if (!(B > 0)) throw InvalidInput("B must be positive");
  if (N < 3 || H < 1) throw InvalidInput("need N >= 3 and H >= 1");
  double L = std::pow(std::log((double)N), B);
  u64 qmax = (u64)std::floor(L);
  if (qmax > 100000000ULL) throw ResourceError("denominator search limited to 10^8");
  std::vector<Quad> fr;
  std::vector<double> tol;
  for (std::size_t i = 1; i < g.coeffs.size(); ++i) {
    fr.push_back(frac_quad(g.coeffs[i]));
    tol.push_back(L / std::pow((double)H, (double)i));
  }
  for (u64 q = 1; q <= qmax; ++q) {
    bool ok = true;
    for (std::size_t i = 0; i < fr.size() && ok; ++i) {
      Quad v = fr[i] * (Quad)q;
      if ((double)quad_abs(v - quad_round(v)) > tol[i]) ok = false;
    }
    if (ok) return {false, q};
  }
  return {true, 0};
}

}  // namespace skewlab
