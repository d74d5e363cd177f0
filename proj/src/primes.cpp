#include "skewlab/primes.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {

std::vector<std::uint32_t> simple_sieve(u64 n) {
  std::vector<bool> comp(n + 1, false);
  std::vector<std::uint32_t> out;
  for (u64 i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back((std::uint32_t)i);
    for (u64 j = i * i; j <= n; j += i) comp[j] = true;
  }
  return out;
}

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> table = simple_sieve(1000000);
  return table;
}

u64 isqrt(u64 n) {
  u64 r = (u64)std::sqrt((double)n);
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

PrimeSource::PrimeSource(u64 limit, u64 segment_size) : limit_(limit), seg_odds_(segment_size) {
  if (segment_size < 64 || segment_size % 64 != 0)
    throw InvalidInput("segment size must be a positive multiple of 64");
  base_primes_ = simple_sieve(isqrt(limit) + 1);
  u64 count = limit / (2 * seg_odds_) + 1;
  segments_.resize(count);
  flags_.resize(count);
  for (auto& f : flags_) f = std::make_unique<std::once_flag>();
}

PrimeSource::~PrimeSource() = default;

void PrimeSource::check_range(u64 hi) const {
  if (hi > limit_)
    throw RangeError("prime range up to " + std::to_string(hi) + " exceeds sieve limit " +
                     std::to_string(limit_));
}

const PrimeSource::Segment& PrimeSource::segment(u64 index) const {
  std::call_once(*flags_[index], [&] {
    auto seg = std::make_unique<Segment>();
    u64 span = 2 * seg_odds_;
    seg->first_odd = index * span + 1;
    seg->composite.assign(seg_odds_ / 64, 0ULL);
    u64 first = seg->first_odd;
    u64 last = first + 2 * (seg_odds_ - 1);
    for (std::uint32_t p32 : base_primes_) {
      u64 p = p32;
      if (p == 2) continue;
      if (p * p > last) break;
      u64 start = std::max(p * p, ((first + p - 1) / p) * p);
      if (start % 2 == 0) start += p;
      for (u64 m = start; m <= last; m += 2 * p) {
        u64 i = (m - first) / 2;
        seg->composite[i >> 6] |= 1ULL << (i & 63);
      }
    }
    if (index == 0) seg->composite[0] |= 1ULL;  // 1 is not prime
    segments_[index] = std::move(seg);
  });
  return *segments_[index];
}

bool PrimeSource::is_prime(u64 n) const {
  check_range(n);
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  u64 span = 2 * seg_odds_;
  const Segment& seg = segment(n / span);
  u64 i = (n - seg.first_odd) / 2;
  return !(seg.composite[i >> 6] >> (i & 63) & 1ULL);
}

void PrimeSource::for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& fn) const {
  scan(lo, hi, fn);
}

std::vector<u64> PrimeSource::primes_in(u64 lo, u64 hi) const {
  std::vector<u64> out;
  scan(lo, hi, [&](u64 p) { out.push_back(p); });
  return out;
}

u64 PrimeSource::prime_count(u64 hi) const {
  u64 c = 0;
  scan(0, hi, [&](u64) { ++c; });
  return c;
}

void PrimeSource::prefetch(u64 hi, int threads) const {
  check_range(hi);
  u64 last = hi / (2 * seg_odds_);
  if (threads <= 1) {
    for (u64 s = 0; s <= last; ++s) segment(s);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (u64 s = t; s <= last; s += threads) segment(s);
    });
  for (auto& th : pool) th.join();
}

double chebyshev_theta(const PrimeSource& primes, u64 N) {
  long double acc = 0.0L;
  primes.scan(0, N, [&](u64 p) { acc += std::log((long double)p); });
  return (double)acc;
}

std::vector<std::pair<u64, u64>> residue_stream(const PrimeSource& primes, u64 lo, u64 hi,
                                                u64 q) {
  if (q == 0) throw InvalidInput("modulus must be positive");
  std::vector<std::pair<u64, u64>> out;
  primes.scan(lo, hi, [&](u64 p) { out.emplace_back(p, p % q); });
  return out;
}

// ---- arithmetic functions ----

Factorization factorize(u64 n) {
  if (n == 0) throw InvalidInput("cannot factor 0");
  if (n > 1000000000000ULL) throw RangeError("factorization limited to n <= 10^12");
  Factorization f;
  for (std::uint32_t p32 : small_primes()) {
    u64 p = p32;
    if (p * p > n) break;
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

int mobius(u64 n) {
  auto f = factorize(n);
  for (auto& [p, e] : f)
    if (e > 1) return 0;
  return f.size() % 2 ? -1 : 1;
}

u64 prime_power_base(u64 n) {
  if (n < 2) return 0;
  auto f = factorize(n);
  return f.size() == 1 ? f[0].first : 0;
}

double von_mangoldt(u64 n) {
  if (n == 0) throw InvalidInput("Lambda(0) undefined");
  u64 p = prime_power_base(n);
  return p ? std::log((double)p) : 0.0;
}

u64 euler_phi(u64 n) {
  u64 r = n;
  for (auto& [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

int omega(u64 n) { return (int)factorize(n).size(); }

int big_omega(u64 n) {
  int c = 0;
  for (auto& [p, e] : factorize(n)) c += e;
  return c;
}

u64 divisor_count(u64 n) { return divisor_k(n, 2); }

u64 divisor_k(u64 n, int k) {
  if (k < 1) throw InvalidInput("d_k needs k >= 1");
  u64 r = 1;
  for (auto& [p, e] : factorize(n)) {
    // C(e + k - 1, k - 1)
    u64 c = 1;
    for (int i = 1; i <= e; ++i) c = c * (u64)(k - 1 + i) / (u64)i;
    r *= c;
  }
  return r;
}

std::vector<u64> divisors(u64 n) {
  std::vector<u64> out = {1};
  for (auto& [p, e] : factorize(n)) {
    std::size_t cur = out.size();
    u64 pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < cur; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

u64 gcd_u64(u64 a, u64 b) {
  while (b) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

ArithFn parse_arith_fn(const std::string& name) {
  if (name == "mu") return ArithFn::Mu;
  if (name == "lambda") return ArithFn::Lambda;
  if (name == "phi") return ArithFn::Phi;
  if (name == "omega") return ArithFn::Omega;
  if (name == "Omega") return ArithFn::BigOmega;
  if (name == "d_k") return ArithFn::DivisorK;
  throw InvalidInput("unknown arithmetic function '" + name + "'");
}

double arith_fn(ArithFn f, u64 n, int k) {
  if (n == 0) throw InvalidInput("arithmetic functions need n >= 1");
  switch (f) {
    case ArithFn::Mu: return mobius(n);
    case ArithFn::Lambda: return von_mangoldt(n);
    case ArithFn::Phi: return (double)euler_phi(n);
    case ArithFn::Omega: return omega(n);
    case ArithFn::BigOmega: return big_omega(n);
    case ArithFn::DivisorK: return (double)divisor_k(n, k);
  }
  return 0.0;
}

std::vector<std::uint32_t> smallest_prime_factor_table(u64 N) {
  std::vector<std::uint32_t> spf(N + 1, 0);
  std::vector<std::uint32_t> primes;
  for (u64 i = 2; i <= N; ++i) {
    if (spf[i] == 0) {
      spf[i] = (std::uint32_t)i;
      primes.push_back((std::uint32_t)i);
    }
    for (std::uint32_t p : primes) {
      if (p > spf[i] || (u64)p * i > N) break;
      spf[p * i] = p;
    }
  }
  return spf;
}

std::vector<int> mobius_table(u64 N) {
  auto spf = smallest_prime_factor_table(N);
  std::vector<int> mu(N + 1, 0);
  if (N >= 1) mu[1] = 1;
  for (u64 i = 2; i <= N; ++i) {
    u64 p = spf[i], m = i / p;
    mu[i] = (m % p == 0) ? 0 : -mu[m];
  }
  return mu;
}

// ---- sieve weights ----

long long SieveWeights::divisor_sum(u64 n) const {
  if (n == 0) throw InvalidInput("divisor sums need n >= 1");
  if (kind == SieveKind::PrimeMajorant) {
    // squarefree d | (n, P(w)) with omega(d) <= 2s; sum of mu(d) depends only
    // on the number t of primes below w dividing n.
    int t = 0;
    for (auto& [p, e] : factorize(n))
      if (p < w) ++t;
    long long acc = 0, binom = 1;
    for (int k = 0; k <= std::min(t, 2 * s); ++k) {
      acc += (k % 2 ? -binom : binom);
      binom = binom * (t - k) / (k + 1);
    }
    return acc;
  }
  long long acc = 0;
  for (auto& [e, l] : lambdas)
    if (n % e == 0) acc += l;
  return acc;
}

double SieveWeights::reciprocal_sum() const {
  long double acc = 0;
  for (auto& [e, l] : lambdas) acc += (long double)l / (long double)e;
  return (double)acc;
}

namespace {

void enumerate_squarefree(const std::vector<u64>& ps, int max_omega, std::map<u64, int>& out,
                          std::size_t cap) {
  // depth-first over subsets in increasing prime order
  std::vector<std::pair<std::size_t, u64>> stack = {{0, 1}};
  std::vector<int> sizes = {0};
  while (!stack.empty()) {
    auto [start, prod] = stack.back();
    int sz = sizes.back();
    stack.pop_back();
    sizes.pop_back();
    out[prod] = (sz % 2) ? -1 : 1;
    if (out.size() > cap) throw ResourceError("sieve weight support too large");
    if (sz == max_omega) continue;
    for (std::size_t i = start; i < ps.size(); ++i) {
      stack.push_back({i + 1, prod * ps[i]});
      sizes.push_back(sz + 1);
    }
  }
}

}  // namespace

SieveWeights build_prime_majorant(double z) {
  if (!(z >= 2.0)) throw RangeError("prime-majorant sieve needs z >= 2");
  if (z > 1e12) throw RangeError("prime-majorant sieve supports z <= 10^12");
  std::vector<u64> ps;
  for (std::uint32_t p : small_primes()) {
    if ((double)p > z) break;
    ps.push_back(p);
  }
  // For each s, take the largest prefix of primes whose top 2s product is <= z.
  double best_v = 2.0;
  int best_s = 0;
  std::size_t best_count = 0;
  for (int s = 1; s <= 12; ++s) {
    std::size_t count = 0;
    for (std::size_t c = 1; c <= ps.size(); ++c) {
      long double prod = 1;
      for (std::size_t i = c >= (std::size_t)(2 * s) ? c - 2 * s : 0; i < c; ++i) prod *= ps[i];
      if (prod <= z) count = c;
    }
    if (count == 0) continue;
    // V = sum_{k <= 2s} (-1)^k e_k(1/p : p in the prefix)
    std::vector<long double> e(2 * s + 1, 0.0L);
    e[0] = 1.0L;
    for (std::size_t i = 0; i < count; ++i)
      for (int k = 2 * s; k >= 1; --k) e[k] += e[k - 1] / ps[i];
    long double v = 0;
    for (int k = 0; k <= 2 * s; ++k) v += (k % 2 ? -e[k] : e[k]);
    if ((double)v < best_v - 1e-15) {
      best_v = (double)v;
      best_s = s;
      best_count = count;
    }
  }
  SieveWeights sw;
  sw.kind = SieveKind::PrimeMajorant;
  sw.z = z;
  sw.s = best_s;
  std::vector<u64> used(ps.begin(), ps.begin() + best_count);
  sw.w = best_count < ps.size() ? ps[best_count] : (u64)std::floor(z) + 1;
  enumerate_squarefree(used, 2 * best_s, sw.lambdas, 50000000);
  return sw;
}

SieveWeights build_coprimality_weights(u64 q, u64 d, double A) {
  if (q < 3) throw RangeError("coprimality weights need q >= 3");
  if (d == 0 || q % d != 0) throw InvalidInput("d must divide q");
  if (!(A > 0)) throw RangeError("A must be positive");
  SieveWeights sw;
  sw.kind = SieveKind::Coprimality;
  sw.q = q;
  sw.d = d;
  sw.A = A;
  double lq = std::log((double)q);
  sw.prime_cap = std::pow(lq, A);
  double llq = std::log(lq);
  sw.omega_cap = llq > 0 ? (int)std::floor(llq * llq) : 0;
  sw.z = std::exp(A * std::pow(std::max(llq, 0.0), 3));
  std::vector<u64> ps;
  for (auto& [p, e] : factorize(d))
    if ((double)p <= sw.prime_cap) ps.push_back(p);
  enumerate_squarefree(ps, sw.omega_cap, sw.lambdas, 50000000);
  return sw;
}

}  // namespace skewlab
