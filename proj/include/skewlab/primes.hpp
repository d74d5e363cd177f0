#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace skewlab {

using u64 = std::uint64_t;

// Segmented odd-only sieve of Eratosthenes. Segments are built on first use
// (or in parallel via prefetch) and are read-only afterwards.
class PrimeSource {
 public:
  static constexpr u64 kDefaultLimit = 2000000000ULL;
  static constexpr u64 kDefaultSegment = 1ULL << 20;  // odd numbers per segment

  explicit PrimeSource(u64 limit = kDefaultLimit, u64 segment_size = kDefaultSegment);
  ~PrimeSource();
  PrimeSource(const PrimeSource&) = delete;
  PrimeSource& operator=(const PrimeSource&) = delete;

  u64 limit() const { return limit_; }
  u64 segment_size() const { return seg_odds_; }

  bool is_prime(u64 n) const;
  // Calls fn(p) for each prime in [lo, hi] in ascending order.
  void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& fn) const;
  std::vector<u64> primes_in(u64 lo, u64 hi) const;
  u64 prime_count(u64 hi) const;
  // Build every segment covering [0, hi] using the given number of threads.
  void prefetch(u64 hi, int threads) const;

  // Raw access for tight loops: calls fn(p) for primes in [lo, hi] segment by
  // segment without std::function overhead.
  template <class F>
  void scan(u64 lo, u64 hi, F&& fn) const;

 private:
  struct Segment;
  const Segment& segment(u64 index) const;
  void check_range(u64 hi) const;

  u64 limit_;
  u64 seg_odds_;
  std::vector<std::uint32_t> base_primes_;
  mutable std::vector<std::unique_ptr<Segment>> segments_;
  mutable std::vector<std::unique_ptr<std::once_flag>> flags_;
};

struct PrimeSource::Segment {
  u64 first_odd = 0;  // segment covers odd numbers first_odd, first_odd+2, ...
  std::vector<std::uint64_t> composite;  // bit i set when first_odd + 2i is composite
};

template <class F>
void PrimeSource::scan(u64 lo, u64 hi, F&& fn) const {
  check_range(hi);
  if (hi < 2 || lo > hi) return;
  if (lo <= 2) fn((u64)2);
  u64 start = lo < 3 ? 3 : (lo | 1ULL);
  if (start > hi) return;
  u64 seg_span = 2 * seg_odds_;
  for (u64 s = start / seg_span; s * seg_span <= hi; ++s) {
    const Segment& seg = segment(s);
    u64 first = seg.first_odd;
    u64 i0 = start > first ? (start - first) / 2 : 0;
    u64 last = std::min(hi, first + 2 * (seg_odds_ - 1));
    if (last < first) continue;
    u64 i1 = (last - first) / 2;
    for (u64 i = i0; i <= i1; ++i) {
      if (seg.composite[i >> 6] >> (i & 63) & 1ULL) continue;
      u64 n = first + 2 * i;
      if (n >= 3) fn(n);
    }
  }
}

// Sum of log p over primes p <= N.
double chebyshev_theta(const PrimeSource& primes, u64 N);

// (p, p mod q) for primes in [lo, hi].
std::vector<std::pair<u64, u64>> residue_stream(const PrimeSource& primes, u64 lo, u64 hi,
                                                u64 q);

// ---- arithmetic functions ----

using Factorization = std::vector<std::pair<u64, int>>;  // (prime, exponent)

Factorization factorize(u64 n);
int mobius(u64 n);
double von_mangoldt(u64 n);
// Prime p with n = p^k (k >= 1), else 0.
u64 prime_power_base(u64 n);
u64 euler_phi(u64 n);
int omega(u64 n);
int big_omega(u64 n);
u64 divisor_count(u64 n);
// Number of ordered k-tuples with product n.
u64 divisor_k(u64 n, int k);
std::vector<u64> divisors(u64 n);
u64 gcd_u64(u64 a, u64 b);

enum class ArithFn { Mu, Lambda, Phi, Omega, BigOmega, DivisorK };
ArithFn parse_arith_fn(const std::string& name);
double arith_fn(ArithFn f, u64 n, int k = 2);

// Tables for n <= N (index n), computed by a linear sieve.
std::vector<int> mobius_table(u64 N);
std::vector<std::uint32_t> smallest_prime_factor_table(u64 N);

// ---- sieve weights ----

enum class SieveKind { PrimeMajorant, Coprimality };

struct SieveWeights {
  SieveKind kind = SieveKind::PrimeMajorant;
  double z = 0.0;
  std::map<u64, int> lambdas;  // d -> lambda_d, all values in {-1, 0, 1}
  // prime-majorant parameters: lambda_d = mu(d) on d | P(w) with omega(d) <= 2s
  u64 w = 0;
  int s = 0;
  // coprimality parameters
  u64 q = 0, d = 0;
  double A = 0.0;
  double prime_cap = 0.0;  // (log q)^A
  int omega_cap = 0;       // floor((log log q)^2)

  // sum_{e | n, e <= z} lambda_e
  long long divisor_sum(u64 n) const;
  // sum_e lambda_e / e
  double reciprocal_sum() const;
};

SieveWeights build_prime_majorant(double z);
SieveWeights build_coprimality_weights(u64 q, u64 d, double A);

}  // namespace skewlab
