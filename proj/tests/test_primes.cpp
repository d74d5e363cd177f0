#include "doctest.h"

#include <cmath>
#include <random>

#include "skewlab/errors.hpp"
#include "skewlab/primes.hpp"

using namespace skewlab;

namespace {

bool trial_division(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("sieve matches trial division") {
  PrimeSource src(200000, 1024);
  for (u64 n = 0; n <= 100000; ++n) REQUIRE(src.is_prime(n) == trial_division(n));
  CHECK(src.primes_in(1, 10) == std::vector<u64>{2, 3, 5, 7});
  CHECK(src.primes_in(90, 100) == std::vector<u64>{97});
  CHECK(src.primes_in(0, 1).empty());
  CHECK_THROWS_AS(src.primes_in(0, 200001), RangeError);
}

TEST_CASE("prime counts") {
  PrimeSource src(1000000);
  CHECK(src.prime_count(1000000) == 78498);
  // independent plain sieve
  std::vector<bool> comp(1000001, false);
  u64 count = 0;
  for (u64 i = 2; i <= 1000000; ++i) {
    if (comp[i]) continue;
    ++count;
    for (u64 j = i * i; j <= 1000000; j += i) comp[j] = true;
  }
  CHECK(count == 78498);
  PrimeSource threaded(1000000, 4096);
  threaded.prefetch(1000000, 3);
  CHECK(threaded.prime_count(1000000) == 78498);
}

TEST_CASE("Chebyshev theta") {
  PrimeSource src(10000000);
  CHECK(chebyshev_theta(src, 10) == doctest::Approx(std::log(210.0)).epsilon(1e-14));
  CHECK(chebyshev_theta(src, 10) == doctest::Approx(5.347107530717468));
  CHECK(chebyshev_theta(src, 1) == 0.0);
  CHECK(std::abs(chebyshev_theta(src, 10000000) / 1e7 - 1.0) < 0.003);
}

TEST_CASE("residues") {
  PrimeSource src(1000);
  auto r = residue_stream(src, 17, 17, 5);
  REQUIRE(r.size() == 1);
  CHECK(r[0].second == 2);
  for (auto& [p, pq] : residue_stream(src, 2, 1000, 1)) CHECK(pq == 0);
  for (auto& [p, pq] : residue_stream(src, 2, 500, 1009)) CHECK(pq == p);
  CHECK_THROWS_AS(residue_stream(src, 2, 10, 0), InvalidInput);
}

TEST_CASE("arithmetic functions") {
  CHECK(mobius(12) == 0);
  CHECK(mobius(6) == 1);
  CHECK(mobius(30) == -1);
  CHECK(von_mangoldt(9) == doctest::Approx(std::log(3.0)));
  CHECK(von_mangoldt(12) == 0.0);
  CHECK(divisor_k(4, 3) == 6);
  CHECK(euler_phi(36) == 12);
  CHECK(omega(360) == 3);
  CHECK(big_omega(360) == 6);
  CHECK(arith_fn(parse_arith_fn("d_k"), 12, 3) == 18.0);
  CHECK_THROWS_AS(arith_fn(ArithFn::Mu, 0), InvalidInput);
  CHECK(factorize(999999999989ULL).size() == 1);
  // brute force d_3 oracle
  for (u64 n = 1; n <= 200; ++n) {
    u64 c = 0;
    for (u64 a = 1; a <= n; ++a)
      for (u64 b = 1; a * b <= n; ++b)
        if (n % (a * b) == 0) ++c;
    CHECK(divisor_k(n, 3) == c);
  }
  auto mu = mobius_table(5000);
  for (u64 n = 1; n <= 5000; ++n) REQUIRE(mu[n] == mobius(n));
}

TEST_CASE("prime-majorant weights") {
  PrimeSource src(100000);
  for (double z : {10.0, 100.0, 1000.0}) {
    auto sw = build_prime_majorant(z);
    for (auto& [d, l] : sw.lambdas) {
      CHECK(std::abs(l) <= 1);
      CHECK((double)d <= z);
    }
    for (u64 n = 1; n <= 100000; ++n) {
      long long v = sw.divisor_sum(n);
      REQUIRE(v >= 0);
      if (n >= sw.w && src.is_prime(n)) REQUIRE(v >= 1);
    }
    // brute force: the fast divisor sum equals the map-based one
    for (u64 n = 1; n <= 3000; ++n) {
      long long direct = 0;
      for (auto& [d, l] : sw.lambdas)
        if (n % d == 0) direct += l;
      REQUIRE(direct == sw.divisor_sum(n));
    }
  }
  CHECK_THROWS_AS(build_prime_majorant(1.0), RangeError);
}

TEST_CASE("coprimality weights") {
  // d = q prime beyond (log q)^A: only lambda_1
  auto sw = build_coprimality_weights(1000003, 1000003, 2.0);
  REQUIRE(sw.lambdas.size() == 1);
  CHECK(sw.lambdas.at(1) == 1);
  CHECK_THROWS_AS(build_coprimality_weights(100, 7, 2.0), InvalidInput);

  std::mt19937_64 rng(5);
  const u64 qs[] = {30030, 510510, 9699690, 223092870ULL, 1000000, 360360, 2 * 3 * 5 * 7 * 11 * 101};
  for (u64 q : qs) {
    auto divs = divisors(q);
    for (int trial = 0; trial < 4; ++trial) {
      u64 d = divs[rng() % divs.size()];
      for (double A : {1.0, 2.0, 3.0}) {
        auto w = build_coprimality_weights(q, d, A);
        for (auto& [e, l] : w.lambdas) {
          CHECK(mobius(e) == l);
          CHECK(d % e == 0);
          CHECK(omega(e) <= w.omega_cap);
          for (auto& [p, k] : factorize(e)) CHECK((double)p <= w.prime_cap);
        }
        // exact decomposition when both error indicators vanish
        for (u64 n = 1; n <= 10000; ++n) {
          bool big_prime = false;
          for (auto& [p, k] : factorize(gcd_u64(n, d)))
            if ((double)p > w.prime_cap) big_prime = true;
          if (big_prime || omega(n) > w.omega_cap) continue;
          long long lhs = gcd_u64(n, d) == 1 ? 1 : 0;
          REQUIRE(w.divisor_sum(n) == lhs);
        }
      }
    }
  }
}
