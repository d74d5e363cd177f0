#include "doctest.h"

#include <cmath>
#include <random>

#include "skewlab/errors.hpp"
#include "skewlab/identities.hpp"

using namespace skewlab;

TEST_CASE("log vectors") {
  CHECK(LogVector::log_of(12) == LogVector::log_of(3) + LogVector::log_of(4));
  CHECK((LogVector::log_of(6) - LogVector::log_of(2) - LogVector::log_of(3)).is_zero());
  CHECK(LogVector::log_of(1).is_zero());
  CHECK(lambda_vec(9) == LogVector::log_of(3));
  CHECK(lambda_vec(12).is_zero());
}

TEST_CASE("Vaughan decomposition examples") {
  auto t = vaughan_decompose(7, 2);
  CHECK(t.term1 == LogVector::log_of(7));
  CHECK(t.term2.is_zero());
  CHECK(t.term3.is_zero());
  CHECK(t.total == LogVector::log_of(7));
  CHECK(vaughan_decompose(12, 2).total.is_zero());
  auto p = vaughan_decompose(101, 1);
  CHECK(p.term1 == LogVector::log_of(101));
  CHECK(p.total == LogVector::log_of(101));
  CHECK_THROWS_AS(vaughan_decompose(5, 5), PreconditionError);
}

TEST_CASE("Vaughan identity holds exactly") {
  for (u64 z : {1, 2, 5, 10, 30})
    for (u64 n = z + 1; n <= 3000; ++n) REQUIRE(vaughan_decompose(n, z).total == lambda_vec(n));
}

TEST_CASE("Linnik identity") {
  auto r4 = linnik_check(4, 1);
  CHECK(r4.lhs == mpq_class(1, 2));
  CHECK(r4.rhs == mpq_class(1, 2));
  auto r6 = linnik_check(6, 1);
  CHECK(r6.lhs == 0);
  CHECK(r6.rhs == 0);
  auto r8 = linnik_check(8, 1);
  CHECK(r8.lhs == mpq_class(1, 3));
  // prime power with base below z: both sides vanish
  auto r4z = linnik_check(4, 2);
  CHECK(r4z.lhs == 0);
  CHECK(r4z.rhs == 0);
  for (u64 z : {1, 2, 10}) {
    LinnikTable table(4000, z);
    for (u64 n = 2; n <= 4000; ++n) {
      auto r = table.at(n);
      REQUIRE(r.lhs == r.rhs);
    }
  }
}

TEST_CASE("Heath-Brown coefficients") {
  CHECK(heathbrown_coeff_check(1, 1000, 1000).worst_defect == 0.0);
  CHECK(heathbrown_coeff_check(2, 32, 1000).worst_defect == 0.0);
  CHECK(heathbrown_coeff_check(3, 10, 1000).worst_defect == 0.0);
  CHECK_THROWS_AS(heathbrown_coeff_check(2, 10, 1000), PreconditionError);
  CHECK(heathbrown_coeff_check(2, 10, 100).checked == 100);
}

TEST_CASE("Buchstab identity") {
  auto same = buchstab_check(1, 1000, 7, 7);
  CHECK(same.lhs == same.rhs);
  auto r = buchstab_check(1, 100, 2, 10);
  CHECK(r.lhs == r.rhs);
  // 1 and the primes 11..97 survive sieving by primes below 10
  CHECK(r.lhs == 22);
  auto single = buchstab_check(97, 97, 2, 10);
  CHECK(single.lhs == 1);
  CHECK(single.rhs == 1);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    u64 lo = 1 + rng() % 990000, len = 1 + rng() % 10000;
    u64 w = 2 + rng() % 50, z = w + rng() % 200;
    auto b = buchstab_check(lo, lo + len - 1, w, z);
    CHECK(b.lhs == b.rhs);
  }
}

TEST_CASE("partition lemma") {
  double eta = 1e-6;
  std::vector<double> quarter(4, 0.25);
  Partition expected{{3}, {4}, {1, 2}};
  CHECK(partition_valid(quarter, eta, expected));
  auto p = combi_partition(quarter, eta);
  CHECK(partition_valid(quarter, eta, p));
  CHECK(p.K == std::vector<int>{1, 2});

  std::vector<double> fifth(5, 0.2);
  CHECK(partition_valid(fifth, eta, combi_partition(fifth, eta)));
  CHECK_THROWS_AS(combi_partition({0.5, 0.2, 0.2, 0.1}, eta), PreconditionError);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.02, 1.0);
  int produced = 0;
  for (int t = 0; t < 2000 && produced < 300; ++t) {
    int k = 4 + (int)(rng() % 9);
    std::vector<double> a(k);
    double s = 0;
    for (double& v : a) s += (v = u(rng));
    for (double& v : a) v /= s;
    double fix = 1.0;
    for (int i = 0; i + 1 < k; ++i) fix -= a[i];
    a[k - 1] = fix;
    bool ok = true;
    for (int i = 0; i < k; ++i) {
      double cap = (i + 1 < k) ? 1.0 / 3 - 100 * eta : 1.0 / 3 + 100 * eta;
      if (!(a[i] > 0 && a[i] < cap)) ok = false;
    }
    if (!ok) continue;
    ++produced;
    REQUIRE(partition_valid(a, eta, combi_partition(a, eta)));
  }
  CHECK(produced >= 100);
}
