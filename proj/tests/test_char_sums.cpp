#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "skewlab/char_sums.hpp"
#include "skewlab/errors.hpp"

using namespace skewlab;
using cd = std::complex<double>;

namespace {

constexpr double kTau = 6.283185307179586;

cd ex(double t) { return {std::cos(kTau * t), std::sin(kTau * t)}; }

// smallest f | q with chi(a) = 1 for every unit a = 1 (mod f)
u64 brute_conductor(const CharacterTable& t, u64 j) {
  u64 q = t.modulus();
  for (u64 f : divisors(q)) {
    bool ok = true;
    for (u64 a = 1; a < q && ok; a += f)
      if (gcd_u64(a, q) == 1 && t.value_exponent(j, a) != 0) ok = false;
    if (ok) return f;
  }
  return q;
}

double theta_direct(u64 lo, u64 hi, u64 q, u64 r, u64 v) {
  double s = 0;
  for (u64 n = std::max<u64>(lo, 2); n <= hi; ++n) {
    bool prime = true;
    for (u64 d = 2; d * d <= n; ++d)
      if (n % d == 0) {
        prime = false;
        break;
      }
    if (prime && (n % q) % r == v % r) s += std::log((double)n);
  }
  return s;
}

}  // namespace

TEST_CASE("character group structure") {
  CharacterTable t1(1);
  CHECK(t1.size() == 1);
  CHECK(t1.is_principal(0));
  CHECK(t1.value(0, 0) == cd(1.0));

  CharacterTable t5(5);
  CHECK(t5.size() == 4);
  int principal = 0, primitive = 0;
  for (u64 j = 0; j < 4; ++j) {
    principal += t5.is_principal(j);
    primitive += t5.is_primitive(j);
  }
  CHECK(principal == 1);
  CHECK(primitive == 3);
  // cyclic of order 4: some character takes the value i
  bool has_i = false;
  for (u64 j = 0; j < 4; ++j)
    for (u64 a = 1; a < 5; ++a) has_i |= std::abs(t5.value(j, a) - cd(0, 1)) < 1e-12;
  CHECK(has_i);

  CharacterTable t8(8);
  CHECK(t8.size() == 4);
  for (u64 j = 0; j < 4; ++j) {
    CHECK(t8.order(j) <= 2);
    for (u64 a = 1; a < 8; a += 2) CHECK(std::abs(std::abs(t8.value(j, a).real()) - 1.0) < 1e-12);
    CHECK(t8.value(j, 4) == cd(0.0));
  }
  CHECK_THROWS_AS(CharacterTable(1000001), ResourceError);
}

TEST_CASE("multiplicativity and conductors up to 200") {
  for (u64 q = 1; q <= 200; ++q) {
    CharacterTable t(q);
    REQUIRE(t.size() == euler_phi(q));
    u64 prim = 0;
    for (u64 j = 0; j < t.size(); ++j) {
      auto k = t.exponent_table(j);
      for (u64 a = 0; a < q; ++a) {
        REQUIRE((k[a] < 0) == (gcd_u64(a, q) != 1 && q > 1));
        if (k[a] < 0) continue;
        for (u64 b = 0; b < q; ++b) {
          if (k[b] < 0) continue;
          REQUIRE(k[a * b % q] == (k[a] + k[b]) % (long long)t.exponent());
        }
      }
      REQUIRE(t.conductor(j) == brute_conductor(t, j));
      prim += t.is_primitive(j);
      // conjugate multiplies to the principal character
      auto kc = t.exponent_table(t.conjugate(j));
      for (u64 a = 0; a < q; ++a)
        if (k[a] >= 0) REQUIRE((k[a] + kc[a]) % (long long)t.exponent() == 0);
    }
    // number of primitive characters: sum_{d | q} mu(q/d) phi(d)
    long long expect = 0;
    for (u64 d : divisors(q)) expect += mobius(q / d) * (long long)euler_phi(d);
    REQUIRE((long long)prim == expect);
  }
}

TEST_CASE("orthogonality") {
  for (u64 q = 1; q <= 500; ++q) REQUIRE(orthogonality_defect(CharacterTable(q)) < 1e-9);
}

TEST_CASE("Gauss sums") {
  CharacterTable t5(5), t3(3);
  for (u64 j = 0; j < 4; ++j) {
    if (!t5.is_primitive(j)) {
      CHECK_THROWS_AS(gauss_sum(t5, j, 1), PreconditionError);
      continue;
    }
    for (long long x = 1; x < 5; ++x) CHECK(std::abs(gauss_sum(t5, j, x)) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    CHECK(std::abs(gauss_sum(t5, j, 0)) < 1e-12);
    CHECK(std::abs(gauss_sum(t5, j, 10)) < 1e-12);
  }
  CHECK(std::abs(gauss_sum(t3, 1, 1)) == doctest::Approx(std::sqrt(3.0)));
  // FFT agrees with direct summation
  for (u64 e : {7, 12, 25, 64, 99}) {
    CharacterTable t(e);
    for (u64 j = 0; j < t.size(); ++j) {
      if (!t.is_primitive(j)) continue;
      auto all = gauss_sums_all(t, j);
      for (u64 x = 0; x < e; ++x) {
        cd direct = 0;
        for (u64 b = 0; b < e; ++b) direct += t.value(j, b) * ex((double)(b * x % e) / e);
        REQUIRE(std::abs(all[x] - direct) < 1e-9);
        if (gcd_u64(x, e) == 1) REQUIRE(std::abs(std::abs(all[x]) - std::sqrt((double)e)) < 1e-9);
      }
    }
  }
}

TEST_CASE("progression character statistic") {
  for (u64 q : {7, 30, 64, 101}) {
    CharacterTable t(q);
    for (u64 j = 1; j < t.size(); ++j) CHECK(progression_char_stat(t, 1, j) < 1e-9);
    CHECK_THROWS_AS(progression_char_stat(t, 1, 0), PreconditionError);
  }
  CHECK_THROWS_AS(progression_char_stat(CharacterTable(30), 3, 1), PreconditionError);
  // Legendre symbol via Euler's criterion
  u64 p = 43;
  CharacterTable t(p);
  u64 quad = 0;
  for (u64 j = 1; j < t.size(); ++j)
    if (t.order(j) == 2) quad = j;
  REQUIRE(quad != 0);
  auto legendre = [&](u64 a) {
    u64 r = 1, b = a % p, e = (p - 1) / 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r == 1 ? 1.0 : (r == 0 ? 0.0 : -1.0);
  };
  for (u64 a = 0; a < p; ++a) REQUIRE(t.value(quad, a).real() == doctest::Approx(legendre(a)));
  for (u64 r : {2, 5, 42}) {
    std::vector<double> cls(r, 0);
    for (u64 a = 0; a < p; ++a) cls[a % r] += legendre(a);
    double s = 0;
    for (double c : cls) s += std::abs(c);
    CHECK(progression_char_stat(t, r, quad) == doctest::Approx(s));
  }
}

TEST_CASE("windowed twisted statistic") {
  CharacterTable t(499);
  CHECK(windowed_twisted_stat(t, 1, 3) == doctest::Approx(498.0));
  CHECK_THROWS_AS(windowed_twisted_stat(t, 40, 3), RangeError);
  for (u64 q : {101, 360, 499}) {
    CharacterTable tq(q);
    u64 Hp = 6;
    for (u64 j = 1; j < tq.size(); j += 7) {
      double brute = 0;
      for (u64 z = 0; z < q; ++z) {
        cd s = 0;
        for (u64 a = z; a < std::min(q, z + Hp); ++a) s += tq.value(j, a);
        brute += std::abs(s);
      }
      REQUIRE(windowed_twisted_stat(tq, Hp, j, BetaPolicy::zero()) == doctest::Approx(brute));
      // the grid sup dominates beta = 0 and a fine brute-force scan
      double full = windowed_twisted_stat(tq, Hp, j);
      REQUIRE(full >= brute - 1e-9);
    }
  }
  // grid plus refinement is close to a dense scan
  std::vector<cd> c{1.0, cd(0.3, -0.2), -0.7, cd(0, 1), 0.25};
  double dense = 0;
  for (int k = 0; k < 200000; ++k) {
    cd s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * ex(k / 200000.0 * i);
    dense = std::max(dense, std::abs(s));
  }
  CHECK(sup_over_beta(c, 4, {}) == doctest::Approx(dense).epsilon(1e-8));
}

TEST_CASE("progression Huxley statistic") {
  PrimeSource src(2000000);
  // r = 1, H = x: |theta(x) - x|
  auto one = huxley_stat_progressions(100000, 100000, 7, 1, src);
  CHECK(one.value == doctest::Approx(std::abs(theta_direct(0, 100000, 1, 1, 0) - 100000.0)).epsilon(1e-9));
  CHECK(one.trivial_scale == 100000.0);
  // q > x, r = 2
  auto two = huxley_stat_progressions(5000, 5000, 10007, 2, src);
  double expect = std::abs(theta_direct(0, 5000, 10007, 2, 0) - 2500) +
                  std::abs(theta_direct(0, 5000, 10007, 2, 1) - 2500);
  CHECK(two.value == doctest::Approx(expect).epsilon(1e-9));
  // sliding windows against a direct double loop
  u64 x = 300, H = 50, q = 37, r = 4;
  double brute = 0;
  for (u64 y = 0; y < x; ++y)
    for (u64 v = 0; v < r; ++v) brute += std::abs(theta_direct(y, y + H, q, r, v) - (double)H / r);
  auto sl = huxley_stat_progressions(x, H, q, r, src);
  CHECK(sl.value == doctest::Approx(brute).epsilon(1e-9));
  CHECK(sl.trivial_scale == (double)H * x);
  CHECK_THROWS_AS(huxley_stat_progressions(100, 10, 6, 3, src), PreconditionError);
  CHECK_THROWS_AS(huxley_stat_progressions(200000000, 10, 7, 3, src), ResourceError);
}

TEST_CASE("windowed Huxley statistic") {
  PrimeSource src(100000);
  // beta = 0, r = 1, H' = q collapses to a plain window difference at z = 0
  u64 x = 2000, q = 101;
  auto s = huxley_stat_windows(x, x, q, 1, q, src, BetaPolicy::zero());
  double brute = 0;
  for (u64 z = 0; z < q; ++z) {
    double w = 0, m = 0;
    for (u64 a = z; a < q; ++a) {
      w += theta_direct(0, x, q, q, a);
      m += gcd_u64(a, q) == 1 ? (double)x / 100 : 0;
    }
    brute += std::abs(w - m);
  }
  CHECK(s.value == doctest::Approx(brute).epsilon(1e-9));
  CHECK(s.trivial_scale == (double)x * q);

  // main term against a direct reduced-residue count
  for (u64 z : {0, 13, 90})
    for (u64 v : {0, 1, 2}) {
      double count = 0;
      for (u64 a = z; a < std::min<u64>(q, z + 20); ++a) count += gcd_u64(a, q) == 1 && a % 3 == v;
      CHECK(std::abs(reduced_residue_window_sum(q, 3, v, z, 20, 0.0) - count) < 1e-9);
    }

  // sliding form against direct evaluation on a small case
  u64 xs = 40, H = 30, qs = 23, r = 2, Hp = 3;
  BetaPolicy pol;
  double total = 0;
  for (u64 y = 0; y < xs; ++y) {
    std::vector<double> w(qs, 0);
    for (u64 n = y; n <= y + H; ++n) {
      bool prime = n >= 2;
      for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) prime = false;
      if (prime) w[n % qs] += std::log((double)n);
    }
    for (u64 z = 0; z < qs; ++z) {
      double best = 0;
      for (u64 v = 0; v < r; ++v) {
        std::vector<cd> c;
        for (u64 a = z; a < std::min(qs, z + Hp); ++a)
          if (a % r == v) c.push_back(w[a] - (gcd_u64(a, qs) == 1 ? (double)H / 22 : 0));
        best = std::max(best, sup_over_beta(c, (int)c.size() - 1, pol));
      }
      total += best;
    }
  }
  auto sw = huxley_stat_windows(xs, H, qs, r, Hp, src, pol);
  CHECK(sw.value == doctest::Approx(total).epsilon(1e-6));
}

TEST_CASE("residue progression gap") {
  auto g1 = residue_progression_gap(1000, 7, 1);
  CHECK(g1.gap <= 1.0);
  u64 q = 30030, r = 17;
  auto g = residue_progression_gap(q, r, q);
  std::vector<double> cnt(r, 0);
  for (u64 n = 1; n <= q; ++n)
    if (std::gcd(n, q) == 1) cnt[n % r] += 1;
  double norm = 5760.0 / 30030 * 30030 / 17, brute = 0;
  for (double c : cnt) brute += std::abs(c - norm);
  CHECK(g.normalizer == doctest::Approx(norm));
  CHECK(g.gap == doctest::Approx(brute / r));
  CHECK_THROWS_AS(residue_progression_gap(100, 3, 7), InvalidInput);
  // normalizer 10, 100, 1000 with q = 2 * 3 * 5 * 7 * k
  double prev = 1e9;
  for (u64 scale : {10ULL, 100ULL, 1000ULL}) {
    u64 d = 210, rr = 11;
    u64 qq = d * (u64)std::llround(scale * rr * 210.0 / 48.0 / d);
    auto gg = residue_progression_gap(qq, rr, d);
    double ratio = gg.gap / gg.normalizer;
    CHECK(ratio < prev);
    prev = ratio;
  }
}

TEST_CASE("twisted residue windows") {
  u64 q = 1000003;  // prime
  auto w = twisted_residue_window(q, 1, 5, 2, 123456, 1000, 0.0, 0.01);
  u64 prog = 0, cop = 0;
  for (u64 n = 123456; n <= 124456; ++n) {
    prog += n % 5 == 2;
    cop += n % 5 != 0;
  }
  CHECK(w.restricted.real() == doctest::Approx((double)prog));
  CHECK(w.comparison.real() == doctest::Approx((double)cop / 4));
  auto same = twisted_residue_window(q, q, 1, 0, 77, 500, 1e-4, 0.01);
  CHECK(std::abs(same.restricted - same.comparison) < 1e-9);
  CHECK_THROWS_AS(twisted_residue_window(q, 1, 5, 2, 0, 5, 0.0, 0.01), RangeError);
  CHECK_THROWS_AS(twisted_residue_window(q, 1, 5, 2, 0, 1000, 0.99, 0.01), RangeError);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 30; ++t) {
    u64 qp = 2 + rng() % 1000000, y = rng() % 1000000000, H = 1000 + rng() % 5000;
    u64 brute = 0;
    for (u64 n = y; n <= y + H; ++n) brute += std::gcd(n, qp) == 1;
    u64 c = window_coprime_count(qp, y, H);
    CHECK(c == brute);
    double main = (double)H * euler_phi(qp) / qp;
    CHECK(std::abs((double)c - main) <= std::max(50.0, 0.02 * main));
  }
}
