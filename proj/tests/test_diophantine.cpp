#include "doctest.h"

#include <cmath>

#include "skewlab/diophantine.hpp"
#include "skewlab/errors.hpp"

using namespace skewlab;

namespace {

std::vector<BigInt> qs(const ContinuedFraction& cf) {
  std::vector<BigInt> out;
  for (long k = 0; k <= cf.depth(); ++k) out.push_back(cf.q(k));
  return out;
}

void check_laws(const ContinuedFraction& cf, long upto) {
  for (long k = 0; k <= upto; ++k) {
    // p_k q_{k-1} - p_{k-1} q_k = (-1)^{k-1}
    BigInt det = cf.p(k) * cf.q(k - 1) - cf.p(k - 1) * cf.q(k);
    CHECK(det == ((k % 2 == 1) ? 1 : -1));
    if (k >= 1) {
      const BigInt& a = cf.quotients()[k - 1];
      CHECK(cf.q(k) == a * cf.q(k - 1) + cf.q(k - 2));
      CHECK(cf.p(k) == a * cf.p(k - 1) + cf.p(k - 2));
    }
  }
  for (long k = 1; k < upto; ++k) {
    BigReal d = dist_to_integers_exact(cf.q(k), cf);
    BigReal lower(1.0, cf.precision()), upper(1.0, cf.precision());
    lower /= BigReal(BigInt(cf.q(k + 1) * 2), cf.precision());
    upper /= BigReal(cf.q(k + 1), cf.precision());
    CHECK(d >= lower);
    CHECK(d <= upper);
  }
}

}  // namespace

TEST_CASE("convergents of small expansions") {
  auto golden = cf_from_quotients(std::vector<long>{1, 1, 1, 1, 1, 1}, 6);
  std::vector<BigInt> fib = {1, 1, 2, 3, 5, 8, 13};
  CHECK(qs(golden) == fib);
  CHECK(golden.alpha() == doctest::Approx(0.6180339887498949).epsilon(1e-15));

  auto silver = cf_from_quotients(std::vector<long>{2, 2, 2, 2}, 4);
  std::vector<BigInt> pell = {1, 2, 5, 12, 29};
  CHECK(qs(silver) == pell);

  auto one = cf_from_quotients(std::vector<long>{1}, 1);
  CHECK(one.p(1) == 1);
  CHECK(one.q(1) == 1);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(cf_from_quotients(std::vector<long>{}, 0), InvalidInput);
  CHECK_THROWS_AS(cf_from_quotients(std::vector<long>{1, 0, 2}, 3), InvalidInput);
  CHECK_THROWS_AS(cf_from_quotients(std::vector<long>{1, 2}, 3), InvalidInput);
  CHECK_THROWS_AS(AnalysisParams::make(0.1), InvalidInput);
  auto p = AnalysisParams::make(0.05);
  CHECK(p.tau == doctest::Approx(0.5 * std::min(0.0025, 0.05 / 8)));
}

TEST_CASE("expansion of reals") {
  BigReal s2 = BigReal::sqrt(BigReal(2.0, 512)) - BigReal(1.0, 512);
  auto cf = cf_from_real(s2, 4);
  CHECK(cf.quotients() == std::vector<BigInt>{2, 2, 2, 2});

  BigReal g = BigReal::sqrt(BigReal(5.0, 512)) - BigReal(1.0, 512);
  mpfr_div_2ui(g.get(), g.get(), 1, MPFR_RNDN);
  auto gcf = cf_from_real(g, 5);
  CHECK(gcf.quotients() == std::vector<BigInt>{1, 1, 1, 1, 1});

  CHECK_THROWS_AS(cf_from_real(BigReal(0.5, 256), 3, BigReal(256)), PrecisionError);

  // 512 bits of sqrt(2)-1 carry roughly 0.66 * 512 / log2(1+sqrt2) quotients.
  try {
    cf_from_real(s2, 2000);
    FAIL("expected precision exhaustion");
  } catch (const PrecisionError& e) {
    CHECK(e.last_reliable() > 150);
    CHECK(e.last_reliable() < 2000);
  }
}

TEST_CASE("round trip through the real value") {
  std::vector<long> a = {3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14};
  auto cf = cf_from_quotients(a, (long)a.size(), 1024);
  auto back = cf_from_real(cf.value(), (long)a.size());
  std::vector<BigInt> big(a.begin(), a.end());
  CHECK(back.quotients() == big);
}

TEST_CASE("decimal entry tracks its digits") {
  auto cf = cf_from_decimal("0.6180339887498948482045868343656", 10);
  CHECK(cf.quotients() == std::vector<BigInt>(10, BigInt(1)));
  CHECK_THROWS_AS(cf_from_decimal("0.61803", 40), PrecisionError);
}

TEST_CASE("distance to the integers") {
  auto golden = cf_from_quotients(std::vector<long>(30, 1), 30);
  // |5 alpha - 3| with alpha = (sqrt5 - 1)/2
  CHECK(dist_to_integers(5, golden) == doctest::Approx(0.09016994374947451).epsilon(1e-12));
  CHECK(dist_to_integers(0, golden) == 0.0);
  for (long k = 1; k < 25; ++k) {
    double d = dist_to_integers(golden.q(k), golden);
    double q1 = golden.q(k + 1).get_d();
    CHECK(d >= 1.0 / (2 * q1));
    CHECK(d <= 1.0 / q1);
  }
}

TEST_CASE("convergent laws on several alphas") {
  check_laws(cf_from_quotients(std::vector<long>(40, 1), 40), 39);
  check_laws(cf_from_quotients(std::vector<long>(40, 2), 40), 39);
  std::vector<long> e_like;
  for (int k = 1; k <= 14; ++k) {
    e_like.push_back(1);
    e_like.push_back(2 * k);
    e_like.push_back(1);
  }
  check_laws(cf_from_quotients(e_like, 40), 39);
  std::vector<long> mixed;
  for (int k = 0; k < 40; ++k) mixed.push_back(1 + (k * 7919) % 13);
  check_laws(cf_from_quotients(mixed, 40), 39);

  // a_{k+1} = q_k^2 + 1 grows q like a tower; 4096 bits hold 6 levels.
  std::vector<BigInt> liouville = {BigInt(2)};
  BigInt q0 = 1, q1 = 2;
  for (int k = 0; k < 5; ++k) {
    BigInt a = q1 * q1 + 1;
    liouville.push_back(a);
    BigInt q2 = a * q1 + q0;
    q0 = q1;
    q1 = q2;
  }
  auto lv = cf_from_quotients(liouville, (long)liouville.size());
  long reliable = lv.last_reliable_index();
  CHECK(reliable >= 4);
  check_laws(lv, reliable);
}

TEST_CASE("n_star and K_n") {
  auto golden = cf_from_quotients(std::vector<long>(10, 1), 10);
  CHECK(n_star(1, golden, 0.004) == 1);
  CHECK(n_star(4, golden, 1e6) == 1);
  CHECK(k_n(4, golden, 1e6) == BigRational(8));
  CHECK_THROWS_AS(k_n(10, golden, 0.004), RangeError);

  // q_1..q_4 = 10, 101, 1020, 5201, q_5 ~ 1.56e11 clears exp(tau q_4).
  auto p = AnalysisParams::make(0.099);
  auto cf = cf_from_quotients(std::vector<long>{10, 10, 10, 5, 30000000, 1, 1, 1}, 8);
  // Scan oracle: largest k <= 7 with log q_k >= tau q_{k-1}.
  long expect = 1;
  for (long k = 2; k <= 7; ++k)
    if (std::log(cf.q(k).get_d()) >= p.tau * cf.q(k - 1).get_d()) expect = k;
  CHECK(expect == 5);
  CHECK(n_star(7, cf, p) == 5);
  long prev = 0;
  for (long n = 1; n <= 7; ++n) {
    long v = n_star(n, cf, p);
    CHECK(v >= prev);
    prev = v;
  }
  // n* = n and a_{n+1} = 1
  CHECK(k_n(5, cf, p) == BigRational(cf.q(6), cf.q(5)));
}
