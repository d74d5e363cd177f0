#include "doctest.h"

#include <cmath>
#include <random>

#include "skewlab/cocycle.hpp"
#include "skewlab/errors.hpp"

using namespace skewlab;

namespace {

AnalyticCocycle random_cocycle(std::mt19937_64& rng, double tau_prime, int modes,
                               long long max_m) {
  std::uniform_int_distribution<long long> pick(1, max_m);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Mode> out;
  std::vector<long long> used;
  while ((int)out.size() < modes) {
    long long m = pick(rng);
    if (std::find(used.begin(), used.end(), m) != used.end()) continue;
    used.push_back(m);
    double bound = std::exp(-tau_prime * (double)m);
    out.push_back({m, cplx(u(rng), u(rng)) * (bound / std::sqrt(2.0))});
  }
  return AnalyticCocycle(out, tau_prime);
}

ContinuedFraction test_alpha() {
  std::vector<long> a = {2, 3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9, 3, 2, 3, 8,
                         4, 6, 2, 6, 4, 3, 3, 8, 3, 2, 7, 9, 5, 1, 1, 1, 1, 1, 1, 1};
  return cf_from_quotients(a, (long)a.size(), 1024);
}

}  // namespace

TEST_CASE("pointwise evaluation") {
  AnalyticCocycle cos1({{1, 0.25}, {-1, 0.25}}, 0.05);
  TrigPolynomial c1(0.0, {{1, 0.5}});
  CHECK(c1.eval(0.0) == doctest::Approx(1.0));
  CHECK(std::abs(c1.eval(0.25)) < 1e-15);
  TrigPolynomial c2(0.0, {{2, 0.5}});
  CHECK(std::abs(c2.eval(0.125)) < 1e-15);
  // direct two-sided sum oracle
  double x = 0.3141;
  cplx direct = 0.5 * std::exp(cplx(0, 2 * M_PI * 2 * x)) + 0.5 * std::exp(cplx(0, -2 * M_PI * 2 * x));
  CHECK(c2.eval(x) == doctest::Approx(direct.real()).epsilon(1e-14));
  CHECK(cos1.coefficient(-1) == cplx(0.25, 0.0));
}

TEST_CASE("reality of evaluation") {
  std::mt19937_64 rng(11);
  auto g = random_cocycle(rng, 0.05, 12, 300);
  for (int i = 0; i < 200; ++i) CHECK(std::abs(g.eval_complex(i / 200.0).imag()) < 1e-12);
}

TEST_CASE("decay certificate") {
  CHECK_THROWS_AS(AnalyticCocycle({{3, 0.9}}, 0.05), InvalidInput);
  CHECK_THROWS_AS(AnalyticCocycle({{0, 0.1}}, 0.05), InvalidInput);
  CHECK_THROWS_AS(AnalyticCocycle({{2, 0.1}, {-2, cplx(0.1, 0.01)}}, 0.05), InvalidInput);
  CHECK_NOTHROW(AnalyticCocycle({{2, std::exp(-0.1)}}, 0.05));
  AnalyticCocycle g = AnalyticCocycle::from_csv("1, 0.1, 0.2\n-1, 0.1, -0.2\n7, 0.01, 0\n", 0.05);
  CHECK(g.modes().size() == 2);
  CHECK(g.coefficient(-7) == cplx(0.01, 0.0));
  CHECK(AnalyticCocycle::default_truncation(0.05) == 737);
}

TEST_CASE("direct Birkhoff sums") {
  TrigPolynomial c1(0.0, {{1, 0.5}});
  CHECK(birkhoff_direct(c1, 0, 0.2, (Quad)0.5) == 0.0);
  CHECK(std::abs(birkhoff_direct(c1, 2, 0.0, (Quad)0.5)) < 1e-15);
}

TEST_CASE("closed form agrees with direct sums") {
  std::mt19937_64 rng(2024);
  auto cf = test_alpha();
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  std::uniform_int_distribution<unsigned long long> un(0, 10000);
  auto g = random_cocycle(rng, 0.05, 10, 200);
  BirkhoffKernel kernel(g, cf);
  CHECK(kernel.sum(0ULL, 0.3) == 0.0);
  double worst = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    unsigned long long n = un(rng);
    double x = ux(rng);
    double d = birkhoff_direct(g, n, x, cf);
    double c = kernel.sum(n, x);
    worst = std::max(worst, std::abs(d - c));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("single frequency bound 4/||m alpha||") {
  auto cf = test_alpha();
  for (long long m : {1LL, 7LL, 33LL, 120LL}) {
    TrigPolynomial em(0.0, {{m, 0.5}});
    BirkhoffKernel kernel(em, cf);
    double bound = 4.0 / dist_to_integers(BigInt(std::to_string(m)), cf);
    for (unsigned long long n : {1ULL, 10ULL, 1000ULL, 123456789ULL})
      CHECK(std::abs(kernel.sum(n, 0.17)) <= bound);
  }
}

TEST_CASE("cocycle identity") {
  std::mt19937_64 rng(77);
  auto cf = test_alpha();
  auto g = random_cocycle(rng, 0.05, 8, 150);
  BirkhoffKernel kernel(g, cf);
  std::uniform_int_distribution<unsigned long long> un(0, 10000);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    unsigned long long n = un(rng), m = un(rng);
    Quad x = ux(rng);
    Quad xn = unit_interval(x + (Quad)n * cf.alpha_quad());
    double defect = kernel.sum(n + m, x) - kernel.sum(n, x) - kernel.sum(m, xn);
    worst = std::max(worst, std::abs(defect));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("reduction into blocks") {
  auto cf = cf_from_quotients(std::vector<long>{2, 3, 4, 30, 1, 1, 1, 1}, 8);
  // q = 1, 2, 7, 30, 907, ...
  auto params = AnalysisParams::make(0.09);
  long long q3 = cf.q(3).get_si();
  REQUIRE(q3 == 30);
  REQUIRE(log_big(cf.q(4)) / (0.09 * 0.09) >= 30);
  double amp = std::exp(-0.09 * 30);
  auto single = reduce(AnalyticCocycle({{q3, amp}}, 0.09), cf, params, 5);
  for (long n = 1; n <= 5; ++n) CHECK(single.block(n).g.modes().size() == (n == 3 ? 1u : 0u));
  CHECK(single.residual.empty());

  auto off = reduce(AnalyticCocycle({{q3 + 1, std::exp(-0.09 * 31)}}, 0.09), cf, params, 5);
  for (const Block& b : off.blocks) CHECK(b.g.modes().empty());
  REQUIRE(off.residual.size() == 1);
  CHECK(off.residual[0].m == q3 + 1);

  // brute-force classification oracle over mixed support
  std::vector<Mode> modes;
  for (long long m = 1; m <= 400; ++m) modes.push_back({m, 0.5 * std::exp(-0.09 * m)});
  AnalyticCocycle g(modes, 0.09);
  auto gr = reduce(g, cf, params, 6);
  std::size_t counted = gr.residual.size();
  for (const Block& b : gr.blocks) {
    counted += b.g.modes().size();
    for (const Mode& md : b.g.modes()) {
      long long qn = b.q.get_si();
      long long qn1 = cf.q(b.n + 1).get_si();
      CHECK(md.m % qn == 0);
      CHECK(md.m >= qn);
      CHECK(md.m < qn1);
      CHECK((double)md.m <= std::log((double)qn1) / (0.09 * 0.09));
    }
  }
  CHECK(counted == modes.size());
  for (long long m = 1; m <= 400; ++m) {
    int owners = 0;
    for (const Block& b : gr.blocks) owners += b.g.coefficient(m) != cplx(0.0, 0.0);
    for (long n = 1; n <= 6; ++n) {
      long long qn = cf.q(n).get_si(), qn1 = cf.q(n + 1).get_si();
      bool eligible = m % qn == 0 && m >= qn && m < qn1 &&
                      (double)m <= std::log((double)qn1) / (0.09 * 0.09);
      if (eligible) CHECK(gr.block(n).g.coefficient(m) != cplx(0.0, 0.0));
    }
    CHECK(owners <= 1);
  }
}

TEST_CASE("coboundary drift") {
  auto cf = cf_from_quotients(std::vector<long>{2, 3, 4, 30, 1, 1, 1, 1}, 8);
  auto params = AnalysisParams::make(0.09);
  double amp = std::exp(-0.09 * 30);
  auto reduced_only = reduce(AnalyticCocycle({{30, amp}}, 0.09), cf, params, 5);
  CHECK(coboundary_drift(reduced_only, 1000) == 0.0);

  double a31 = std::exp(-0.09 * 31);
  auto off = reduce(AnalyticCocycle({{31, a31}}, 0.09), cf, params, 5);
  double bound = 2.0 * 4.0 * a31 / dist_to_integers(31, cf);
  CHECK(coboundary_drift(off, 10000) <= bound);
}

TEST_CASE("Denjoy-Koksma gap") {
  auto cf = test_alpha();
  CircleFunction constant{[](double) { return 3.0; }, std::nullopt};
  CHECK(denjoy_koksma_gap(constant, cf.q(5), 0.1, cf) < 1e-9);
  CircleFunction saw{[](double x) { return x - std::floor(x) - 0.5; }, 0.0};
  for (long k = 1; k <= 8; ++k)
    for (double x : {0.0, 0.123, 0.5, 0.987}) CHECK(denjoy_koksma_gap(saw, cf.q(k), x, cf) <= 1.0);
  CHECK_THROWS_AS(denjoy_koksma_gap(saw, cf.q(5) + 1, 0.0, cf), InvalidInput);
}

TEST_CASE("sup norm estimate") {
  TrigPolynomial p(0.0, {{3, cplx(0.3, 0.4)}});
  auto est = sup_norm(p, 1 << 10);
  CHECK(est.refined == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(est.grid <= est.refined);
}
