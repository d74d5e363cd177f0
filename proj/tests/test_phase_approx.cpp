#include "doctest.h"

#include <cmath>

#include "skewlab/calibration.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/phase_approx.hpp"

using namespace skewlab;
namespace cal = skewlab::calibration;

namespace {

const ReducedCocycle& pair() {
  static ReducedCocycle gr = cal::designated_reduced();
  return gr;
}

long double frac(long double v) { return v - std::floor(v); }

// g(t) straight from the mode list, in long double
long double g_direct(const TrigPolynomial& g, long double t) {
  long double acc = g.constant();
  for (const Mode& md : g.modes()) {
    long double ph = 2 * M_PIl * frac(md.m * t);
    acc += 2 * (md.a.real() * std::cos(ph) - md.a.imag() * std::sin(ph));
  }
  return acc;
}

BigInt big(long long v) { return BigInt(std::to_string(v)); }

}  // namespace

TEST_CASE("designated pair shape") {
  const auto& gr = pair();
  CHECK(gr.cf.depth() == 9);
  CHECK(gr.cf.q(3) == 685);
  CHECK(gr.cf.q(4) == 274022);
  CHECK(gr.block(1).g.modes().size() == 2);
  CHECK(gr.block(2).g.modes().size() == 2);
  CHECK(gr.block(3).g.modes().size() == 1);
  CHECK(gr.block(4).g.modes().empty());
}

TEST_CASE("empty blocks give the zero polynomial") {
  auto params = AnalysisParams::make(cal::kDecayRate);
  auto P = build_phase_poly(pair(), 4, params);
  CHECK(P.is_zero());
  CHECK(P.degree() == 5);
  CHECK(P.eval((Quad)0.3, big(1000)) == 0.0);
}

TEST_CASE("coefficient bounds hold on the calibrated scales") {
  auto params = AnalysisParams::make(cal::kDecayRate);
  for (long n = cal::kPhaseScaleLo; n <= cal::kPhaseScaleHi; ++n) {
    auto P = build_phase_poly(pair(), n, params);
    for (const auto& c : P.coefficients()) CHECK(c.log_sup <= c.log_bound + 1e-9);
  }
  // the low blocks carry large coefficients
  CHECK_THROWS_AS(build_phase_poly(pair(), 1, params), IntegrityError);
}

TEST_CASE("degree one reduces to m g_n") {
  auto params = AnalysisParams::make(cal::kDecayRate, 0.55);
  auto P = build_phase_poly(pair(), 3, params);
  REQUIRE(P.degree() == 1);
  REQUIRE(P.coefficients().size() == 1);
  const auto& blk = pair().block(3).g;
  for (double x : {0.0, 0.17, 0.5, 0.91}) {
    double want = 37.0 * (double)g_direct(blk, x);
    CHECK(P.eval((Quad)x, big(37)) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("second coefficient matches a direct orbit sum") {
  auto params = AnalysisParams::make(cal::kDecayRate);
  auto P = build_phase_poly(pair(), 3, params);
  REQUIRE(P.coefficients().size() >= 2);
  const auto& a2 = P.coefficients()[1];
  const auto& blk = pair().block(3).g;
  auto deriv = blk.derivative(1);
  long double alpha = (long double)pair().cf.alpha_quad();
  for (double x : {0.05, 0.4, 0.77}) {
    long double direct = 0;
    for (int j = 0; j < 685; ++j) direct += g_direct(deriv, x + j * alpha);
    CHECK(a2.shape.eval((Quad)x) == doctest::Approx((double)direct).epsilon(1e-9));
  }
  // prefactor sigma / (2 q^2) with sigma = q_n alpha - p_n
  double sigma = pair().cf.offset(3).to_double();
  CHECK(a2.prefactor.to_double() == doctest::Approx(sigma / (2.0 * 685 * 685)).epsilon(1e-12));
}

TEST_CASE("error against a direct Birkhoff difference") {
  auto params = AnalysisParams::make(cal::kDecayRate);
  auto P = build_phase_poly(pair(), 3, params);
  auto g = pair().reduced();
  long double alpha = (long double)pair().cf.alpha_quad();
  for (long long m : {1000LL, 7777LL, 20000LL}) {
    long long rest = m % 685;
    for (double x : {0.1, 0.63}) {
      long double diff = 0;
      for (long long j = rest; j < m; ++j) diff += g_direct(g, x + j * alpha);
      double want = std::abs((double)diff - P.eval((Quad)x, big(m)));
      CHECK(polap_error(g, P, (Quad)x, big(m), BigInt(1), pair().cf) ==
            doctest::Approx(want).epsilon(1e-7));
    }
  }
}

TEST_CASE("below one period the error is |P|") {
  auto params = AnalysisParams::make(cal::kDecayRate);
  auto P = build_phase_poly(pair(), 3, params);
  auto g = pair().reduced();
  for (long long m : {1LL, 100LL, 684LL, 1369LL}) {
    double want = std::abs(P.eval((Quad)0.3, big(m)));
    CHECK(polap_error(g, P, (Quad)0.3, big(m), BigInt(2), pair().cf) ==
          doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("error decays two scales up") {
  auto params = AnalysisParams::make(cal::kDecayRate);
  auto g = pair().reduced();
  auto worst = [&](long n) {
    auto P = build_phase_poly(pair(), n, params);
    double lmax = (1 - params.delta) * log_big(pair().cf.q(n + 1));
    double w = 0;
    for (int t = 0; t < 4; ++t) {
      BigReal e(lmax * (t + 0.5) / 4, 256);
      BigInt m = BigReal::exp(e).floor();
      for (int i = 0; i < 16; ++i)
        w = std::max(w, polap_error(g, P, (Quad)i / 16, m, BigInt(1), pair().cf));
    }
    return w;
  };
  double e3 = worst(3), e4 = worst(4), e5 = worst(5), e6 = worst(6);
  CHECK(e5 < e3);
  CHECK(e6 < e4);
  CHECK(e6 > 0.0);
}

TEST_CASE("range checks") {
  auto params = AnalysisParams::make(cal::kDecayRate);
  auto P = build_phase_poly(pair(), 3, params);
  auto g = pair().reduced();
  const auto& cf = pair().cf;
  CHECK_THROWS_AS(polap_error(g, P, (Quad)0.1, big(30000), BigInt(1), cf), RangeError);
  CHECK_THROWS_AS(polap_error(g, P, (Quad)0.1, big(10), BigInt(0), cf), RangeError);
  CHECK_THROWS_AS(polap_error(g, P, (Quad)0.1, big(10), BigInt(300), cf), RangeError);
  CHECK_THROWS_AS(polap_error(g, P, (Quad)0.1, big(-1), BigInt(1), cf), RangeError);
  CHECK_THROWS_AS(build_phase_poly(pair(), 9, params), std::exception);
  CHECK_THROWS_AS(orbit_return_error(g, cf, params, 20, BigInt(1), big(5), 0.1, 0.0), RangeError);
  CHECK_THROWS_AS(orbit_return_error(g, cf, params, 3, BigInt(0), big(5), 0.1, 0.0), RangeError);
}

TEST_CASE("orbit return error") {
  auto params = AnalysisParams::make(cal::kDecayRate);
  auto g = pair().reduced();
  const auto& cf = pair().cf;
  // m a multiple of q_n: the orbit returns up to the phase and Birkhoff drift
  double e = orbit_return_error(g, cf, params, 4, BigInt(1), big(274022LL * 3), 0.1, 0.0);
  CHECK(e >= 0.0);
  CHECK(e < 0.5);
  CHECK(orbit_return_error(g, cf, params, 4, BigInt(1), big(1000), 0.1, 0.0) == 0.0);
}
