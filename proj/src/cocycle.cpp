#include "skewlab/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {

constexpr unsigned long long kQuadSafe = 1ULL << 62;

std::vector<Mode> normalize(std::vector<Mode> modes) {
  std::map<long long, cplx> acc;
  for (const Mode& md : modes) {
    if (md.m == 0) throw InvalidInput("frequency 0 belongs in the constant term");
    if (md.m > 0)
      acc[md.m] += md.a;
    else
      acc[-md.m] += std::conj(md.a);
  }
  std::vector<Mode> out;
  for (auto& [m, a] : acc)
    if (a != cplx(0.0, 0.0)) out.push_back({m, a});
  return out;
}

}  // namespace

TrigPolynomial::TrigPolynomial(double constant, std::vector<Mode> modes)
    : constant_(constant), modes_(normalize(std::move(modes))) {}

cplx TrigPolynomial::coefficient(long long m) const {
  if (m == 0) return constant_;
  long long am = m > 0 ? m : -m;
  auto it = std::lower_bound(modes_.begin(), modes_.end(), am,
                             [](const Mode& md, long long v) { return md.m < v; });
  if (it == modes_.end() || it->m != am) return 0.0;
  return m > 0 ? it->a : std::conj(it->a);
}

double TrigPolynomial::eval(Quad x) const {
  double acc = 0.0;
  for (const Mode& md : modes_) {
    cplx e = expi2pi((Quad)md.m * x);
    acc += md.a.real() * e.real() - md.a.imag() * e.imag();
  }
  return constant_ + 2.0 * acc;
}

cplx TrigPolynomial::eval_complex(double x) const {
  cplx acc = constant_;
  for (const Mode& md : modes_) {
    cplx e = expi2pi((Quad)md.m * (Quad)x);
    acc += md.a * e + std::conj(md.a) * std::conj(e);
  }
  return acc;
}

TrigPolynomial TrigPolynomial::derivative(int s) const {
  std::vector<Mode> out;
  out.reserve(modes_.size());
  for (const Mode& md : modes_) {
    cplx f = std::pow(cplx(0.0, 2.0 * M_PI * (double)md.m), s);
    out.push_back({md.m, md.a * f});
  }
  return TrigPolynomial(s == 0 ? constant_ : 0.0, std::move(out));
}

TrigPolynomial TrigPolynomial::operator+(const TrigPolynomial& o) const {
  std::vector<Mode> all = modes_;
  all.insert(all.end(), o.modes_.begin(), o.modes_.end());
  return TrigPolynomial(constant_ + o.constant_, std::move(all));
}

TrigPolynomial TrigPolynomial::operator-(const TrigPolynomial& o) const {
  return *this + o.scaled(-1.0);
}

TrigPolynomial TrigPolynomial::scaled(double s) const {
  std::vector<Mode> out = modes_;
  for (Mode& md : out) md.a *= s;
  return TrigPolynomial(constant_ * s, std::move(out));
}

long long AnalyticCocycle::default_truncation(double decay_rate) {
  return (long long)std::floor(std::log(1e16) / decay_rate) + 1;
}

AnalyticCocycle::AnalyticCocycle(std::vector<Mode> modes, double decay_rate, long long M_max)
    : decay_rate_(decay_rate) {
  if (!(decay_rate > 0)) throw InvalidInput("decay rate must be positive");
  M_max_ = M_max > 0 ? M_max : default_truncation(decay_rate);
  std::map<long long, cplx> pos, neg;
  for (const Mode& md : modes) {
    if (md.m == 0) {
      if (md.a != cplx(0.0, 0.0)) throw InvalidInput("cocycle must have zero mean");
      continue;
    }
    auto& side = md.m > 0 ? pos : neg;
    long long am = md.m > 0 ? md.m : -md.m;
    if (side.count(am)) throw InvalidInput("duplicate frequency " + std::to_string(md.m));
    side[am] = md.a;
  }
  for (auto& [m, a] : neg) {
    auto it = pos.find(m);
    if (it == pos.end()) {
      pos[m] = std::conj(a);
    } else if (std::abs(it->second - std::conj(a)) > 1e-15 * (1.0 + std::abs(a))) {
      throw InvalidInput("a_{-m} must equal conj(a_m) at m = " + std::to_string(m));
    }
  }
  std::vector<Mode> kept;
  for (auto& [m, a] : pos) {
    if (std::abs(a) > std::exp(-decay_rate * (double)m) * (1.0 + 1e-12))
      throw InvalidInput("coefficient at m = " + std::to_string(m) +
                         " exceeds the decay certificate exp(-tau' |m|)");
    if (m <= M_max_) kept.push_back({m, a});
  }
  constant_ = 0.0;
  modes_ = normalize(std::move(kept));
}

AnalyticCocycle AnalyticCocycle::from_csv(const std::string& text, double decay_rate,
                                          long long M_max) {
  std::vector<Mode> modes;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    long long m;
    double re, im;
    if (!(ls >> m >> re >> im)) throw InvalidInput("bad cocycle line: " + line);
    modes.push_back({m, cplx(re, im)});
  }
  return AnalyticCocycle(std::move(modes), decay_rate, M_max);
}

BirkhoffKernel::BirkhoffKernel(const TrigPolynomial& g, const ContinuedFraction& cf)
    : g_(g), cf_(cf) {
  theta_.reserve(g_.modes().size());
  for (const Mode& md : g_.modes()) theta_.push_back(cf.centered_phase(md.m));
}

cplx ratio_from_phases(Quad phi, Quad theta) {
  if (theta == 0) throw PrecisionError("||m alpha|| vanished at working precision");
  double p = (double)phi, t = (double)theta;
  double mag = std::sin(M_PI * p) / std::sin(M_PI * t);
  return std::polar(mag, M_PI * (double)(phi - theta));
}

std::vector<cplx> BirkhoffKernel::ratios(unsigned long long n) const {
  if (n >= kQuadSafe) return ratios(BigInt(std::to_string(n)));
  std::vector<cplx> out;
  out.reserve(theta_.size());
  for (Quad t : theta_) out.push_back(ratio_from_phases(centered((Quad)n * t), t));
  return out;
}

std::vector<cplx> BirkhoffKernel::ratios(const BigInt& n) const {
  if (n < 0) throw InvalidInput("Birkhoff sums need n >= 0");
  if (n < BigInt(std::to_string(kQuadSafe))) return ratios((unsigned long long)n.get_ui());
  std::vector<cplx> out;
  out.reserve(theta_.size());
  const auto& modes = g_.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    BigInt nm = n * BigInt(std::to_string(modes[i].m));
    Quad phi = cf_.centered_phase(nm);
    out.push_back(ratio_from_phases(phi, theta_[i]));
  }
  return out;
}

double BirkhoffKernel::sum_with(const std::vector<cplx>& r, double n_as_real, Quad x) const {
  double acc = 0.0;
  const auto& modes = g_.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    cplx term = modes[i].a * expi2pi((Quad)modes[i].m * x) * r[i];
    acc += term.real();
  }
  return g_.constant() * n_as_real + 2.0 * acc;
}

double BirkhoffKernel::sum(unsigned long long n, Quad x) const {
  if (n == 0) return 0.0;
  return sum_with(ratios(n), (double)n, x);
}

double BirkhoffKernel::sum(const BigInt& n, Quad x) const {
  if (n == 0) return 0.0;
  return sum_with(ratios(n), n.get_d(), x);
}

double birkhoff_direct(const TrigPolynomial& g, unsigned long long n, Quad x, Quad alpha) {
  double acc = 0.0;
  for (unsigned long long j = 0; j < n; ++j) acc += g.eval(unit_interval(x + (Quad)j * alpha));
  return acc;
}

double birkhoff_direct(const TrigPolynomial& g, unsigned long long n, Quad x,
                       const ContinuedFraction& cf) {
  return birkhoff_direct(g, n, x, cf.alpha_quad());
}

double birkhoff_closed(const TrigPolynomial& g, unsigned long long n, Quad x,
                       const ContinuedFraction& cf) {
  return BirkhoffKernel(g, cf).sum(n, x);
}

double birkhoff_closed(const TrigPolynomial& g, const BigInt& n, Quad x,
                       const ContinuedFraction& cf) {
  return BirkhoffKernel(g, cf).sum(n, x);
}

BigReal birkhoff_closed_mp(const TrigPolynomial& g, const BigInt& n, const BigReal& x,
                           const ContinuedFraction& cf, mpfr_prec_t prec) {
  if (n < 0) throw InvalidInput("Birkhoff sums need n >= 0");
  BigReal total(g.constant(), prec);
  total *= n;
  if (n == 0) return total;
  const BigReal pi = BigReal::pi(prec);
  BigReal xp = with_precision(x, prec);
  for (const Mode& md : g.modes()) {
    BigInt f(std::to_string(md.m));
    BigReal theta = with_precision(cf.phase(f), prec);
    BigReal phi = with_precision(cf.phase(BigInt(f * n)), prec);
    BigReal mag = BigReal::sin(pi * phi) / BigReal::sin(pi * theta);
    // e(f x + (phi - theta)/2) sin(pi phi)/sin(pi theta) = (e(f n alpha) - 1)/(e(f alpha) - 1) e(f x)
    BigReal t = (xp * f).frac();
    BigReal half = phi - theta;
    mpfr_div_2ui(half.get(), half.get(), 1, MPFR_RNDN);
    t += half;
    BigReal arg = pi * t;
    arg *= BigInt(2);
    BigReal sn(prec), cs(prec);
    BigReal::sin_cos(arg, sn, cs);
    BigReal re = cs * BigReal(md.a.real(), prec) - sn * BigReal(md.a.imag(), prec);
    re *= mag;
    re *= BigInt(2);
    total += re;
  }
  return total;
}

const Block& ReducedCocycle::block(long n) const {
  if (!has_block(n)) throw InvalidInput("no block at scale " + std::to_string(n));
  return blocks[n - 1];
}

AnalyticCocycle ReducedCocycle::reduced() const {
  std::vector<Mode> all;
  for (const Block& b : blocks) all.insert(all.end(), b.g.modes().begin(), b.g.modes().end());
  return AnalyticCocycle(std::move(all), source.decay_rate(), source.truncation());
}

TrigPolynomial ReducedCocycle::difference() const { return TrigPolynomial(0.0, residual); }

ReducedCocycle reduce(const AnalyticCocycle& g, const ContinuedFraction& cf,
                      const AnalysisParams& params, long depth) {
  if (depth < 1) throw InvalidInput("reduction depth must be positive");
  if (depth + 1 > cf.depth()) throw RangeError("reduction needs convergents to depth+1");
  double tp2 = params.tau_prime * params.tau_prime;
  std::vector<std::vector<Mode>> per_block(depth);
  std::vector<Mode> residual;
  for (const Mode& md : g.modes()) {
    BigInt m(std::to_string(md.m));
    long owner = -1;
    for (long n = 1; n <= depth; ++n) {
      if (cf.q(n) > m) break;
      if (m >= cf.q(n + 1)) continue;
      if (m % cf.q(n) != 0) break;
      if ((double)md.m > log_big(cf.q(n + 1)) / tp2) break;
      owner = n;
      break;
    }
    if (owner < 0)
      residual.push_back(md);
    else
      per_block[owner - 1].push_back(md);
  }
  ReducedCocycle out{{}, std::move(residual), g, cf, params, depth};
  for (long n = 1; n <= depth; ++n)
    out.blocks.push_back(
        {n, cf.q(n), AnalyticCocycle(per_block[n - 1], g.decay_rate(), g.truncation())});
  return out;
}

double coboundary_drift(const ReducedCocycle& gr, unsigned long long n_max) {
  TrigPolynomial h = gr.difference();
  if (h.modes().empty()) return 0.0;
  BirkhoffKernel kernel(h, gr.cf);
  const auto& th = kernel.thetas();
  const auto& modes = h.modes();
  double s = 0.0, sup = 0.0;
  for (unsigned long long j = 0; j < n_max; ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      cplx e = expi2pi((Quad)j * th[i]);
      v += modes[i].a.real() * e.real() - modes[i].a.imag() * e.imag();
    }
    s += 2.0 * v;
    sup = std::max(sup, std::abs(s));
  }
  return sup;
}

CircleFunction as_circle_function(const TrigPolynomial& g) {
  return {[g](double x) { return g.eval(x); }, g.constant()};
}

double trapezoid_mean(const std::function<double(double)>& f, int points) {
  // Periodic trapezoid rule: endpoints coincide, so this is a plain average.
  double acc = 0.0;
  for (int i = 0; i < points; ++i) acc += f((double)i / points);
  return acc / points;
}

double denjoy_koksma_gap(const CircleFunction& h, const BigInt& q, Quad x,
                         const ContinuedFraction& cf) {
  if (q < 1 || cf.index_of_denominator(q) < 0)
    throw InvalidInput("Denjoy-Koksma needs a convergent denominator");
  if (q > BigInt(100000000)) throw ResourceError("denominator too large for a direct sum");
  double mean = h.mean ? *h.mean : trapezoid_mean(h.f);
  unsigned long long n = q.get_ui();
  Quad alpha = cf.alpha_quad();
  double acc = 0.0;
  for (unsigned long long j = 0; j < n; ++j)
    acc += h.f((double)unit_interval(x + (Quad)j * alpha));
  return std::abs(acc - (double)n * mean);
}

SupEstimate sup_norm(const TrigPolynomial& p, int grid) {
  SupEstimate est;
  for (int i = 0; i < grid; ++i) {
    double x = (double)i / grid;
    double v = std::abs(p.eval(x));
    if (v > est.grid) {
      est.grid = v;
      est.argmax = x;
    }
  }
  est.refined = est.grid;
  if (p.modes().empty()) return est;
  TrigPolynomial d1 = p.derivative(1), d2 = p.derivative(2);
  double x0 = est.argmax;
  double curv = d2.eval(x0);
  if (curv != 0.0) {
    double step = -d1.eval(x0) / curv;
    if (std::abs(step) <= 1.0 / grid) {
      double x1 = x0 + step;
      double v = std::abs(p.eval(x1 - std::floor(x1)));
      if (v > est.refined) {
        est.refined = v;
        est.argmax = x1 - std::floor(x1);
      }
    }
  }
  return est;
}

BigInt block_sum_max_K(const ContinuedFraction& cf, const AnalysisParams& params, long n) {
  BigRational kn = k_n(n, cf, params);
  BigInt kmax = kn.get_num() / kn.get_den();
  BigReal e(cf.q(n), 256);
  e *= BigReal(2.0 * params.tau, 256);
  e = BigReal::exp(e);
  BigInt cap = e.floor();
  return std::min(kmax, cap);
}

double block_sum_sup(const TrigPolynomial& g, const ContinuedFraction& cf,
                     const AnalysisParams& params, long n, const BigInt& K, int grid) {
  if (K < 1 || K > block_sum_max_K(cf, params, n))
    throw RangeError("K outside [1, min(K_n, exp(2 tau q_n))]");
  BirkhoffKernel kernel(g, cf);
  BigInt N = K * cf.q(n);
  auto r = kernel.ratios(N);
  double sup = 0.0;
  for (int i = 0; i < grid; ++i)
    sup = std::max(sup, std::abs(kernel.sum_with(r, N.get_d(), (Quad)i / grid)));
  return sup;
}

}  // namespace skewlab
