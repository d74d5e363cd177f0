#include "skewlab/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/parallel.hpp"

namespace skewlab {

namespace {

constexpr std::size_t kChunks = 64;
constexpr u64 kMaxPrimeWindow = 100000000;

u64 isqrt(u64 n) {
  u64 r = (u64)std::sqrt((long double)n);
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

BigInt to_big(u64 v) { return BigInt(std::to_string(v)); }

u64 to_u64(const BigInt& v) { return std::stoull(v.get_str()); }

double circle_distance(double a, double b) {
  double d = a - b;
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

double frac1(double v) { return v - std::floor(v); }

// (1/N) style evaluation over a list, deterministic in the thread count.
template <class F>
std::vector<double> map_points(const std::vector<u64>& pts, int threads, F&& fn) {
  std::vector<double> out(pts.size());
  std::size_t span = pts.size() / kChunks + 1;
  parallel_chunks(kChunks, threads, [&](std::size_t c) {
    std::size_t lo = c * span, hi = std::min(pts.size(), lo + span);
    for (std::size_t i = lo; i < hi; ++i) out[i] = fn(pts[i]);
  });
  return out;
}

}  // namespace

// ---- almost sparse sets ----

AlmostSparseSet AlmostSparseSet::squares() { return AlmostSparseSet(); }

AlmostSparseSet AlmostSparseSet::primes(std::optional<u64> gap_filter) {
  AlmostSparseSet s;
  s.kind_ = Kind::Primes;
  s.fixed_gap_ = gap_filter;
  return s;
}

AlmostSparseSet AlmostSparseSet::custom(std::vector<u64> members, std::vector<u64> bad) {
  AlmostSparseSet s;
  s.kind_ = Kind::Custom;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::sort(bad.begin(), bad.end());
  s.list_ = std::move(members);
  s.bad_ = std::move(bad);
  return s;
}

std::string AlmostSparseSet::name() const {
  switch (kind_) {
    case Kind::Squares:
      return "squares";
    case Kind::Primes:
      return fixed_gap_ ? "primes(c=" + std::to_string(*fixed_gap_) + ")" : "primes(c=loglog)";
    case Kind::Custom:
      return "custom";
  }
  return "?";
}

const PrimeSource& AlmostSparseSet::sieve(u64 hi) const {
  if (!sieve_ || sieve_->limit() < hi) sieve_ = std::make_shared<PrimeSource>(std::max<u64>(hi, 1000));
  return *sieve_;
}

u64 AlmostSparseSet::gap_filter(u64 N) const {
  if (kind_ != Kind::Primes) return 0;
  if (fixed_gap_) return *fixed_gap_;
  if (N < 16) return 1;
  return (u64)std::ceil(std::log(std::log((double)N)));
}

bool AlmostSparseSet::contains(u64 n) const {
  switch (kind_) {
    case Kind::Squares: {
      if (n == 0) return false;
      u64 r = isqrt(n);
      return r * r == n;
    }
    case Kind::Primes:
      return n >= 2 && sieve(n).is_prime(n);
    case Kind::Custom:
      return std::binary_search(list_.begin(), list_.end(), n);
  }
  return false;
}

bool AlmostSparseSet::in_bad_set(u64 N, u64 n) const {
  if (n > N || !contains(n)) return false;
  switch (kind_) {
    case Kind::Squares:
      return false;
    case Kind::Primes: {
      u64 c = gap_filter(N);
      const auto& s = sieve(n + c);
      for (u64 a = 1; a <= c; ++a)
        if (s.is_prime(n + a)) return true;
      return false;
    }
    case Kind::Custom:
      return std::binary_search(bad_.begin(), bad_.end(), n);
  }
  return false;
}

std::vector<u64> AlmostSparseSet::members(u64 lo, u64 hi, u64 N) const {
  std::vector<u64> out;
  if (lo > hi) return out;
  switch (kind_) {
    case Kind::Squares: {
      u64 m = lo <= 1 ? 1 : isqrt(lo - 1) + 1;
      for (; m * m <= hi; ++m) out.push_back(m * m);
      break;
    }
    case Kind::Primes: {
      if (hi > kMaxPrimeWindow) throw ResourceError("prime descriptor limited to N <= 10^8");
      u64 c = gap_filter(N);
      const auto& s = sieve(hi + c);
      s.for_each_prime(std::max<u64>(lo, 2), hi, [&](u64 p) {
        bool bad = false;
        if (p <= N)
          for (u64 a = 1; a <= c && !bad; ++a) bad = s.is_prime(p + a);
        if (!bad) out.push_back(p);
      });
      break;
    }
    case Kind::Custom:
      for (u64 v : list_)
        if (v >= lo && v <= hi && !(v <= N && std::binary_search(bad_.begin(), bad_.end(), v)))
          out.push_back(v);
      break;
  }
  return out;
}

bool AlmostSparseSet::check_invariants(u64 lo, u64 hi, u64 N) const {
  auto pts = members(lo, hi, N);
  switch (kind_) {
    case Kind::Squares:
      for (std::size_t i = 2; i < pts.size(); ++i)
        if (pts[i] - pts[i - 1] <= pts[i - 1] - pts[i - 2]) return false;
      return true;
    case Kind::Primes: {
      u64 c = gap_filter(N);
      for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i] <= N && pts[i] - pts[i - 1] <= c) return false;
      return true;
    }
    case Kind::Custom:
      return true;
  }
  return true;
}

double eps_n(const AlmostSparseSet& A, u64 n) {
  if (A.kind() == AlmostSparseSet::Kind::Squares) {
    if (n < 4) throw InvalidInput("fewer than two points of A in [0, n]");
    return 1.0 / 3.0;
  }
  auto pts = A.members(0, n, n);
  if (pts.size() < 2) throw InvalidInput("fewer than two points of A in [0, n]");
  u64 gap = UINT64_MAX;
  for (std::size_t i = 1; i < pts.size(); ++i) gap = std::min(gap, pts[i] - pts[i - 1]);
  return 1.0 / (double)gap;
}

// ---- stages ----

StageConstruction::StageConstruction(ContinuedFraction cf, AlmostSparseSet A, StageOptions opts)
    : cf_(std::move(cf)), A_(std::move(A)), opts_(opts) {
  if (opts_.first_k < 2 || opts_.first_k % 2)
    throw InvalidInput("first_k must be a positive even index");
  if (opts_.mu_twist && A_.kind() != AlmostSparseSet::Kind::Squares)
    throw PreconditionError("the Mobius twist needs the squares descriptor");
  if (!(opts_.h_tolerance > 0)) throw InvalidInput("h_tolerance must be positive");
  plan();
}

void StageConstruction::plan() {
  long k = opts_.first_k;
  int n = 1;
  std::size_t bits = 0;
  while (k + 1 <= cf_.depth()) {
    Stage s;
    s.n = n;
    s.k = k;
    s.q = cf_.q(k);
    s.p = cf_.p(k);
    s.q_next = cf_.q(k + 1);
    s.feasible = s.q <= to_big(opts_.feasibility_cap);
    if (s.feasible) {
      if (cf_.offset(k).sign() <= 0)
        throw ConstructionError("stage " + std::to_string(n) + ": alpha is not above p_k/q_k");
      // both ramps of width 1/q_{k+1} must fit in a cell of width 1/q_k
      if (s.q_next < 2 * s.q)
        throw ConstructionError("stage " + std::to_string(n) + ": q_{k+1} < 2 q_k, ramps overlap");
      if (s.q > 1) mpz_invert(s.p_inverse.get_mpz_t(), s.p.get_mpz_t(), s.q.get_mpz_t());
      bits = std::max(bits, mpz_sizeinbase(s.q_next.get_mpz_t(), 2));
    }
    long next = k * k + 1;
    if (next % 2) ++next;
    if (opts_.include_h && s.feasible) {
      long cap = std::min(next - 1, cf_.depth() - 1);
      long l = k + 1;
      while (l < cap && 2.0 * s.q.get_d() / cf_.q(l + 1).get_d() > opts_.h_tolerance) ++l;
      if (l <= k || l + 1 > cf_.depth())
        throw ConstructionError("stage " + std::to_string(n) + ": no room for l_n");
      s.l = l;
      bits = std::max(bits, mpz_sizeinbase(cf_.q(l + 1).get_mpz_t(), 2));
    }
    stages_.push_back(std::move(s));
    if (!stages_.back().feasible) break;
    k = next;
    ++n;
  }
  if (stages_.empty() || !stages_.front().feasible)
    throw ConstructionError("no feasible stage: q_{k_1} exceeds the cap or the expansion is too short");
  prec_ = std::min<mpfr_prec_t>(cf_.precision(), std::max<mpfr_prec_t>(256, 128 + 3 * (mpfr_prec_t)bits));
}

int StageConstruction::feasible_stages() const {
  int c = 0;
  for (const auto& s : stages_) c += s.feasible;
  return c;
}

int StageConstruction::solved_stages() const {
  int c = 0;
  for (const auto& s : stages_) c += s.solved;
  return c;
}

const Stage& StageConstruction::stage(int n) const {
  if (n < 1 || n > (int)stages_.size()) throw RangeError("stage index out of range");
  return stages_[n - 1];
}

Stage& StageConstruction::stage_mut(int n) {
  if (n < 1 || n > (int)stages_.size()) throw RangeError("stage index out of range");
  return stages_[n - 1];
}

double StageConstruction::lipschitz(int n, const BigInt& s_big) const {
  const Stage& st = stage(n);
  if (!st.solved) throw StateError("stage " + std::to_string(n) + " is not solved");
  u64 q = to_u64(st.q);
  BigInt red = s_big % st.q;
  if (red < 0) red += st.q;
  u64 s = to_u64(red);
  const auto& W = st.window;
  const auto& L = st.lipschitz;
  std::size_t t = W.size() - 1;
  if (s >= W.front() && s <= W.back()) {
    std::size_t i = std::upper_bound(W.begin(), W.end(), s) - W.begin();
    if (i > t) return L[t];
    --i;
    long double slope = ((long double)L[i + 1] - L[i]) / (long double)(W[i + 1] - W[i]);
    return (double)(L[i] + slope * (long double)(s - W[i]));
  }
  u64 span = q - W.back() + W.front();
  u64 off = s > W.back() ? s - W.back() : s + q - W.back();
  long double slope = ((long double)L[0] - L[t]) / (long double)span;
  return (double)(L[t] + slope * (long double)off);
}

double StageConstruction::f(int n, const BigReal& x) const {
  const Stage& st = stage(n);
  if (!st.solved) throw StateError("stage " + std::to_string(n) + " is not solved");
  BigReal t = with_precision(x, prec_).frac() * st.q;
  BigInt j = t.floor();
  BigReal v = t - j;
  BigInt w = (j * st.p_inverse) % st.q;
  double L = lipschitz(n, w);
  BigReal up = v * st.q_next;
  if (up <= BigReal(st.q, prec_)) return L * (v.to_double() / st.q.get_d());
  BigReal rest = BigReal(1.0, prec_) - v;
  BigReal down = rest * st.q_next;
  if (down <= BigReal(st.q, prec_)) return L * (rest.to_double() / st.q.get_d());
  return L / st.q_next.get_d();
}

double StageConstruction::h(int n, const BigReal& x) const {
  const Stage& st = stage(n);
  if (st.l < 0) return 0.0;
  double y = (with_precision(x, prec_) * cf_.q(st.l)).frac().to_double();
  return y < 0.5 ? 2 * y : 2 * (1 - y);
}

double StageConstruction::stage_value(int n, const BigReal& x) const {
  return f(n, x) + (opts_.include_h ? h(n, x) : 0.0);
}

BigReal StageConstruction::orbit_point(const BigInt& w) const {
  return with_precision(cf_.phase(w), prec_).frac();
}

double StageConstruction::stage_goal(int n, u64 w) const {
  if (opts_.mu_twist) return (7.0 + mobius(isqrt(w))) / 4.0;
  return n % 2 == 0 ? 2.0 : 1.5;
}

double StageConstruction::birkhoff_at_zero(const BigInt& w) const {
  BigReal x = orbit_point(w);
  double acc = 0.0;
  for (const auto& s : stages_)
    if (s.solved) acc += stage_value(s.n, x);
  return acc;
}

double StageConstruction::birkhoff_at_zero(u64 w) const { return birkhoff_at_zero(to_big(w)); }

double StageFunction::operator()(const BigReal& x) const {
  return tent ? owner->h(n, x) : owner->f(n, x);
}

double StageFunction::operator()(double x) const {
  return (*this)(BigReal(x, owner->precision()));
}

StageFunction build_fn(const StageConstruction& sc, int n) {
  if (!sc.stage(n).solved) throw StateError("stage " + std::to_string(n) + " is not solved");
  return {&sc, n, false};
}

StageFunction build_hn(const StageConstruction& sc, int n) {
  if (sc.stage(n).l < 0) throw PreconditionError("stage has no tent function (h is off)");
  return {&sc, n, true};
}

namespace {

std::vector<u64> stage_window(const StageConstruction& sc, const Stage& st) {
  u64 q = to_u64(st.q);
  if (sc.options().mu_twist) return sc.set().members(1, q / 2, q);
  return sc.set().members((q + 1) / 2, q, q);
}

}  // namespace

void solve_stage_targets(StageConstruction& sc, int n) {
  Stage& st = sc.stage_mut(n);
  if (!st.feasible) throw ResourceError("stage " + std::to_string(n) + " exceeds the feasibility cap");
  for (int m = 1; m < n; ++m)
    if (!sc.stage(m).solved) throw StateError("stage " + std::to_string(m) + " must be solved first");
  std::vector<u64> window = stage_window(sc, st);
  if (window.empty())
    throw ConstructionError("stage " + std::to_string(n) + ": window of A is empty");
  const double qd = st.q.get_d();
  std::vector<double> goal(window.size()), lip(window.size());
  std::vector<std::string> errors(kChunks);
  std::size_t span = window.size() / kChunks + 1;
  parallel_chunks(kChunks, sc.options().threads, [&](std::size_t c) {
    std::size_t lo = c * span, hi = std::min(window.size(), lo + span);
    for (std::size_t i = lo; i < hi; ++i) {
      u64 w = window[i];
      BigReal x = sc.orbit_point(w);
      double r = 0.0;
      for (int m = 1; m < n; ++m) r += sc.stage_value(m, x);
      r = frac1(r);
      BigReal t = x * st.q;
      BigInt j = t.floor();
      BigReal v = t - j;
      BigInt back = (j * st.p_inverse) % st.q;
      if (back != to_big(w) % st.q || v * st.q_next > BigReal(st.q, sc.precision())) {
        errors[c] = "stage " + std::to_string(n) + ": w alpha is off the ramp for w = " +
                    std::to_string(w);
        return;
      }
      goal[i] = sc.stage_goal(n, w) - r;
      lip[i] = goal[i] * qd / v.to_double();
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw ConstructionError(e);
  st.window = std::move(window);
  st.goal = std::move(goal);
  st.lipschitz = std::move(lip);
  st.solved = true;
}

void solve_all(StageConstruction& sc) {
  for (int n = 1; n <= sc.stage_count(); ++n)
    if (sc.stage(n).feasible && !sc.stage(n).solved) solve_stage_targets(sc, n);
}

StageCheck check_stage(const StageConstruction& sc, int n) {
  const Stage& st = sc.stage(n);
  if (!st.solved) throw StateError("stage " + std::to_string(n) + " is not solved");
  StageCheck c;
  const double q1 = st.q_next.get_d(), qd = st.q.get_d();
  const bool mu = sc.options().mu_twist;
  const auto& W = st.window;
  const auto& L = st.lipschitz;
  c.min_ratio = INFINITY;
  for (std::size_t i = 0; i < W.size(); ++i) {
    double ratio = L[i] / q1;
    c.min_ratio = std::min(c.min_ratio, ratio);
    c.max_ratio = std::max(c.max_ratio, ratio);
    // squares below M_n (mu twist) sit further from the convergent
    double cap = 12.0 * std::max(1.0, qd / (2.0 * (double)W[i]));
    if (!(ratio >= 1.0 / 12 && ratio <= cap)) {
      c.ok = false;
      c.failures.push_back("L out of range at w = " + std::to_string(W[i]));
    }
    if (i + 1 < W.size() && L[i] > L[i + 1]) ++c.decreasing_pairs;
  }

  double eps = 0.0;
  try {
    eps = eps_n(sc.set(), to_u64(st.q));
  } catch (const InvalidInput&) {
    eps = 0.0;  // a single point: only the wrap segment exists
  }
  c.step_bound = std::max(12.0 * eps * q1, 24.0 * q1 / qd);

  // walk every step of the inductive definition
  u64 q = to_u64(st.q);
  auto walk = [&](long double from, long double to, u64 steps) {
    long double slope = (to - from) / (long double)steps, cur = from;
    for (u64 s = 0; s < steps; ++s) cur += slope;
    c.max_step = std::max(c.max_step, (double)std::fabs(slope));
    double rel = (double)(std::fabs(cur - to) / std::max<long double>(1.0L, std::fabs(to)));
    c.max_endpoint_defect = std::max(c.max_endpoint_defect, rel);
  };
  for (std::size_t i = 0; i + 1 < W.size(); ++i) walk(L[i], L[i + 1], W[i + 1] - W[i]);
  walk(L.back(), L.front(), q - W.back() + W.front());
  if (!mu && !(c.max_step < c.step_bound)) {
    c.ok = false;
    c.failures.push_back("step bound violated");
  }
  if (c.max_endpoint_defect > 1e-9) {
    c.ok = false;
    c.failures.push_back("interpolation does not reach the next window value");
  }

  std::vector<double> defect = map_points(W, sc.options().threads, [&](u64 w) {
    BigReal x = sc.orbit_point(w);
    double acc = 0.0;
    for (int m = 1; m < n; ++m) acc += sc.stage_value(m, x);
    acc += sc.f(n, x);
    return circle_distance(acc, sc.stage_goal(n, w));
  });
  for (double d : defect) c.max_goal_defect = std::max(c.max_goal_defect, d);
  if (c.max_goal_defect > 1e-10) {
    c.ok = false;
    c.failures.push_back("window values miss their targets");
  }
  return c;
}

double g_truncated(const StageConstruction& sc, const BigReal& x, int upto) {
  if (upto < 0) throw InvalidInput("upto must be non-negative");
  BigReal xr = with_precision(x, sc.precision());
  BigReal shifted = xr + with_precision(sc.cf().value(), sc.precision());
  double acc = 0.0;
  for (int n = 1; n <= upto; ++n) acc += sc.stage_value(n, shifted) - sc.stage_value(n, xr);
  return acc;
}

double g_truncated(const StageConstruction& sc, double x, int upto) {
  return g_truncated(sc, BigReal(x, sc.precision()), upto);
}

namespace {

// First stage that is not solved, with its q_{k}; IncompleteError if none.
const Stage& first_unsolved(const StageConstruction& sc) {
  for (int n = 1; n <= sc.stage_count(); ++n)
    if (!sc.stage(n).solved) return sc.stage(n);
  throw IncompleteError("every planned stage is solved; extend the expansion to bound the tail");
}

}  // namespace

ContinuityCertificate continuity_certificate(const StageConstruction& sc) {
  ContinuityCertificate cert;
  for (int n = 1; n <= sc.stage_count(); ++n) {
    const Stage& st = sc.stage(n);
    if (!st.solved) break;
    double maxL = *std::max_element(st.lipschitz.begin(), st.lipschitz.end());
    cert.value_terms.push_back(maxL / (st.q.get_d() * st.q_next.get_d()));
    StageCheck c = check_stage(sc, n);
    cert.step_terms.push_back(c.max_step / st.q_next.get_d());
  }
  const Stage& u = first_unsolved(sc);
  // stages from u on: L <= 12 q_{k+1}; steps bounded by the window gap
  // (squares: >= 2 sqrt(q/2)) or the wrap term; q_k at least doubles per stage
  double qd = u.q.get_d();
  double step = 24.0 / qd;
  if (sc.set().kind() == AlmostSparseSet::Kind::Squares)
    step = std::max(step, 12.0 / (2.0 * std::sqrt(qd / 2.0)));
  else
    step = std::max(step, 12.0 * eps_n(sc.set(), qd > kMaxPrimeWindow ? kMaxPrimeWindow : to_u64(u.q)));
  cert.tail_bound = 2.0 * (12.0 / qd + step);
  cert.geometric = true;
  for (std::size_t i = 1; i < cert.value_terms.size(); ++i) {
    double prev = cert.value_terms[i - 1] + cert.step_terms[i - 1];
    double cur = cert.value_terms[i] + cert.step_terms[i];
    if (cur > 0.5 * prev) cert.geometric = false;
  }
  return cert;
}

PhiReport verify_phi_lemma(const StageConstruction& sc, int n, double eps) {
  const Stage& st = sc.stage(n);
  if (!st.solved) throw StateError("stage " + std::to_string(n) + " is not solved");
  if (!(eps > 0)) throw InvalidInput("eps must be positive");
  PhiReport rep;
  rep.n = n;
  rep.eps = eps;
  rep.target = sc.options().mu_twist ? -1.0 : (n % 2 == 0 ? 0.0 : 0.5);
  rep.points = st.window;
  const Stage& u = first_unsolved(sc);
  double wmax = (double)st.window.back();
  // sum_{l >= u} 1/q_{k_l} <= 2/q_{k_u}
  rep.tail = 12.0 * wmax * 2.0 / u.q.get_d();
  if (sc.options().include_h) rep.tail += 2.0 * wmax * 2.0 / u.q_next.get_d();
  rep.distance = map_points(rep.points, sc.options().threads, [&](u64 w) {
    return circle_distance(sc.birkhoff_at_zero(w), sc.stage_goal(n, w));
  });
  rep.pass = true;
  for (double d : rep.distance) {
    rep.max_distance = std::max(rep.max_distance, d);
    if (!(d + rep.tail < eps)) rep.pass = false;
  }
  return rep;
}

std::complex<double> mu_twist_average(const StageConstruction& sc, u64 N) {
  if (N < 1) throw InvalidInput("N must be positive");
  std::vector<u64> ms;
  for (u64 m = 1; m <= N; ++m)
    if (mobius(m)) ms.push_back(m);
  std::vector<double> phase = map_points(ms, sc.options().threads,
                                         [&](u64 m) { return sc.birkhoff_at_zero(m * m); });
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i)
    acc += (double)mobius(ms[i]) * expi2pi(frac1(phase[i]));
  return acc / (double)N;
}

std::complex<double> mu_twist_average(const StageConstruction& sc, int n) {
  const Stage& st = sc.stage(n);
  return mu_twist_average(sc, isqrt(to_u64(st.q) / 2));
}

double bump_window_average(const StageConstruction& sc, int n) {
  const Stage& st = sc.stage(n);
  if (!st.solved) throw StateError("stage " + std::to_string(n) + " is not solved");
  u64 q = to_u64(st.q);
  auto pts = sc.set().members((q + 1) / 2, q, q);
  if (pts.empty()) throw ConstructionError("stage window is empty");
  std::vector<double> vals = map_points(pts, sc.options().threads, [&](u64 w) {
    double s = std::sin(M_PI * sc.birkhoff_at_zero(w));
    return s * s;
  });
  double acc = 0.0;
  for (double v : vals) acc += v;
  return acc / (double)vals.size();
}

SpreadReport constant_distance(const StageConstruction& sc, int n, int grid) {
  const Stage& st = sc.stage(n);
  if (st.l < 0) throw PreconditionError("constant distance needs the h variant");
  if (grid < 2) throw InvalidInput("grid must have at least 2 points");
  const BigInt& ql = sc.cf().q(st.l);
  BigInt K = sc.cf().q(st.l + 1) / (2 * ql);
  if (K < 1) K = 1;  // small partial quotient a_{l+1}
  SpreadReport rep;
  rep.time = K * ql;
  BigReal shift = sc.orbit_point(rep.time);
  rep.values.resize(grid);
  for (int i = 0; i < grid; ++i) {
    BigReal x((double)i / grid, sc.precision());
    BigReal y = x + shift;
    double acc = 0.0;
    for (int m = 1; m <= sc.stage_count(); ++m)
      if (sc.stage(m).solved) acc += sc.stage_value(m, y) - sc.stage_value(m, x);
    rep.values[i] = frac1(acc);
  }
  rep.distance_to_constant = INFINITY;
  for (double c : rep.values) {
    double s = 0.0;
    for (double v : rep.values) s += circle_distance(v, c);
    rep.distance_to_constant = std::min(rep.distance_to_constant, s / grid);
  }
  return rep;
}

std::string stage_dump(const StageConstruction& sc, int n, const PhiReport* report) {
  const Stage& st = sc.stage(n);
  if (!st.solved) throw StateError("stage " + std::to_string(n) + " is not solved");
  nlohmann::ordered_json j;
  j["n"] = n;
  j["k_n"] = st.k;
  j["l_n"] = st.l;
  j["q"] = st.q.get_str();
  j["descriptor"] = sc.set().name();
  j["mu_twist"] = sc.options().mu_twist;
  j["window"] = st.window;
  j["targets"] = st.lipschitz;
  j["goals"] = st.goal;
  if (report) {
    nlohmann::ordered_json r;
    r["eps"] = report->eps;
    r["tail"] = report->tail;
    r["max_distance"] = report->max_distance;
    r["pass"] = report->pass;
    r["distance"] = report->distance;
    j["phi_report"] = r;
  } else {
    j["phi_report"] = nullptr;
  }
  return j.dump();
}

void load_stage_dump(StageConstruction& sc, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("stage dump does not parse: ") + e.what());
  }
  int n = j.at("n").get<int>();
  Stage& st = sc.stage_mut(n);
  if (j.at("k_n").get<long>() != st.k || j.at("q").get<std::string>() != st.q.get_str())
    throw InvalidInput("stage dump belongs to a different expansion or schedule");
  auto window = j.at("window").get<std::vector<u64>>();
  auto lip = j.at("targets").get<std::vector<double>>();
  auto goals = j.at("goals").get<std::vector<double>>();
  if (window.empty() || window.size() != lip.size() || window.size() != goals.size())
    throw InvalidInput("stage dump arrays disagree in length");
  st.window = std::move(window);
  st.lipschitz = std::move(lip);
  st.goal = std::move(goals);
  st.solved = true;
}

}  // namespace skewlab
