#include "skewlab/char_sums.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include <fftw3.h>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kLogScale = 4294967296.0;  // fixed-point scale for log p

u64 powmod(u64 b, u64 e, u64 m) {
  unsigned __int128 r = 1 % m, x = b % m;
  while (e) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return (u64)r;
}

u64 primitive_root_mod_p(u64 p) {
  if (p == 2) return 1;
  auto f = factorize(p - 1);
  for (u64 g = 2; g < p; ++g) {
    bool ok = true;
    for (auto& [r, k] : f)
      if (powmod(g, (p - 1) / r, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw IntegrityError("no primitive root found");
}

std::vector<std::complex<double>> roots_of_unity(u64 L) {
  std::vector<std::complex<double>> z(L);
  for (u64 k = 0; k < L; ++k) {
    double t = kTwoPi * (double)k / (double)L;
    z[k] = {std::cos(t), std::sin(t)};
  }
  return z;
}

std::complex<double> expi(double t) {
  double f = t - std::floor(t);
  return {std::cos(kTwoPi * f), std::sin(kTwoPi * f)};
}

std::int64_t fixed_log(u64 p) { return std::llround(std::log((double)p) * kLogScale); }

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Sweeps visit many characters of one modulus in a row, so each thread keeps
// the last root table and the last DFT plan.
const std::vector<std::complex<double>>& cached_roots(u64 L) {
  thread_local u64 cached = 0;
  thread_local std::vector<std::complex<double>> z;
  if (cached != L) {
    z = roots_of_unity(L);
    cached = L;
  }
  return z;
}

struct PlanCache {
  u64 size = 0;
  fftw_plan plan = nullptr;
  ~PlanCache() { reset(); }
  void reset() {
    if (!plan) return;
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
    plan = nullptr;
  }
  // Backward out-of-place DFT of length n, usable on any arrays.
  fftw_plan get(u64 n, std::complex<double>* in, std::complex<double>* out) {
    if (plan && size == n) return plan;
    reset();
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d((int)n, reinterpret_cast<fftw_complex*>(in),
                            reinterpret_cast<fftw_complex*>(out), FFTW_BACKWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    size = n;
    return plan;
  }
};

int vp(u64 n, u64 p) {
  int k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

}  // namespace

CharacterTable::CharacterTable(u64 q) : q_(q) {
  if (q == 0) throw InvalidInput("modulus must be positive");
  if (q > kMaxModulus) throw ResourceError("character tables limited to q <= 10^6");
  for (auto& [p, e] : factorize(q)) {
    u64 pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    if (p == 2 && e >= 3) {
      Component sign{2, e, pe, 2, true, std::vector<std::int32_t>(pe, -1)};
      Component five{2, e, pe, pe / 4, false, std::vector<std::int32_t>(pe, -1)};
      u64 x = 1;
      for (u64 k = 0; k < pe / 4; ++k) {
        five.dlog[x] = (std::int32_t)k;
        sign.dlog[x] = 0;
        five.dlog[pe - x] = (std::int32_t)k;
        sign.dlog[pe - x] = 1;
        x = x * 5 % pe;
      }
      comps_.push_back(std::move(sign));
      comps_.push_back(std::move(five));
      continue;
    }
    Component c{p, e, pe, pe / p * (p - 1), false, std::vector<std::int32_t>(pe, -1)};
    u64 g = primitive_root_mod_p(p);
    if (p == 2) g = pe == 4 ? 3 : 1;
    if (e >= 2 && p != 2 && powmod(g, p - 1, p * p) == 1) g += p;
    u64 x = 1;
    for (u64 k = 0; k < c.order; ++k) {
      c.dlog[x] = (std::int32_t)k;
      x = x * g % pe;
    }
    comps_.push_back(std::move(c));
  }
  for (auto& c : comps_) {
    count_ *= c.order;
    L_ = std::lcm(L_, c.order);
  }
}

std::vector<long long> CharacterTable::digits(u64 j) const {
  if (j >= count_) throw InvalidInput("character index out of range");
  std::vector<long long> d(comps_.size());
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    d[i] = (long long)(j % comps_[i].order);
    j /= comps_[i].order;
  }
  return d;
}

long long CharacterTable::value_exponent(u64 j, u64 a) const {
  auto d = digits(j);
  long long k = 0;
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    const auto& c = comps_[i];
    std::int32_t l = c.dlog[a % c.modulus];
    if (l < 0) return -1;
    k = (long long)(((unsigned __int128)k + (unsigned __int128)d[i] * (u64)l * (L_ / c.order)) % L_);
  }
  return k;
}

std::complex<double> CharacterTable::value(u64 j, u64 a) const {
  long long k = value_exponent(j, a);
  if (k < 0) return 0.0;
  double t = kTwoPi * (double)k / (double)L_;
  return {std::cos(t), std::sin(t)};
}

std::vector<long long> CharacterTable::exponent_table(u64 j) const {
  auto d = digits(j);
  std::vector<long long> out(q_, 0);
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    const auto& c = comps_[i];
    u64 step = (u64)d[i] * (L_ / c.order) % L_;
    // each term is below L^2 <= 10^12 and there are few components
    for (u64 a = 0, res = 0; a < q_; ++a, res = res + 1 == c.modulus ? 0 : res + 1) {
      if (out[a] < 0) continue;
      std::int32_t l = c.dlog[res];
      if (l < 0)
        out[a] = -1;
      else
        out[a] += (long long)(step * (u64)l);
    }
  }
  for (auto& v : out)
    if (v > 0) v %= (long long)L_;
  if (q_ == 1) out[0] = 0;
  return out;
}

std::vector<std::complex<double>> CharacterTable::value_table(u64 j) const {
  auto k = exponent_table(j);
  const auto& z = cached_roots(L_);
  std::vector<std::complex<double>> out(q_);
  for (u64 a = 0; a < q_; ++a) out[a] = k[a] < 0 ? 0.0 : z[k[a]];
  return out;
}

bool CharacterTable::is_principal(u64 j) const {
  for (long long d : digits(j))
    if (d) return false;
  return true;
}

u64 CharacterTable::order(u64 j) const {
  auto d = digits(j);
  u64 o = 1;
  for (std::size_t i = 0; i < comps_.size(); ++i)
    o = std::lcm(o, comps_[i].order / std::gcd(comps_[i].order, (u64)d[i]));
  return o;
}

u64 CharacterTable::conjugate(u64 j) const {
  auto d = digits(j);
  u64 idx = 0, radix = 1;
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    u64 o = comps_[i].order;
    idx += ((o - (u64)d[i]) % o) * radix;
    radix *= o;
  }
  return idx;
}

u64 CharacterTable::conductor(u64 j) const {
  auto d = digits(j);
  u64 cond = 1;
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    const auto& c = comps_[i];
    if (c.minus_one) {
      // paired with the <5> factor that follows
      const auto& five = comps_[i + 1];
      u64 ord5 = five.order / std::gcd(five.order, (u64)d[i + 1]);
      int f = 0;
      if (ord5 > 1)
        f = vp(ord5, 2) + 2;
      else if (d[i])
        f = 2;
      for (int k = 0; k < f; ++k) cond *= 2;
      ++i;
      continue;
    }
    if (!d[i]) continue;
    u64 ord = c.order / std::gcd(c.order, (u64)d[i]);
    int f = 1 + vp(ord, c.p);
    for (int k = 0; k < f; ++k) cond *= c.p;
  }
  return cond;
}

CharacterTable build_characters(u64 q) { return CharacterTable(q); }

std::complex<double> gauss_sum(const CharacterTable& table, u64 j, long long x) {
  if (!table.is_primitive(j)) throw PreconditionError("Gauss sum needs a primitive character");
  u64 e = table.modulus();
  auto vals = table.value_table(j);
  long long xr = ((x % (long long)e) + (long long)e) % (long long)e;
  std::complex<double> acc = 0.0;
  for (u64 b = 0; b < e; ++b) {
    if (vals[b] == 0.0) continue;
    u64 ph = (u64)((unsigned __int128)b * (u64)xr % e);
    double t = kTwoPi * (double)ph / (double)e;
    acc += vals[b] * std::complex<double>(std::cos(t), std::sin(t));
  }
  if (std::abs(acc) > std::sqrt((double)e) + 1e-9)
    throw IntegrityError("Gauss sum exceeds sqrt(e)");
  return acc;
}

std::vector<std::complex<double>> gauss_sums_all(const CharacterTable& table, u64 j) {
  if (!table.is_primitive(j)) throw PreconditionError("Gauss sum needs a primitive character");
  u64 e = table.modulus();
  auto vals = table.value_table(j);
  std::vector<std::complex<double>> out(e);
  thread_local PlanCache cache;
  fftw_plan plan = cache.get(e, vals.data(), out.data());
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(vals.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

double orthogonality_defect(const CharacterTable& table) {
  u64 q = table.modulus(), n = table.size(), L = table.exponent();
  std::vector<u64> units;
  for (u64 a = 0; a < q; ++a)
    if (gcd_u64(a, q) == 1) units.push_back(a);
  std::vector<std::vector<std::uint32_t>> ex(n);
  for (u64 j = 0; j < n; ++j) {
    auto full = table.exponent_table(j);
    ex[j].reserve(units.size());
    for (u64 a : units) ex[j].push_back((std::uint32_t)full[a]);
  }
  auto z = roots_of_unity(L);
  double worst = 0.0;
  // non-units contribute 0 to every product
  for (u64 j1 = 0; j1 < n; ++j1)
    for (u64 j2 = j1; j2 < n; ++j2) {
      std::complex<double> acc = 0.0;
      const auto& a = ex[j1];
      const auto& b = ex[j2];
      for (std::size_t u = 0; u < a.size(); ++u) acc += z[(a[u] + L - b[u]) % L];
      double expect = j1 == j2 ? (double)units.size() : 0.0;
      worst = std::max(worst, std::abs(acc - expect));
    }
  return worst;
}

double progression_char_stat(const CharacterTable& table, u64 r, u64 j) {
  u64 q = table.modulus();
  if (r == 0) throw InvalidInput("r must be positive");
  if (gcd_u64(r, q) != 1) throw PreconditionError("progression statistic needs (r, q) = 1");
  if (table.is_principal(j)) throw PreconditionError("progression statistic needs a non-principal character");
  auto vals = table.value_table(j);
  std::vector<std::complex<double>> cls(r, 0.0);
  for (u64 a = 0; a < q; ++a) cls[a % r] += vals[a];
  double s = 0.0;
  for (auto& c : cls) s += std::abs(c);
  return s;
}

std::string BetaPolicy::name() const {
  if (kind == Kind::Zero) return "beta0";
  return "grid" + std::to_string(oversample) + (refine ? "+golden" : "");
}

double sup_over_beta(const std::vector<std::complex<double>>& c, int degree_hint,
                     const BetaPolicy& policy) {
  if (c.empty()) return 0.0;
  auto eval = [&](double beta) {
    std::complex<double> w = expi(beta), acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * w + c[i];
    return std::abs(acc);
  };
  if (policy.kind == BetaPolicy::Kind::Zero) {
    std::complex<double> s = 0.0;
    for (auto& v : c) s += v;
    return std::abs(s);
  }
  if (c.size() == 1) return std::abs(c[0]);
  int deg = std::max(degree_hint, 1);
  int G = std::max(policy.oversample, 1) * deg;
  double best = -1.0, arg = 0.0;
  for (int k = 0; k < G; ++k) {
    double b = (double)k / G;
    double v = eval(b);
    if (v > best) {
      best = v;
      arg = b;
    }
  }
  if (policy.refine) {
    const double ratio = 0.6180339887498949;
    double lo = arg - 1.0 / G, hi = arg + 1.0 / G;
    double m1 = hi - ratio * (hi - lo), m2 = lo + ratio * (hi - lo);
    double f1 = eval(m1), f2 = eval(m2);
    for (int it = 0; it < 40; ++it) {
      if (f1 < f2) {
        lo = m1;
        m1 = m2;
        f1 = f2;
        m2 = lo + ratio * (hi - lo);
        f2 = eval(m2);
      } else {
        hi = m2;
        m2 = m1;
        f2 = f1;
        m1 = hi - ratio * (hi - lo);
        f1 = eval(m1);
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

double windowed_twisted_stat(const CharacterTable& table, u64 Hp, u64 j, const BetaPolicy& policy) {
  u64 q = table.modulus();
  if (Hp < 1 || (double)Hp > std::pow((double)q, 0.4) + 1e-9)
    throw RangeError("window length must satisfy 1 <= H' <= q^{2/5}");
  auto vals = table.value_table(j);
  double total = 0.0;
  std::vector<std::complex<double>> c;
  for (u64 z = 0; z < q; ++z) {
    u64 end = std::min(q, z + Hp);
    c.assign(vals.begin() + (std::ptrdiff_t)z, vals.begin() + (std::ptrdiff_t)end);
    total += sup_over_beta(c, (int)Hp, policy);
  }
  return total;
}

namespace {

// Per-residue fixed-point sums of log p over a sliding window of primes.
struct ClassWindow {
  u64 q, r;
  std::vector<std::int64_t> sums;
  ClassWindow(u64 q_, u64 r_) : q(q_), r(r_), sums(r_, 0) {}
  std::size_t cls(u64 p) const { return (std::size_t)((p % q) % r); }
};

void check_huxley_args(u64 x, u64 H, u64 q, u64 r) {
  if (x < 1 || H < 1 || q < 1 || r < 1) throw InvalidInput("x, H, q, r must be positive");
  if (H > x) throw PreconditionError("window length must satisfy H <= x");
  if (gcd_u64(r, q) != 1) throw PreconditionError("statistic needs (r, q) = 1");
  if (x > 100000000ULL) throw ResourceError("sliding-window statistics limited to x <= 10^8");
}

}  // namespace

Statistic huxley_stat_progressions(u64 x, u64 H, u64 q, u64 r, const PrimeSource& primes) {
  check_huxley_args(x, H, q, r);
  const std::int64_t target = std::llround((double)H / (double)r * kLogScale);
  ClassWindow win(q, r);
  if (H == x) {
    primes.scan(0, H, [&](u64 p) { win.sums[win.cls(p)] += fixed_log(p); });
    __int128 tot = 0;
    for (auto s : win.sums) tot += s > target ? s - target : target - s;
    return {(double)((long double)tot / kLogScale), (double)H};
  }
  std::vector<u64> lead = primes.primes_in(H + 1, x - 1 + H);
  std::vector<u64> trail = primes.primes_in(0, x - 1);
  primes.scan(0, H, [&](u64 p) { win.sums[win.cls(p)] += fixed_log(p); });
  __int128 tot = 0;
  for (auto s : win.sums) tot += s > target ? s - target : target - s;
  auto update = [&](u64 p, int sign) {
    std::int64_t& s = win.sums[win.cls(p)];
    tot -= s > target ? s - target : target - s;
    s += sign * fixed_log(p);
    tot += s > target ? s - target : target - s;
  };
  __int128 acc = 0;
  std::size_t li = 0, ti = 0;
  for (u64 y = 0; y < x; ++y) {
    acc += tot;  // window [y, y+H]
    if (ti < trail.size() && trail[ti] == y) update(trail[ti++], -1);
    if (li < lead.size() && lead[li] == y + H + 1) update(lead[li++], +1);
  }
  return {(double)((long double)acc / kLogScale), (double)H * (double)x};
}

namespace {

// sup over (beta, v) of the windowed prime-minus-main-term sum for the window
// [z, z+H') of residues mod q. weights[a] is the fixed-point log-weight at
// residue a, main[a] the main-term weight.
double window_sup(const std::vector<std::int64_t>& weights, const std::vector<double>& main, u64 z,
                  u64 Hp, u64 r, const BetaPolicy& policy) {
  u64 q = weights.size();
  u64 end = std::min(q, z + Hp);
  double best = 0.0;
  std::vector<std::complex<double>> c;
  u64 classes = std::min(r, end - z);
  for (u64 off = 0; off < classes; ++off) {
    c.clear();
    for (u64 a = z + off; a < end; a += r) c.push_back((double)weights[a] / kLogScale - main[a]);
    // terms sit at a = a0 + k r, so |sum c_k e(a beta)| is a polynomial in e(r beta)
    best = std::max(best, sup_over_beta(c, (int)c.size() - 1, policy));
  }
  return best;
}

constexpr double kSupScale = 1048576.0;

}  // namespace

std::complex<double> reduced_residue_window_sum(u64 q, u64 r, u64 v, u64 z, u64 Hp, double beta) {
  std::complex<double> acc = 0.0;
  for (u64 a = z; a < std::min(q, z + Hp); ++a)
    if (gcd_u64(a, q) == 1 && a % r == v % r) acc += expi((double)a * beta);
  return acc;
}

Statistic huxley_stat_windows(u64 x, u64 H, u64 q, u64 r, u64 Hp, const PrimeSource& primes,
                              const BetaPolicy& policy) {
  check_huxley_args(x, H, q, r);
  if (Hp < 1 || Hp > q) throw RangeError("window length must satisfy 1 <= H' <= q");
  if ((double)q * 4.0 * (double)Hp * (double)Hp / (double)r > 4e10)
    throw ResourceError("window statistic exceeds the work budget");
  const double unit_mass = (double)H / (double)euler_phi(q);
  std::vector<double> main(q, 0.0);
  for (u64 a = 0; a < q; ++a)
    if (gcd_u64(a, q) == 1) main[a] = unit_mass;
  std::vector<std::int64_t> weights(q, 0);
  primes.scan(0, H, [&](u64 p) { weights[p % q] += fixed_log(p); });

  if (H == x) {
    double total = 0.0;
    for (u64 z = 0; z < q; ++z) total += window_sup(weights, main, z, Hp, r, policy);
    return {total, (double)H * (double)Hp};
  }

  double per_y = 2.0 * (double)Hp * (4.0 * (double)Hp * (double)Hp / (double)r + (double)Hp);
  if ((double)x * per_y > 4e10) throw ResourceError("window statistic exceeds the work budget");
  // window sups in fixed point so the running total is exact
  std::vector<std::int64_t> sup(q);
  __int128 tot = 0;
  auto refresh = [&](u64 z) {
    std::int64_t v = std::llround(window_sup(weights, main, z, Hp, r, policy) * kSupScale);
    tot += v - sup[z];
    sup[z] = v;
  };
  for (u64 z = 0; z < q; ++z) {
    sup[z] = std::llround(window_sup(weights, main, z, Hp, r, policy) * kSupScale);
    tot += sup[z];
  }
  std::vector<u64> lead = primes.primes_in(H + 1, x - 1 + H);
  std::vector<u64> trail = primes.primes_in(0, x - 1);
  auto touch = [&](u64 p, int sign) {
    u64 a = p % q;
    weights[a] += sign * fixed_log(p);
    u64 lo = a + 1 >= Hp ? a + 1 - Hp : 0;
    for (u64 z = lo; z <= a; ++z) refresh(z);
  };
  __int128 acc = 0;
  std::size_t li = 0, ti = 0;
  for (u64 y = 0; y < x; ++y) {
    acc += tot;
    if (ti < trail.size() && trail[ti] == y) touch(trail[ti++], -1);
    if (li < lead.size() && lead[li] == y + H + 1) touch(lead[li++], +1);
  }
  return {(double)((long double)acc / kSupScale), (double)x * (double)H * (double)Hp};
}

ProgressionGap residue_progression_gap(u64 q, u64 r, u64 d) {
  if (q < 1 || r < 1 || d < 1) throw InvalidInput("q, r, d must be positive");
  if (q % d) throw InvalidInput("d must divide q");
  if (gcd_u64(r, q) != 1) throw PreconditionError("gap needs (r, q) = 1");
  std::vector<u64> ps;
  for (auto& [p, e] : factorize(d)) ps.push_back(p);
  std::vector<double> count(r, 0.0);
  for (u64 n = 1; n <= q; ++n) {
    bool ok = true;
    for (u64 p : ps)
      if (n % p == 0) {
        ok = false;
        break;
      }
    if (ok) count[n % r] += 1;
  }
  ProgressionGap g;
  g.normalizer = (double)euler_phi(d) / (double)d * (double)q / (double)r;
  for (double c : count) g.gap += std::abs(c - g.normalizer);
  g.gap /= (double)r;
  return g;
}

WindowPair twisted_residue_window(u64 q, u64 d, u64 r, u64 a, u64 y, u64 H, double beta,
                                  double tau) {
  if (q < 2 || d < 1 || r < 1) throw RangeError("q >= 2, d >= 1, r >= 1 required");
  if (q % d) throw RangeError("d must divide q");
  if (gcd_u64(r, q) != 1) throw RangeError("window comparison needs (r, q) = 1");
  double lq = std::log((double)q);
  if ((double)H <= std::pow((double)q, 0.2)) throw RangeError("window needs H > q^{1/5}");
  if (std::log((double)r) > 100.0 * std::log(lq)) throw RangeError("window needs r <= (log q)^100");
  if (std::abs(beta) > std::exp(-tau * (double)r)) throw RangeError("window needs |beta| <= e^{-tau r}");
  std::vector<u64> pd, prd;
  for (auto& [p, e] : factorize(d)) pd.push_back(p);
  for (auto& [p, e] : factorize(d * r / gcd_u64(d, r))) prd.push_back(p);
  auto coprime = [](u64 n, const std::vector<u64>& ps) {
    for (u64 p : ps)
      if (n % p == 0) return false;
    return true;
  };
  long double base = (long double)y * beta;
  std::complex<double> shift = expi((double)(base - std::floor(base)));
  std::complex<double> s1 = 0.0, s2 = 0.0;
  for (u64 h = 0; h <= H; ++h) {
    u64 n = y + h;
    std::complex<double> w = expi((double)h * beta);
    if (n % r == a % r && coprime(n, pd)) s1 += w;
    if (coprime(n, prd)) s2 += w;
  }
  return {s1 * shift, s2 * shift / (double)euler_phi(r)};
}

u64 window_coprime_count(u64 qprime, u64 y, u64 H) {
  if (qprime < 1) throw InvalidInput("q' must be positive");
  std::vector<u64> ps;
  for (auto& [p, e] : factorize(qprime)) ps.push_back(p);
  u64 c = 0;
  for (u64 n = y; n <= y + H; ++n) {
    bool ok = true;
    for (u64 p : ps)
      if (n % p == 0) {
        ok = false;
        break;
      }
    c += ok;
  }
  return c;
}

}  // namespace skewlab
