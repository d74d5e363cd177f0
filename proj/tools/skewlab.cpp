// skewlab: experiment driver. Each subcommand reads a flat key = value
// config (defaults < --config file < flags), runs one experiment and writes a
// JSON envelope {command, config, started, rows} or plain CSV rows.
//
// Exit status: 0 ok, 1 usage, 2 invalid input or failed precondition,
// 3 resource limits.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <new>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "skewlab/calibration.hpp"
#include "skewlab/char_sums.hpp"
#include "skewlab/cocycle.hpp"
#include "skewlab/counterexample.hpp"
#include "skewlab/diophantine.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/identities.hpp"
#include "skewlab/parallel.hpp"
#include "skewlab/phase_approx.hpp"
#include "skewlab/poly_prime_sums.hpp"
#include "skewlab/primes.hpp"
#include "skewlab/skew_dynamics.hpp"

using namespace skewlab;
using json = nlohmann::ordered_json;
namespace cal = skewlab::calibration;

namespace {

struct Key {
  std::string name;
  std::string value;
  std::string help;
};

// Resolved settings of one run, in declaration order.
class Config {
 public:
  explicit Config(std::vector<Key> keys) : keys_(std::move(keys)) {}

  bool has(const std::string& k) const { return find(k) != nullptr; }
  void set(const std::string& k, const std::string& v) {
    Key* e = find(k);
    if (!e) throw InvalidInput("unknown config key '" + k + "'");
    e->value = v;
  }
  const std::string& str(const std::string& k) const {
    const Key* e = find(k);
    if (!e) throw InvalidInput("unknown config key '" + k + "'");
    return e->value;
  }
  double real(const std::string& k) const { return to_real(k, str(k)); }
  u64 count(const std::string& k) const { return to_count(k, str(k)); }
  long integer(const std::string& k) const {
    double v = real(k);
    if (v != std::floor(v)) throw InvalidInput(k + " must be an integer");
    return (long)v;
  }
  bool flag(const std::string& k) const {
    const std::string& v = str(k);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InvalidInput(k + " must be true or false");
  }
  std::vector<std::string> list(const std::string& k) const {
    std::vector<std::string> out;
    std::stringstream ss(str(k));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item.erase(0, item.find_first_not_of(" \t"));
      item.erase(item.find_last_not_of(" \t") + 1);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }
  std::vector<u64> counts(const std::string& k) const {
    std::vector<u64> out;
    for (const auto& s : list(k)) out.push_back(to_count(k, s));
    return out;
  }
  std::vector<long long> integers(const std::string& k) const {
    std::vector<long long> out;
    for (const auto& s : list(k)) {
      double v = to_real(k, s);
      if (v != std::floor(v)) throw InvalidInput(k + " entries must be integers");
      out.push_back((long long)v);
    }
    return out;
  }

  json to_json() const {
    json j = json::object();
    for (const auto& e : keys_) j[e.name] = e.value;
    return j;
  }
  const std::vector<Key>& keys() const { return keys_; }

 private:
  static double to_real(const std::string& k, const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::logic_error&) {
      throw InvalidInput(k + ": '" + s + "' is not a number");
    }
  }
  // Accepts 1e7 style as well as plain digits (kept exact past 2^53).
  static u64 to_count(const std::string& k, const std::string& s) {
    if (!s.empty() && std::all_of(s.begin(), s.end(), ::isdigit)) {
      try {
        return std::stoull(s);
      } catch (const std::logic_error&) {
        throw InvalidInput(k + ": '" + s + "' is out of range");
      }
    }
    double v = to_real(k, s);
    if (v < 0 || v != std::floor(v) || v > 1.8e19)
      throw InvalidInput(k + ": '" + s + "' is not a non-negative integer");
    return (u64)v;
  }
  Key* find(const std::string& k) {
    for (auto& e : keys_)
      if (e.name == k) return &e;
    return nullptr;
  }
  const Key* find(const std::string& k) const {
    for (const auto& e : keys_)
      if (e.name == k) return &e;
    return nullptr;
  }
  std::vector<Key> keys_;
};

std::string canonical(std::string k) {
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

void load_config_file(const std::string& path, Config& cfg, std::string& threads) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput(path + ":" + std::to_string(lineno) + ": expected key = value");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    std::string k = canonical(trim(line.substr(0, eq)));
    // threads never reaches the envelope: output must not depend on it
    if (k == "threads") {
      threads = trim(line.substr(eq + 1));
      continue;
    }
    if (!cfg.has(k)) throw InvalidInput(path + ":" + std::to_string(lineno) + ": unknown key '" + k + "'");
    cfg.set(k, trim(line.substr(eq + 1)));
  }
}

struct Run {
  const Config& cfg;
  int threads = 1;
};

using Rows = std::vector<json>;

// ---- shared inputs ----

const std::vector<Key> kAlphaKeys = {
    {"preset", "", "designated | counterexample; overrides quotients"},
    {"quotients", "1,1,1,1,1", "partial quotients a_1,a_2,..."},
    {"decimal", "", "alpha in decimal; used when quotients is empty"},
    {"depth", "0", "expansion depth (0 = number of quotients)"},
    {"precision", "4096", "working precision in bits"},
};

ContinuedFraction load_alpha(const Config& c) {
  const std::string& preset = c.str("preset");
  if (preset == "designated") return cal::designated_alpha();
  if (preset == "counterexample") return cal::counterexample_alpha();
  if (!preset.empty()) throw InvalidInput("unknown preset '" + preset + "'");
  auto prec = (mpfr_prec_t)c.count("precision");
  long depth = c.integer("depth");
  if (c.str("quotients").empty()) {
    if (c.str("decimal").empty()) throw InvalidInput("give quotients or decimal");
    return cf_from_decimal(c.str("decimal"), depth > 0 ? depth : 20, prec);
  }
  auto qs = parse_quotients(c.str("quotients"));
  if (depth <= 0) depth = (long)qs.size();
  if ((long)qs.size() < depth) qs.resize(depth, BigInt(1));
  return cf_from_quotients(qs, depth, prec);
}

std::vector<Key> with(std::vector<Key> a, const std::vector<Key>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string big(const BigInt& v) { return v.get_str(); }

json cplx_fields(json row, std::complex<double> v) {
  row["re"] = v.real();
  row["im"] = v.imag();
  row["abs"] = std::abs(v);
  return row;
}

SkewProduct designated_map() {
  return SkewProduct(cal::designated_alpha(), (TrigPolynomial)cal::designated_cocycle());
}

// ---- experiments ----

Rows run_cf(const Run& r) {
  auto cf = load_alpha(r.cfg);
  long last = cf.last_reliable_index();
  Rows rows;
  for (long k = 0; k <= cf.depth(); ++k) {
    json row;
    row["k"] = k;
    row["a"] = k == 0 ? std::string("0") : big(cf.quotients()[k - 1]);
    row["p"] = big(cf.p(k));
    row["q"] = big(cf.q(k));
    row["determinant"] = big(cf.p(k) * cf.q(k - 1) - cf.p(k - 1) * cf.q(k));
    if (k >= 1 && k <= last && k < cf.depth()) {
      double d = dist_to_integers(cf.q(k), cf);
      double up = 1.0 / cf.q(k + 1).get_d();
      row["dist"] = d;
      row["lower"] = up / 2;
      row["upper"] = up;
      row["law_ok"] = d >= up / 2 * (1 - 1e-12) && d <= up * (1 + 1e-12);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Rows run_cocycle_check(const Run& r) {
  auto cf = load_alpha(r.cfg);
  AnalyticCocycle g = cal::designated_cocycle();
  if (r.cfg.str("cocycle") != "designated") {
    std::ifstream in(r.cfg.str("cocycle"));
    if (!in) throw InvalidInput("cannot read cocycle file " + r.cfg.str("cocycle"));
    std::stringstream ss;
    ss << in.rdbuf();
    g = AnalyticCocycle::from_csv(ss.str(), r.cfg.real("decay"));
  }
  BirkhoffKernel K(g, cf);
  u64 samples = r.cfg.count("samples"), nmax = r.cfg.count("n_max"), mmax = r.cfg.count("m_max");
  if (nmax < 1 || mmax < 1) throw InvalidInput("n_max and m_max must be positive");
  std::mt19937_64 rng(r.cfg.count("seed"));
  struct Draw { u64 n, m; double x; };
  std::vector<Draw> draws(samples);
  for (auto& d : draws) {
    d.n = 1 + rng() % nmax;
    d.m = 1 + rng() % mmax;
    d.x = (double)(rng() >> 11) * 0x1.0p-53;
  }
  Rows rows(samples);
  parallel_chunks(samples, r.threads, [&](std::size_t i) {
    const Draw& d = draws[i];
    Quad x = d.x;
    Quad xn = unit_interval(x + cf.centered_phase((long long)d.n));
    double lhs = K.sum(d.n + d.m, x);
    double rhs = K.sum(d.n, x) + K.sum(d.m, xn);
    double direct = birkhoff_direct(g, d.n, x, cf);
    json row;
    row["n"] = d.n;
    row["m"] = d.m;
    row["x"] = d.x;
    row["cocycle_defect"] = std::abs(lhs - rhs);
    row["closed_vs_direct"] = std::abs(K.sum(d.n, x) - direct);
    rows[i] = std::move(row);
  });
  return rows;
}

Rows run_phase(const Run& r) {
  auto params = AnalysisParams::make(cal::kDecayRate, r.cfg.real("delta"));
  const auto pair = cal::designated_reduced();
  auto g = pair.reduced();
  long lo = r.cfg.integer("n_lo"), hi = r.cfg.integer("n_hi");
  u64 xs = r.cfg.count("x_grid"), ms = r.cfg.count("m_grid");
  if (lo < 1 || hi < lo || xs < 1 || ms < 1) throw InvalidInput("need 1 <= n_lo <= n_hi and positive grids");
  BigInt w(std::to_string(r.cfg.count("w")));
  Rows rows;
  for (long n = lo; n <= hi; ++n) {
    auto P = build_phase_poly(pair, n, params);
    double worst = 0.0, margin = -INFINITY;
    for (const auto& c : P.coefficients()) margin = std::max(margin, c.log_sup - c.log_bound);
    // m spread log-uniformly over [1, q_{n+1}^{1-delta}]
    BigReal lmax = BigReal::log(BigReal(pair.cf.q(n + 1), 256));
    lmax *= BigReal(1 - params.delta, 256);
    std::vector<double> errs(xs * ms);
    std::vector<BigInt> mvals(ms);
    for (u64 t = 0; t < ms; ++t)
      mvals[t] = BigReal::exp(lmax * BigReal((t + 0.5) / ms, 256)).floor();
    parallel_chunks(xs * ms, r.threads, [&](std::size_t i) {
      errs[i] = polap_error(g, P, (Quad)(i % xs) / xs, mvals[i / xs], w, pair.cf);
    });
    for (double e : errs) worst = std::max(worst, e);
    json row;
    row["n"] = n;
    row["degree"] = P.degree();
    row["coefficients"] = P.coefficients().size();
    row["max_error"] = worst;
    if (!P.is_zero()) row["log_bound_margin"] = margin;
    rows.push_back(std::move(row));
  }
  return rows;
}

Rows run_orbit(const Run& r) {
  auto T = designated_map();
  Quad x = r.cfg.real("x"), y = r.cfg.real("y");
  Rows rows;
  for (u64 n : r.cfg.counts("n")) {
    auto p = iterate(T, n, x, y);
    json row;
    row["n"] = n;
    row["x"] = (double)p.x;
    row["y"] = (double)p.y;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Observable> observables(const Config& c) {
  auto bs = c.integers("b"), cs = c.integers("c");
  if (bs.size() != cs.size() || bs.empty()) throw InvalidInput("b and c need equal nonempty lists");
  std::vector<Observable> out;
  for (std::size_t i = 0; i < bs.size(); ++i) out.push_back({bs[i], cs[i]});
  return out;
}

Rows run_prime_average(const Run& r) {
  auto T = designated_map();
  auto Ns = r.cfg.counts("N");
  if (Ns.empty()) throw InvalidInput("N list is empty");
  u64 top = *std::max_element(Ns.begin(), Ns.end());
  if (top > 2000000000ULL) throw ResourceError("prime averages limited to N <= 2e9");
  PrimeSource primes(std::max<u64>(top, 64));
  primes.prefetch(top, r.threads);
  Quad x = r.cfg.real("x"), y = r.cfg.real("y");
  Rows rows;
  for (u64 N : Ns)
    for (const auto& f : observables(r.cfg)) {
      auto a = prime_weighted_average(T, f, N, x, y, primes, r.threads);
      json row;
      row["N"] = N;
      row["b"] = f.b;
      row["c"] = f.c;
      row = cplx_fields(row, a.value);
      row["theta_ratio"] = a.theta_ratio;
      rows.push_back(std::move(row));
    }
  return rows;
}

Rows run_residue_average(const Run& r) {
  auto T = designated_map();
  Quad x = r.cfg.real("x"), y = r.cfg.real("y");
  Rows rows;
  for (u64 n : r.cfg.counts("n")) {
    const BigInt& q = T.cf().q((long)n);
    if (q > 1000000000) throw ResourceError("residue averages limited to z <= 1e9");
    u64 z = q.get_ui();
    u64 d = r.cfg.str("d") == "q" ? z : r.cfg.count("d");
    for (const auto& f : observables(r.cfg)) {
      json row;
      row["n"] = n;
      row["z"] = z;
      row["d"] = d;
      row["b"] = f.b;
      row["c"] = f.c;
      rows.push_back(cplx_fields(row, reduced_residue_average(T, f, z, d, x, y, r.threads)));
    }
  }
  return rows;
}

Rows run_huxley(const Run& r) {
  auto xs = r.cfg.counts("x");
  if (xs.empty()) throw InvalidInput("x list is empty");
  u64 top = *std::max_element(xs.begin(), xs.end());
  if (top > 100000000) throw ResourceError("huxley statistic limited to x <= 1e8");
  PrimeSource primes(std::max<u64>(2 * top + 1, 64));
  primes.prefetch(2 * top + 1, r.threads);
  double qe = r.cfg.real("q_exponent"), re = r.cfg.real("r_exponent");
  Rows rows;
  for (u64 x : xs) {
    u64 q = (u64)std::floor(std::pow((double)x, qe));
    while (q >= 2 && !primes.is_prime(q)) --q;
    if (q < 2) throw InvalidInput("no prime below x^q_exponent");
    u64 rr = (u64)std::floor(std::pow((double)q, re));
    while (rr > 1 && std::gcd(rr, q) != 1) --rr;
    if (rr < 1) rr = 1;
    auto s = huxley_stat_progressions(x, x, q, rr, primes);
    json row;
    row["x"] = x;
    row["H"] = x;
    row["q"] = q;
    row["r"] = rr;
    row["value"] = s.value;
    row["trivial_scale"] = s.trivial_scale;
    row["value_over_x"] = s.value / (double)x;
    rows.push_back(std::move(row));
  }
  return rows;
}

// Sampling shared with the calibration of the progression constant.
struct CharSample {
  u64 q;
  std::vector<u64> chars;  // empty = all
};

std::vector<CharSample> sample_moduli(const Config& c) {
  std::mt19937_64 rng(c.count("seed"));
  u64 moduli = c.count("moduli"), qmax = c.count("q_max"), full = c.count("full_q"),
      per = c.count("chars");
  if (qmax < 3) throw InvalidInput("q_max must be at least 3");
  std::vector<CharSample> out;
  for (u64 t = 0; t < moduli; ++t) {
    CharSample s{3 + rng() % (qmax - 2), {}};
    if (s.q > full) {
      u64 phi = euler_phi(s.q);
      for (u64 k = 0; k < per; ++k) s.chars.push_back(rng() % phi);
    }
    out.push_back(std::move(s));
  }
  return out;
}

Rows run_charsum(const Run& r) {
  const std::string& mode = r.cfg.str("mode");
  if (mode == "orthogonality") {
    u64 qmax = r.cfg.count("q_max");
    if (qmax > 5000) throw ResourceError("orthogonality sweep limited to q_max <= 5000");
    Rows rows(qmax);
    parallel_chunks(qmax, r.threads, [&](std::size_t i) {
      CharacterTable t(i + 1);
      json row;
      row["q"] = i + 1;
      row["characters"] = t.size();
      row["defect"] = orthogonality_defect(t);
      rows[i] = std::move(row);
    });
    return rows;
  }
  if (mode != "progression") throw InvalidInput("mode must be progression or orthogonality");
  auto samples = sample_moduli(r.cfg);
  auto rs = r.cfg.counts("r");
  std::vector<Rows> parts(samples.size());
  parallel_chunks(samples.size(), r.threads, [&](std::size_t i) {
    const auto& s = samples[i];
    CharacterTable t(s.q);
    std::vector<u64> js = s.chars;
    if (js.empty())
      for (u64 j = 0; j < t.size(); ++j) js.push_back(j);
    double scale0 = (double)divisor_count(s.q) * std::log((double)s.q);
    for (u64 rr : rs) {
      if (std::gcd(rr, s.q) != 1) continue;
      double worst = 0.0;
      u64 used = 0;
      for (u64 j : js) {
        if (t.is_principal(j)) continue;
        worst = std::max(worst, progression_char_stat(t, rr, j) / (std::sqrt((double)rr * s.q) * scale0));
        ++used;
      }
      json row;
      row["q"] = s.q;
      row["r"] = rr;
      row["characters"] = used;
      row["max_ratio"] = worst;
      parts[i].push_back(std::move(row));
    }
  });
  Rows rows;
  for (auto& p : parts)
    for (auto& row : p) rows.push_back(std::move(row));
  return rows;
}

Rows run_identities(const Run& r) {
  u64 N = r.cfg.count("n_max");
  if (N > 1000000) throw ResourceError("identity sweep limited to n_max <= 1e6");
  constexpr std::size_t kChunks = 64;
  Rows rows;
  auto add = [&](const char* name, const std::string& param, u64 checked, u64 defects) {
    json row;
    row["identity"] = name;
    row["param"] = param;
    row["checked"] = checked;
    row["defects"] = defects;
    rows.push_back(std::move(row));
  };
  for (u64 z : r.cfg.counts("z")) {
    if (z < 1) throw InvalidInput("z must be positive");
    std::vector<u64> bad(kChunks, 0);
    u64 span = N / kChunks + 1;
    parallel_chunks(kChunks, r.threads, [&](std::size_t i) {
      u64 lo = std::max<u64>(z + 1, i * span), hi = std::min<u64>(N, (i + 1) * span - 1);
      for (u64 n = lo; n <= hi; ++n) bad[i] += !(vaughan_decompose(n, z).total == lambda_vec(n));
    });
    add("vaughan", "z=" + std::to_string(z), N > z ? N - z : 0, std::accumulate(bad.begin(), bad.end(), (u64)0));
  }
  for (u64 z : r.cfg.counts("linnik_z")) {
    LinnikTable table(N, z);
    u64 bad = 0;
    for (u64 n = 2; n <= N; ++n) {
      auto v = table.at(n);
      bad += v.lhs != v.rhs;
    }
    add("linnik", "z=" + std::to_string(z), N > 1 ? N - 1 : 0, bad);
  }
  for (u64 k : r.cfg.counts("hb_k")) {
    if (k < 1 || k > 8) throw InvalidInput("hb_k entries must lie in [1, 8]");
    u64 z = (u64)std::ceil(std::pow((double)N, 1.0 / (double)k) - 1e-9);
    u64 p = 1;
    auto power_ok = [&] {
      p = 1;
      for (u64 i = 0; i < k; ++i) p *= z;
      return p >= N;
    };
    while (!power_ok()) ++z;
    auto rep = heathbrown_coeff_check((int)k, z, N);
    add("heath-brown", "k=" + std::to_string(k) + ",z=" + std::to_string(z), rep.checked,
        rep.worst_defect == 0.0 ? 0 : 1);
  }
  u64 windows = r.cfg.count("buchstab_windows");
  std::mt19937_64 rng(r.cfg.count("seed"));
  u64 bad = 0;
  for (u64 t = 0; t < windows; ++t) {
    u64 lo = 1 + rng() % 990000, len = 1 + rng() % 10000;
    u64 w = 2 + rng() % 50, z = w + rng() % 200;
    auto b = buchstab_check(lo, lo + len - 1, w, z);
    bad += b.lhs != b.rhs;
  }
  if (windows) add("buchstab", "windows=" + std::to_string(windows), windows, bad);
  return rows;
}

Rows run_ms_sum(const Run& r) {
  u64 N = r.cfg.count("N");
  u64 H = r.cfg.str("H").empty() ? (u64)std::floor(std::pow((double)N, r.cfg.real("h_exponent")))
                                 : r.cfg.count("H");
  if (N + H > 2000000000ULL) throw ResourceError("ms-sum limited to N + H <= 2e9");
  PrimeSource primes(std::max<u64>(N + H + 1, 64));
  auto g = ShiftedPolynomial::parse(r.cfg.str("g"));
  auto rep = ms_gap(N, H, r.cfg.count("r"), r.cfg.count("a"), g, r.cfg.real("eta"), primes,
                    r.cfg.real("tau"), r.threads);
  json row;
  row["N"] = N;
  row["H"] = H;
  row["r"] = r.cfg.count("r");
  row["a"] = r.cfg.count("a");
  row["g"] = r.cfg.str("g");
  row["gap"] = rep.gap;
  row["budget"] = rep.budget;
  row["ratio"] = rep.ratio;
  row["prime_re"] = rep.prime_side.real();
  row["prime_im"] = rep.prime_side.imag();
  row["main_re"] = rep.main_side.real();
  row["main_im"] = rep.main_side.imag();
  std::string w;
  for (const auto& s : rep.warnings) w += (w.empty() ? "" : "; ") + s;
  row["warnings"] = w;
  return {row};
}

Rows run_counterexample(const Run& r) {
  StageOptions opts;
  opts.include_h = r.cfg.flag("include_h");
  opts.mu_twist = r.cfg.flag("mu_twist");
  opts.first_k = r.cfg.integer("first_k");
  opts.feasibility_cap = r.cfg.count("cap");
  opts.threads = r.threads;
  const std::string& set = r.cfg.str("set");
  AlmostSparseSet A = set == "squares" ? AlmostSparseSet::squares()
                      : set == "primes" ? AlmostSparseSet::primes()
                                        : throw InvalidInput("set must be squares or primes");
  StageConstruction sc(cal::counterexample_alpha(), A, opts);
  int want = (int)r.cfg.count("stages");
  if (want < 1) throw InvalidInput("stages must be positive");
  if (want > sc.feasible_stages())
    throw ResourceError("only " + std::to_string(sc.feasible_stages()) + " stages fit under the cap");
  for (int n = 1; n <= want; ++n) solve_stage_targets(sc, n);
  double eps = r.cfg.real("eps");
  Rows rows;
  for (int n = 1; n <= want; ++n) {
    const Stage& st = sc.stage(n);
    auto chk = check_stage(sc, n);
    json row;
    row["n"] = n;
    row["k"] = st.k;
    row["l"] = st.l;
    row["q"] = big(st.q);
    row["window"] = st.window.size();
    row["stage_ok"] = chk.ok;
    if (!opts.mu_twist) {
      auto ph = verify_phi_lemma(sc, n, eps);
      row["phi_pass"] = ph.pass;
      row["max_distance"] = ph.max_distance;
      row["tail"] = ph.tail;
      row["bump_average"] = bump_window_average(sc, n);
    } else {
      auto v = mu_twist_average(sc, n);
      row["mu_re"] = v.real();
      row["mu_im"] = v.imag();
    }
    if (opts.include_h) row["spread"] = constant_distance(sc, n).distance_to_constant;
    rows.push_back(std::move(row));
  }
  return rows;
}

Rows run_discrepancy(const Run& r) {
  auto T = designated_map();
  Quad x0 = r.cfg.real("x"), y0 = r.cfg.real("y");
  int K = (int)r.cfg.integer("K");
  const std::string& coord = r.cfg.str("coordinate");
  if (coord != "x" && coord != "y") throw InvalidInput("coordinate must be x or y");
  Rows rows;
  for (u64 N : r.cfg.counts("N")) {
    if (N > 10000000) throw ResourceError("discrepancy limited to N <= 1e7");
    std::vector<double> pts(N);
    constexpr std::size_t kChunks = 64;
    u64 span = N / kChunks + 1;
    parallel_chunks(kChunks, r.threads, [&](std::size_t c) {
      for (u64 k = c * span; k < std::min(N, (c + 1) * span); ++k) {
        auto p = iterate(T, k + 1, x0, y0);
        pts[k] = (double)(coord == "x" ? p.x : p.y);
      }
    });
    json row;
    row["N"] = N;
    row["K"] = K;
    row["weyl_1"] = std::abs(weyl_sum(pts, 1));
    row["bound"] = star_discrepancy_bound(pts, K);
    row["exact"] = star_discrepancy_exact(pts);
    rows.push_back(std::move(row));
  }
  return rows;
}

struct Command {
  std::string name;
  std::string help;
  std::vector<Key> keys;
  std::function<Rows(const Run&)> fn;
};

std::vector<Command> commands() {
  const Key seed{"seed", "1", "RNG seed for sampled grids"};
  const std::vector<Key> orbit_start = {{"x", "0.1", "start x"}, {"y", "0", "start y"}};
  const std::vector<Key> obs = {{"b", "0", "x frequencies (list)"}, {"c", "1", "y frequencies (list)"}};
  return {
      {"cf", "convergents and the two-sided ||q_k alpha|| law", kAlphaKeys, run_cf},
      {"cocycle-check", "cocycle identity and closed vs direct Birkhoff sums",
       with(with({{"cocycle", "designated", "designated or a CSV of m, re, im"},
                  {"decay", "0.05", "decay rate for CSV cocycles"},
                  {"samples", "1000", "random (n, m, x) triples"},
                  {"n_max", "10000", ""},
                  {"m_max", "10000", ""}},
                 kAlphaKeys),
            {seed}),
       run_cocycle_check},
      {"phase", "phase polynomial error on the designated pair",
       {{"n_lo", std::to_string(cal::kPhaseScaleLo), ""},
        {"n_hi", std::to_string(cal::kPhaseScaleHi), ""},
        {"delta", "0.2", ""},
        {"x_grid", "16", "x sample points"},
        {"m_grid", "4", "log-spaced m values"},
        {"w", "1", "period multiplier"}},
       run_phase},
      {"orbit", "orbit points T^n(x, y) of the designated map",
       with({{"n", "1,10,100,1000,1000000", "times"}}, orbit_start), run_orbit},
      {"prime-average", "(1/N) sum_p e(b x + c y)(T^p) log p",
       with(with({{"N", "1e5,1e7", "list"}}, obs), orbit_start), run_prime_average},
      {"residue-average", "reduced residue averages with z = q_n",
       with(with({{"n", "2,3,4", "scales"}, {"d", "q", "modulus (q = z)"}}, obs), orbit_start),
       run_residue_average},
      {"huxley", "single-window progression statistic with H = x",
       {{"x", "1e5,1e7", "list"},
        {"q_exponent", std::to_string(5.0 / 6.0 - 0.01), "q = largest prime <= x^e"},
        {"r_exponent", "0.9", "r = largest integer <= q^e coprime to q"}},
       run_huxley},
      {"charsum", "character sum statistics",
       {{"mode", "progression", "progression | orthogonality"},
        {"moduli", "50", "sampled moduli"},
        {"q_max", "10000", ""},
        {"full_q", "1000", "all characters up to this modulus"},
        {"chars", "20", "sampled characters beyond full_q"},
        {"r", "2,3,5,7", ""},
        {"seed", "6", "RNG seed"}},
       run_charsum},
      {"identities", "Vaughan, Linnik, Heath-Brown and Buchstab identities",
       {{"n_max", "10000", ""},
        {"z", "1,2,5,10,30", "Vaughan z list"},
        {"linnik_z", "1,2,10", ""},
        {"hb_k", "1,2,3", "Heath-Brown k list (z = ceil(N^(1/k)))"},
        {"buchstab_windows", "100", ""},
        seed},
       run_identities},
      {"ms-sum", "prime phase sum against its integer main term",
       {{"N", "1e6", ""},
        {"H", "", "window length; empty = N^h_exponent"},
        {"h_exponent", "0.7", ""},
        {"r", "1", ""},
        {"a", "0", ""},
        {"g", "0", "coefficients of (n - N)^i"},
        {"eta", "0.05", ""},
        {"tau", "0.01", ""}},
       run_ms_sum},
      {"counterexample", "stage construction and its checks",
       {{"set", "squares", "squares | primes"},
        {"stages", "3", ""},
        {"eps", "0.05", ""},
        {"include_h", "false", ""},
        {"mu_twist", "false", ""},
        {"first_k", "2", ""},
        {"cap", "1e9", "largest q_k solved"}},
       run_counterexample},
      {"discrepancy", "Weyl sums and star discrepancy of an orbit coordinate",
       with({{"N", "1000,10000,100000", "list"}, {"K", "32", "frequency cutoff"},
             {"coordinate", "y", "x | y"}},
            orbit_start),
       run_discrepancy},
  };
}

std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string render_csv(const Rows& rows) {
  std::vector<std::string> cols;
  for (const auto& row : rows)
    for (const auto& [k, v] : row.items())
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out += ",";
      if (row.contains(cols[i])) out += csv_cell(row[cols[i]]);
    }
    out += "\n";
  }
  return out;
}

long long started() {
  const char* s = std::getenv("SOURCE_DATE_EPOCH");
  if (!s || !*s) return 0;
  try {
    return std::stoll(s);
  } catch (const std::logic_error&) {
    throw InvalidInput("SOURCE_DATE_EPOCH is not an integer");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skewlab experiment driver"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_path, format;
  int threads = (int)std::max(1u, std::thread::hardware_concurrency());
  std::string seed_flag;
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--out", out_path, "output path (stdout when absent)");
  app.add_option("--threads", threads, "worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed_flag, "RNG seed for sampled grids");
  app.add_option("--format", format, "json | csv (default: from --out extension)")
      ->check(CLI::IsMember({"json", "csv"}));

  auto cmds = commands();
  struct Bound {
    CLI::App* sub;
    std::vector<std::pair<std::string, CLI::Option*>> opts;
  };
  std::vector<Bound> bound;
  std::vector<std::unique_ptr<std::string>> sinks;
  for (const auto& c : cmds) {
    Bound b{app.add_subcommand(c.name, c.help), {}};
    for (const auto& k : c.keys) {
      if (k.name == "seed") continue;
      sinks.push_back(std::make_unique<std::string>());
      std::string flag = "--" + k.name;
      std::replace(flag.begin(), flag.end(), '_', '-');
      std::string def = k.value.empty() ? "empty" : k.value;
      std::string help = k.help.empty() ? "default " + def : k.help + " (default " + def + ")";
      b.opts.emplace_back(k.name, b.sub->add_option(flag, *sinks.back(), help));
    }
    bound.push_back(std::move(b));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      if (!bound[i].sub->parsed()) continue;
      Config cfg(cmds[i].keys);
      std::string file_threads;
      if (!config_path.empty()) load_config_file(config_path, cfg, file_threads);
      if (!file_threads.empty() && !app.get_option("--threads")->count()) {
        long t = Config({{"threads", file_threads, ""}}).integer("threads");
        if (t < 1) throw InvalidInput("threads must be positive");
        threads = (int)t;
      }
      for (const auto& [name, opt] : bound[i].opts)
        if (opt->count()) cfg.set(name, opt->as<std::string>());
      if (!seed_flag.empty()) {
        if (!cfg.has("seed")) throw InvalidInput(cmds[i].name + " takes no seed");
        cfg.set("seed", seed_flag);
      }
      Rows rows = cmds[i].fn(Run{cfg, threads});

      if (format.empty())
        format = out_path.size() >= 4 && out_path.compare(out_path.size() - 4, 4, ".csv") == 0 ? "csv" : "json";
      std::string text;
      if (format == "csv") {
        text = render_csv(rows);
      } else {
        json env;
        env["command"] = cmds[i].name;
        env["config"] = cfg.to_json();
        env["started"] = started();
        env["rows"] = rows;
        text = env.dump(2) + "\n";
      }
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw InvalidInput("cannot write " + out_path);
        out << text;
      }
    }
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource error: out of memory\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
