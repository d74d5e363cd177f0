#include "skewlab/identities.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "skewlab/errors.hpp"

namespace skewlab {

LogVector LogVector::log_of(u64 n) {
  LogVector v;
  if (n == 0) throw InvalidInput("log of 0");
  for (auto& [p, e] : factorize(n)) v.c_[p] = e;
  return v;
}

LogVector& LogVector::add(const LogVector& o, long long scale) {
  if (scale == 0) return *this;
  for (auto& [p, c] : o.c_) {
    long long& slot = c_[p];
    slot += scale * c;
    if (slot == 0) c_.erase(p);
  }
  return *this;
}

double LogVector::value() const {
  double acc = 0.0;
  for (auto& [p, c] : c_) acc += (double)c * std::log((double)p);
  return acc;
}

double LogVector::magnitude() const {
  double acc = 0.0;
  for (auto& [p, c] : c_) acc += std::abs((double)c) * std::log((double)p);
  return acc;
}

std::string LogVector::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto& [p, c] : c_) {
    if (!first) out << " + ";
    out << c << "*log(" << p << ")";
    first = false;
  }
  return out.str();
}

LogVector lambda_vec(u64 n) {
  u64 p = prime_power_base(n);
  return p ? LogVector::log_of(p) : LogVector();
}

VaughanTerms vaughan_decompose(u64 n, u64 z) {
  if (z < 1 || n <= z) throw PreconditionError("Vaughan's identity needs n > z >= 1");
  VaughanTerms t;
  LogVector logn = LogVector::log_of(n);
  auto divs = divisors(n);
  for (u64 d : divs) {
    if (d > z) break;
    int mu = mobius(d);
    if (mu) t.term1.add(logn - LogVector::log_of(d), mu);
  }
  // pairs (d, c) with dc | n: d | n, c | n/d
  for (u64 d : divs) {
    int mu = mobius(d);
    if (!mu) continue;
    for (u64 c : divisors(n / d)) {
      LogVector lam = lambda_vec(c);
      if (lam.is_zero()) continue;
      if (d <= z && c <= z) t.term2.add(lam, -mu);
      if (d > z && c > z) t.term3.add(lam, mu);
    }
  }
  t.total = t.term1 + t.term2 + t.term3;
  return t;
}

LinnikTable::LinnikTable(u64 N, u64 z) : N_(N), z_(z) {
  if (N < 1) throw InvalidInput("Linnik table needs N >= 1");
  // rough[n]: n > 1 with every prime factor > z
  auto spf = smallest_prime_factor_table(N);
  std::vector<char> rough(N + 1, 0);
  for (u64 n = 2; n <= N; ++n) rough[n] = spf[n] > z;
  dstar_.push_back(std::vector<long long>(N + 1, 0));
  dstar_[0][1] = 1;
  for (int k = 1; (1ULL << k) <= N; ++k) {
    std::vector<long long> next(N + 1, 0);
    const auto& prev = dstar_.back();
    for (u64 m = 2; m <= N; ++m) {
      if (!rough[m]) continue;
      for (u64 a = 1; a * m <= N; ++a)
        if (prev[a]) next[a * m] += prev[a];
    }
    dstar_.push_back(std::move(next));
  }
}

LinnikResult LinnikTable::at(u64 n) const {
  if (n < 2 || n > N_) throw InvalidInput("Linnik check needs 2 <= n <= N");
  LinnikResult r;
  r.lhs = 0;
  for (std::size_t k = 1; k < dstar_.size(); ++k) {
    long long c = dstar_[k][n];
    if (!c) continue;
    mpq_class term((long)c, (long)k);
    term.canonicalize();
    // -(-1)^k / k * d*_k
    if (k % 2)
      r.lhs += term;
    else
      r.lhs -= term;
  }
  auto f = factorize(n);
  r.rhs = 0;
  if (f.size() == 1 && f[0].first > z_) {
    r.rhs = mpq_class(1, f[0].second);
    r.rhs.canonicalize();
  }
  return r;
}

LinnikResult linnik_check(u64 n, u64 z) {
  if (n < 2) throw InvalidInput("Linnik check needs n >= 2");
  if (z < 1) throw InvalidInput("Linnik check needs z >= 1");
  return LinnikTable(n, z).at(n);
}

HeathBrownReport heathbrown_coeff_check(int k, u64 z, u64 N) {
  if (k < 1) throw PreconditionError("Heath-Brown identity needs k >= 1");
  if (std::pow((double)z, k) < (double)N) throw PreconditionError("Heath-Brown check needs z^k >= N");
  std::vector<long long> zeta(N + 1, 1), M(N + 1, 0);
  zeta[0] = 0;
  auto mu = mobius_table(N);
  for (u64 n = 1; n <= std::min(z, N); ++n) M[n] = mu[n];
  auto conv = [N](const std::vector<long long>& a, const std::vector<long long>& b) {
    std::vector<long long> c(N + 1, 0);
    for (u64 i = 1; i <= N; ++i) {
      if (!a[i]) continue;
      for (u64 j = 1; i * j <= N; ++j) c[i * j] += a[i] * b[j];
    }
    return c;
  };
  // G = sum_j (-1)^j C(k,j) zeta^{j-1} M^j
  std::vector<long long> G(N + 1, 0);
  std::vector<long long> zpow(N + 1, 0), mpow = M;
  zpow[1] = 1;
  long long binom = 1;
  for (int j = 1; j <= k; ++j) {
    binom = binom * (k - j + 1) / j;
    auto term = conv(zpow, mpow);
    for (u64 n = 1; n <= N; ++n) G[n] += (j % 2 ? -binom : binom) * term[n];
    zpow = conv(zpow, zeta);
    mpow = conv(mpow, M);
  }
  HeathBrownReport rep;
  for (u64 n = 1; n <= N; ++n) {
    // coefficient of G * zeta' at n is -sum_{ab=n} G(a) log b
    LogVector coef;
    for (u64 a : divisors(n))
      if (G[a]) coef.add(LogVector::log_of(n / a), -G[a]);
    LogVector defect = lambda_vec(n) - coef;
    double mag = defect.magnitude();
    if (mag > rep.worst_defect) {
      rep.worst_defect = mag;
      rep.worst_n = n;
    }
    ++rep.checked;
  }
  return rep;
}

BuchstabResult buchstab_check(u64 lo, u64 hi, u64 w, u64 z) {
  if (w < 2 || w > z) throw PreconditionError("Buchstab check needs 2 <= w <= z");
  if (lo < 1 || lo > hi) throw InvalidInput("Buchstab window must satisfy 1 <= lo <= hi");
  auto spf = smallest_prime_factor_table(hi);
  auto rough = [&](u64 n, u64 bound) { return n == 1 || spf[n] >= bound; };
  BuchstabResult r;
  for (u64 n = lo; n <= hi; ++n) r.lhs += rough(n, z);
  long long swz = 0;
  for (u64 n = lo; n <= hi; ++n) swz += rough(n, w);
  long long sub = 0;
  for (u64 p = w; p < z && p <= hi; ++p) {
    if (spf[p] != p) continue;
    // members of A divisible by p whose cofactor has no prime below p
    for (u64 m = (lo + p - 1) / p; m * p <= hi; ++m) sub += rough(m, p);
  }
  r.rhs = swz - sub;
  return r;
}

bool partition_valid(const std::vector<double>& a, double eta, const Partition& part) {
  if (part.I.empty() || part.J.empty() || part.K.empty()) return false;
  std::vector<int> seen(a.size() + 1, 0);
  auto total = [&](const std::vector<int>& s) {
    double acc = 0;
    for (int i : s) {
      if (i < 1 || i > (int)a.size()) return std::nan("");
      ++seen[i];
      acc += a[i - 1];
    }
    return acc;
  };
  double si = total(part.I), sj = total(part.J), sk = total(part.K);
  for (std::size_t i = 1; i <= a.size(); ++i)
    if (seen[i] != 1) return false;
  return std::abs(si - sj) <= 1.0 / 3 - eta && std::abs(sk) <= 5.0 / 9 - 2 * eta;
}

Partition combi_partition(const std::vector<double>& a, double eta) {
  std::size_t k = a.size();
  if (k < 4) throw PreconditionError("partition lemma needs k >= 4");
  if (!(eta > 0 && eta < 1e-5)) throw PreconditionError("eta must lie in (0, 1e-5)");
  double sum = 0;
  for (double v : a) sum += v;
  if (std::abs(sum - 1.0) > 1e-12) throw PreconditionError("entries must sum to 1");
  for (std::size_t i = 0; i < k; ++i) {
    double cap = (i + 1 < k) ? 1.0 / 3 - 100 * eta : 1.0 / 3 + 100 * eta;
    if (!(a[i] > 0 && a[i] < cap))
      throw PreconditionError("entry " + std::to_string(i + 1) + " outside the allowed range");
  }
  if (k > 24) throw ResourceError("exhaustive partition search limited to k <= 24");

  // colours: 0 = K, 1 = I, 2 = J
  std::vector<int> colour(k, 0);
  double sums[3] = {0, 0, 0};
  int counts[3] = {0, 0, 0};
  const double kcap = 5.0 / 9 - 2 * eta, diffcap = 1.0 / 3 - eta;
  std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
    if (i == k)
      return counts[0] && counts[1] && counts[2] && std::abs(sums[1] - sums[2]) <= diffcap &&
             sums[0] <= kcap;
    for (int c = 0; c < 3; ++c) {
      if (c == 0 && sums[0] + a[i] > kcap) continue;
      colour[i] = c;
      sums[c] += a[i];
      ++counts[c];
      if (dfs(i + 1)) return true;
      sums[c] -= a[i];
      --counts[c];
    }
    return false;
  };
  if (!dfs(0)) throw IntegrityError("no valid partition found on admissible input");
  Partition part;
  for (std::size_t i = 0; i < k; ++i) {
    auto& dst = colour[i] == 0 ? part.K : (colour[i] == 1 ? part.I : part.J);
    dst.push_back((int)i + 1);
  }
  if (!partition_valid(a, eta, part)) throw IntegrityError("search returned an invalid partition");
  return part;
}

}  // namespace skewlab
