#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skewlab/bigreal.hpp"
#include "skewlab/diophantine.hpp"
#include "skewlab/primes.hpp"

namespace skewlab {

// A set A of positive integers together with bad sets B_N inside A cap [1, N].
//   squares  A = {m^2 : m >= 1}, B_N empty
//   primes   B_N = {p <= N : p + a prime for some 1 <= a <= c(N)},
//            c(N) = ceil(log log N) unless fixed
//   custom   explicit members and one bad list used for every N
class AlmostSparseSet {
 public:
  enum class Kind { Squares, Primes, Custom };

  static AlmostSparseSet squares();
  static AlmostSparseSet primes(std::optional<u64> gap_filter = std::nullopt);
  static AlmostSparseSet custom(std::vector<u64> members, std::vector<u64> bad = {});

  Kind kind() const { return kind_; }
  std::string name() const;

  bool contains(u64 n) const;
  bool in_bad_set(u64 N, u64 n) const;
  u64 gap_filter(u64 N) const;
  // (A cap [lo, hi]) \ B_N in increasing order. ResourceError past 10^8
  // for the primes descriptor.
  std::vector<u64> members(u64 lo, u64 hi, u64 N) const;

  // Squares: gaps inside A cap [lo, hi] strictly increase. Primes: the gaps
  // left after removing B_N are all > c(N). Custom: always true.
  bool check_invariants(u64 lo, u64 hi, u64 N) const;

 private:
  Kind kind_ = Kind::Squares;
  std::optional<u64> fixed_gap_;
  std::vector<u64> list_, bad_;
  mutable std::shared_ptr<PrimeSource> sieve_;
  const PrimeSource& sieve(u64 hi) const;
};

// 1 / (min gap of (A cap [0, n]) \ B_n); InvalidInput with fewer than two points.
double eps_n(const AlmostSparseSet& A, u64 n);

struct StageOptions {
  bool include_h = false;   // add the tent functions h_n
  bool mu_twist = false;    // targets (7 + mu(sqrt w)) / 4 on squares <= M_n
  long first_k = 2;
  u64 feasibility_cap = 1000000000;  // largest q_{k_n} we solve at
  double h_tolerance = 1e-3;  // 2 q_{k_n} / q_{l_n + 1} target when picking l_n
  int threads = 1;
};

struct Stage {
  int n = 0;
  long k = 0;
  long l = -1;  // -1 when h is off
  BigInt q, p, q_next;  // q_k, p_k, q_{k+1}
  BigInt p_inverse;     // p_k^{-1} mod q_k
  bool feasible = false;
  bool solved = false;
  std::vector<u64> window;      // w_0 < ... < w_t
  std::vector<double> lipschitz;  // L_{n, w_i}
  std::vector<double> goal;       // value f_n(w_i alpha) was set to
};

// Inductive piecewise-linear construction. Stage n uses the convergent
// p_{k_n}/q_{k_n}; k_1 = first_k and k_{n+1} is the least even integer above
// k_n^2 (even indices keep alpha above the convergent). Stages are feasible
// while q_{k_n} <= feasibility_cap and k_n + 1 lies in the expansion.
class StageConstruction {
 public:
  StageConstruction(ContinuedFraction cf, AlmostSparseSet A, StageOptions opts = {});

  const ContinuedFraction& cf() const { return cf_; }
  const AlmostSparseSet& set() const { return A_; }
  const StageOptions& options() const { return opts_; }
  mpfr_prec_t precision() const { return prec_; }

  // Known stages (feasible ones first, then at most one that only bounds tails).
  int stage_count() const { return (int)stages_.size(); }
  int feasible_stages() const;
  int solved_stages() const;
  const Stage& stage(int n) const;  // 1-based
  Stage& stage_mut(int n);

  // Interpolated L_{n, s} for any s (taken mod q_{k_n}).
  double lipschitz(int n, const BigInt& s) const;
  double lipschitz(int n, u64 s) const { return lipschitz(n, BigInt(std::to_string(s))); }

  // f_n and h_n at a point of the circle (any real, reduced mod 1).
  double f(int n, const BigReal& x) const;
  double h(int n, const BigReal& x) const;
  // f_n + h_n
  double stage_value(int n, const BigReal& x) const;

  // {w alpha} at the working precision.
  BigReal orbit_point(const BigInt& w) const;
  BigReal orbit_point(u64 w) const { return orbit_point(BigInt(std::to_string(w))); }

  // Value the stage aims for at window point w, before subtracting r_{w,n}.
  double stage_goal(int n, u64 w) const;

  // S_w(g_trunc)(0) = sum over solved stages of (f_n + h_n)(w alpha).
  double birkhoff_at_zero(u64 w) const;
  double birkhoff_at_zero(const BigInt& w) const;

 private:
  void plan();
  ContinuedFraction cf_;
  AlmostSparseSet A_;
  StageOptions opts_;
  mpfr_prec_t prec_ = 256;
  std::vector<Stage> stages_;
};

// Evaluable handles over the stage tables.
struct StageFunction {
  const StageConstruction* owner = nullptr;
  int n = 0;
  bool tent = false;
  double operator()(const BigReal& x) const;
  double operator()(double x) const;
};
StageFunction build_fn(const StageConstruction& sc, int n);  // StateError if unsolved
StageFunction build_hn(const StageConstruction& sc, int n);  // PreconditionError if h is off

// Window points, targets and L values for stage n; stages below n must be
// solved. ConstructionError when the window is empty.
void solve_stage_targets(StageConstruction& sc, int n);
// Solves every feasible stage in order.
void solve_all(StageConstruction& sc);

struct StageCheck {
  bool ok = true;
  double min_ratio = 0.0;  // min L / q_{k+1} over window points
  double max_ratio = 0.0;  // max L / q_{k+1}
  double max_step = 0.0;   // max |L_{s+1} - L_s|
  double step_bound = 0.0;
  double max_goal_defect = 0.0;  // |f_n(w alpha) + r_{w,n} - goal| mod 1
  double max_endpoint_defect = 0.0;  // iterated interpolation vs stored L, relative
  long decreasing_pairs = 0;  // window neighbours with L_{w_i} > L_{w_{i+1}}
  std::vector<std::string> failures;
};
StageCheck check_stage(const StageConstruction& sc, int n);

// sum_{n <= upto} (F_n(x + alpha) - F_n(x)), F_n = f_n (+ h_n).
double g_truncated(const StageConstruction& sc, const BigReal& x, int upto);
double g_truncated(const StageConstruction& sc, double x, int upto);

// Terms of the continuity series for each stage: max L / (q q_{k+1}) and
// max |L_{s+1} - L_s| / q_{k+1}, plus a bound on everything past the last
// solved stage.
struct ContinuityCertificate {
  std::vector<double> value_terms;
  std::vector<double> step_terms;
  double tail_bound = 0.0;
  bool geometric = false;  // each combined term at most half the previous
};
ContinuityCertificate continuity_certificate(const StageConstruction& sc);

struct PhiReport {
  int n = 0;
  double eps = 0.0;
  double target = 0.0;   // 0 for even n, 1/2 for odd n (mu twist: per point)
  double tail = 0.0;     // certified bound on the unsolved stages
  std::vector<u64> points;
  std::vector<double> distance;  // circle distance of S_w(g)(0) to its target
  double max_distance = 0.0;
  bool pass = false;
};
// IncompleteError when the tail needs a stage past the expansion depth.
PhiReport verify_phi_lemma(const StageConstruction& sc, int n, double eps);

// (1/N) sum_{m <= N} e(S_{m^2}(g)(0)) mu(m) with N = floor(sqrt(q_{k_n}/2)).
std::complex<double> mu_twist_average(const StageConstruction& sc, int n);
std::complex<double> mu_twist_average(const StageConstruction& sc, u64 N);

// Mean of sin^2(pi S_w(g)(0)) over the stage-n window; a bump that is 0 at
// y = 0 and 1 at y = 1/2.
double bump_window_average(const StageConstruction& sc, int n);

// For the h variant: S_{K q_l}(g) on an x grid, K = max(1, floor(q_{l+1} / (2 q_l))),
// and its mean circle distance to the nearest constant.
struct SpreadReport {
  BigInt time;
  std::vector<double> values;  // mod 1
  double distance_to_constant = 0.0;
};
SpreadReport constant_distance(const StageConstruction& sc, int n, int grid = 256);

// JSON dump of a stage {n, k_n, l_n, window, targets, phi_report} and replay.
std::string stage_dump(const StageConstruction& sc, int n, const PhiReport* report = nullptr);
void load_stage_dump(StageConstruction& sc, const std::string& json);

}  // namespace skewlab
