#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "skewlab/primes.hpp"

namespace skewlab {

// Dirichlet characters mod q. The unit group is split by CRT into cyclic
// components with discrete-log tables; a character is a vector of component
// exponents and its values are exact powers of a primitive L-th root of unity
// (L the group exponent). Value tables are produced on demand.
class CharacterTable {
 public:
  static constexpr u64 kMaxModulus = 1000000;

  explicit CharacterTable(u64 q);

  u64 modulus() const { return q_; }
  u64 size() const { return count_; }  // phi(q)
  u64 exponent() const { return L_; }

  // Exponent k with chi_j(a) = e(k / L), or -1 when gcd(a, q) > 1.
  long long value_exponent(u64 j, u64 a) const;
  std::complex<double> value(u64 j, u64 a) const;
  // Full table over a in [0, q).
  std::vector<long long> exponent_table(u64 j) const;
  std::vector<std::complex<double>> value_table(u64 j) const;

  bool is_principal(u64 j) const;
  u64 conductor(u64 j) const;
  bool is_primitive(u64 j) const { return conductor(j) == q_; }
  // Order of chi_j in the character group.
  u64 order(u64 j) const;
  // Index of the conjugate character.
  u64 conjugate(u64 j) const;

 private:
  struct Component {
    u64 p = 0;         // prime
    int e = 0;         // exponent
    u64 modulus = 0;   // p^e
    u64 order = 0;     // size of the cyclic factor
    bool minus_one = false;  // the <-1> factor of (Z/2^e)^*
    std::vector<std::int32_t> dlog;  // residue mod p^e -> log, -1 for non-units
  };
  std::vector<long long> digits(u64 j) const;

  u64 q_;
  u64 count_ = 1;
  u64 L_ = 1;
  std::vector<Component> comps_;
};

// Throws ResourceError beyond kMaxModulus.
CharacterTable build_characters(u64 q);

// sum_{b mod e} chi(b) e(b x / e) for a primitive character.
std::complex<double> gauss_sum(const CharacterTable& table, u64 j, long long x);
// Gauss sums for all x in [0, e) at once (one DFT).
std::vector<std::complex<double>> gauss_sums_all(const CharacterTable& table, u64 j);

// Max |sum_a chi(a) conj(psi(a)) - phi(q) [chi == psi]| over all pairs.
double orthogonality_defect(const CharacterTable& table);

// sum_{v=1}^{r} | sum_{a<q, a = v (r)} chi(a) |
double progression_char_stat(const CharacterTable& table, u64 r, u64 j);

// sup over beta, evaluated on the grid j/(oversample H') with golden-section
// refinement around the best grid point. Zero means beta = 0 only.
struct BetaPolicy {
  enum class Kind { Zero, Grid };
  Kind kind = Kind::Grid;
  int oversample = 4;
  bool refine = true;
  std::string name() const;
  static BetaPolicy zero() { return {Kind::Zero, 1, false}; }
};

// sup_beta | sum_i c_i e(i beta) | for coefficients c_0..c_{n-1}.
double sup_over_beta(const std::vector<std::complex<double>>& c, int degree_hint,
                     const BetaPolicy& policy);

// sum_{z<q} sup_beta | sum_{a<q, a in [z, z+H')} chi(a) e(a beta) |
// (windows hold H' residues)
double windowed_twisted_stat(const CharacterTable& table, u64 Hp, u64 j,
                             const BetaPolicy& policy = {});

struct Statistic {
  double value = 0.0;
  double trivial_scale = 0.0;
  double ratio() const { return trivial_scale > 0 ? value / trivial_scale : 0.0; }
};

// sum_{y<x} sum_{v=1}^{r} | sum_{p in [y,y+H], p_q = v (r)} log p - H/r |.
// H == x gives the single-window form over p in [0, H] with trivial scale H;
// otherwise the trivial scale is H x.
Statistic huxley_stat_progressions(u64 x, u64 H, u64 q, u64 r, const PrimeSource& primes);

// Windowed statistic with sup over (beta, v); H == x gives the single-window
// form with trivial scale H H'.
Statistic huxley_stat_windows(u64 x, u64 H, u64 q, u64 r, u64 Hp, const PrimeSource& primes,
                              const BetaPolicy& policy = {});

// sum_{a in [z, z+H'), a < q, (a,q) = 1, a = v (r)} e(a beta)
std::complex<double> reduced_residue_window_sum(u64 q, u64 r, u64 v, u64 z, u64 Hp, double beta);

struct ProgressionGap {
  double gap = 0.0;
  double normalizer = 0.0;
};
ProgressionGap residue_progression_gap(u64 q, u64 r, u64 d);

struct WindowPair {
  std::complex<double> restricted;
  std::complex<double> comparison;
};
// Both sums of the short-interval comparison for reduced residues.
WindowPair twisted_residue_window(u64 q, u64 d, u64 r, u64 a, u64 y, u64 H, double beta,
                                  double tau);

// #{n in [y, y+H] : (n, q') = 1}
u64 window_coprime_count(u64 qprime, u64 y, u64 H);

}  // namespace skewlab
