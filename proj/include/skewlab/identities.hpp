#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "skewlab/primes.hpp"

namespace skewlab {

// Element of the Q-vector space spanned by {log p}: prime -> coefficient.
// Identities among sums of logarithms are compared here exactly.
class LogVector {
 public:
  LogVector() = default;
  static LogVector log_of(u64 n);

  LogVector& add(const LogVector& o, long long scale = 1);
  LogVector& operator+=(const LogVector& o) { return add(o, 1); }
  LogVector& operator-=(const LogVector& o) { return add(o, -1); }
  friend LogVector operator+(LogVector a, const LogVector& b) { return a += b; }
  friend LogVector operator-(LogVector a, const LogVector& b) { return a -= b; }
  friend bool operator==(const LogVector& a, const LogVector& b) { return a.c_ == b.c_; }

  bool is_zero() const { return c_.empty(); }
  double value() const;
  // Sum of |coefficient| * log p; zero exactly when the vector is zero.
  double magnitude() const;
  std::string to_string() const;

 private:
  std::map<u64, long long> c_;  // no zero entries
};

// Lambda(n) as a log vector.
LogVector lambda_vec(u64 n);

struct VaughanTerms {
  LogVector term1, term2, term3, total;
};
VaughanTerms vaughan_decompose(u64 n, u64 z);

struct LinnikResult {
  mpq_class lhs, rhs;
};
// Both sides for a single n (memoized table inside LinnikTable for sweeps).
LinnikResult linnik_check(u64 n, u64 z);

class LinnikTable {
 public:
  LinnikTable(u64 N, u64 z);
  LinnikResult at(u64 n) const;

 private:
  u64 N_, z_;
  std::vector<std::vector<long long>> dstar_;  // dstar_[k][n]
};

// Worst |defect| (as log magnitude) over n <= N of the Heath-Brown
// coefficient comparison. Exact: returns 0 iff every coefficient matches.
struct HeathBrownReport {
  double worst_defect = 0.0;
  u64 worst_n = 0;
  u64 checked = 0;
};
HeathBrownReport heathbrown_coeff_check(int k, u64 z, u64 N);

struct BuchstabResult {
  long long lhs = 0, rhs = 0;
};
BuchstabResult buchstab_check(u64 lo, u64 hi, u64 w, u64 z);

struct Partition {
  std::vector<int> I, J, K;  // 1-based indices
};
Partition combi_partition(const std::vector<double>& a, double eta);
bool partition_valid(const std::vector<double>& a, double eta, const Partition& part);

}  // namespace skewlab
