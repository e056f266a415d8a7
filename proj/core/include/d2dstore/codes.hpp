#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace d2d {

/// Exact rational, kept normalized (gcd 1, positive denominator). The code
/// points are ratios of small integers and tests compare them exactly.
struct Fraction {
  long long num = 0;
  long long den = 1;

  Fraction() = default;
  Fraction(long long numerator, long long denominator);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  Fraction times(long long factor) const { return Fraction(num * factor, den); }

  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Regenerating-code parameters. Any k of the n storage nodes reconstruct
/// the file; any d surviving storage nodes regenerate a lost block.
struct CodeParams {
  int storage_nodes = 0;          ///< n
  int reconstruction_degree = 0;  ///< k (k = 1 is the replication degeneracy)
  int repair_degree = 0;          ///< d

  /// Throws std::invalid_argument unless 1 <= k <= d <= n - 1.
  void validate() const;
};

enum class CodeFlavor { mbr, msr };

/// An operating point of the storage/repair-bandwidth tradeoff: alpha is the
/// data stored per node and gamma the traffic per block repair, both in units
/// of the file size B. The exact fractions are alpha/B and gamma/B.
struct CodePoint {
  CodeFlavor flavor = CodeFlavor::mbr;
  Fraction storage_frac;  ///< alpha / B
  Fraction repair_frac;   ///< gamma / B
  double alpha = 0.0;
  double gamma = 0.0;
};

/// Minimum-bandwidth point: alpha = gamma = 2 B d / (2kd - k^2 + k).
CodePoint mbr_point(double file_size, const CodeParams& code);

/// Minimum-storage point: alpha = B / k, gamma = B d / (k (d - k + 1)).
/// With d = k this reduces to classical MDS repair (gamma = B).
CodePoint msr_point(double file_size, const CodeParams& code);

/// Non-fatal sanity check of the n << N modelling assumption; returns a
/// warning when n > N / 10. Costs remain computable either way.
std::vector<std::string> validate_against_population(const CodeParams& code,
                                                     double expected_nodes);

}  // namespace d2d
