#include "d2dstore/codes.hpp"

#include <numeric>
#include <stdexcept>

namespace d2d {

Fraction::Fraction(long long numerator, long long denominator)
    : num(numerator), den(denominator) {
  if (den == 0) {
    throw std::invalid_argument("Fraction: zero denominator");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

void CodeParams::validate() const {
  if (reconstruction_degree < 1) {
    throw std::invalid_argument("CodeParams: reconstruction degree k must be at least 1");
  }
  if (repair_degree < reconstruction_degree) {
    throw std::invalid_argument("CodeParams: repair degree d must satisfy k <= d");
  }
  if (repair_degree > storage_nodes - 1) {
    throw std::invalid_argument("CodeParams: repair degree d must satisfy d <= n - 1");
  }
}

namespace {

CodePoint make_point(CodeFlavor flavor, double file_size, Fraction alpha_frac,
                     Fraction gamma_frac) {
  CodePoint point;
  point.flavor = flavor;
  point.storage_frac = alpha_frac;
  point.repair_frac = gamma_frac;
  point.alpha = file_size * alpha_frac.value();
  point.gamma = file_size * gamma_frac.value();
  return point;
}

void check_file_size(double file_size) {
  if (!(file_size > 0.0)) {
    throw std::invalid_argument("code point: file size B must be positive");
  }
}

}  // namespace

CodePoint mbr_point(double file_size, const CodeParams& code) {
  code.validate();
  check_file_size(file_size);
  const long long k = code.reconstruction_degree;
  const long long d = code.repair_degree;
  const Fraction frac(2 * d, k * (2 * d - k + 1));
  return make_point(CodeFlavor::mbr, file_size, frac, frac);
}

CodePoint msr_point(double file_size, const CodeParams& code) {
  code.validate();
  check_file_size(file_size);
  const long long k = code.reconstruction_degree;
  const long long d = code.repair_degree;
  return make_point(CodeFlavor::msr, file_size, Fraction(1, k),
                    Fraction(d, k * (d - k + 1)));
}

std::vector<std::string> validate_against_population(const CodeParams& code,
                                                     double expected_nodes) {
  std::vector<std::string> warnings;
  if (static_cast<double>(code.storage_nodes) > expected_nodes / 10.0) {
    warnings.push_back(
        "storage node count n = " + std::to_string(code.storage_nodes) +
        " is not small against the expected population N = " + std::to_string(expected_nodes) +
        "; the n << N assumption behind the closed-form costs is strained");
  }
  return warnings;
}

}  // namespace d2d
