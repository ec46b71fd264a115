#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include "shellconv/harmonics.hpp"

namespace shellconv {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_int factorial(int n) {
  static std::mutex mutex;
  static std::vector<cpp_int> table{cpp_int(1)};
  std::lock_guard lock(mutex);
  while (static_cast<int>(table.size()) <= n) {
    table.push_back(table.back() * static_cast<long>(table.size()));
  }
  return table[static_cast<std::size_t>(n)];
}

}  // namespace

double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (m1 + m2 + m3 != 0) return 0.0;
  if (j1 < 0 || j2 < 0 || j3 < 0) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;

  // Racah: sum over k of (-1)^k / [k! (j3-j2+k+m1)! (j3-j1+k-m2)! (j1+j2-j3-k)! (j1-k-m1)! (j2-k+m2)!]
  const int k_min = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int k_max = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  cpp_rational sum(0);
  for (int k = k_min; k <= k_max; ++k) {
    const cpp_int den = factorial(k) * factorial(j3 - j2 + k + m1) * factorial(j3 - j1 + k - m2) *
                        factorial(j1 + j2 - j3 - k) * factorial(j1 - k - m1) * factorial(j2 - k + m2);
    cpp_rational term(cpp_int(1), den);
    if (k % 2) term = -term;
    sum += term;
  }
  if (sum == 0) return 0.0;

  // Square of the symbol is rational: triangle coefficient times the six m-factorials times sum^2.
  const cpp_rational triangle(factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) * factorial(-j1 + j2 + j3),
                              factorial(j1 + j2 + j3 + 1));
  const cpp_int mfact = factorial(j1 + m1) * factorial(j1 - m1) * factorial(j2 + m2) * factorial(j2 - m2) *
                        factorial(j3 + m3) * factorial(j3 - m3);
  const cpp_rational squared = triangle * cpp_rational(mfact) * sum * sum;

  const int phase_exp = j1 - j2 - m3;
  const bool negative = ((phase_exp % 2 != 0) != (sum < 0));
  const double magnitude = std::sqrt(squared.convert_to<double>());
  return negative ? -magnitude : magnitude;
}

bool gaunt_allowed(HarmonicIndex a, HarmonicIndex b, HarmonicIndex c) {
  if (!a.valid() || !b.valid() || !c.valid()) return false;
  if (a.m + b.m + c.m != 0) return false;
  if (c.l < std::abs(a.l - b.l) || c.l > a.l + b.l) return false;
  return (a.l + b.l + c.l) % 2 == 0;
}

double gaunt(HarmonicIndex a, HarmonicIndex b, HarmonicIndex c) {
  if (!gaunt_allowed(a, b, c)) return 0.0;
  const double pref =
      std::sqrt((2.0 * a.l + 1.0) * (2.0 * b.l + 1.0) * (2.0 * c.l + 1.0) / (4.0 * std::numbers::pi));
  return pref * wigner_3j(a.l, b.l, c.l, 0, 0, 0) * wigner_3j(a.l, b.l, c.l, a.m, b.m, c.m);
}

}  // namespace shellconv
