#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shellconv/harmonics.hpp"

namespace shellconv {

/// Raised when the critical degree is not unique or a supposedly stable mode is neutral.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nondimensional control parameters. `lambda` is sqrt(R).
struct PhysicalParams {
  double prandtl = 1.0;
  double lambda = 0.0;
  double r = 1.0;       ///< a/h
  double sigma0 = 0.0;  ///< horizontal friction
  double sigma1 = 0.0;  ///< vertical friction

  [[nodiscard]] bool has_friction() const { return sigma0 != 0.0 || sigma1 != 0.0; }

  /// Throws std::invalid_argument unless Pr > 0, r > 0, lambda >= 0 and sigmas >= 0.
  void validate() const;
};

enum class Branch { toroidal, thermal, plus, minus };

[[nodiscard]] std::string to_string(Branch b);
[[nodiscard]] Branch parse_branch(const std::string& s);

/// (branch, l, m, n) label of one eigenmode of the linearized operator.
struct ModeIndex {
  Branch branch = Branch::plus;
  int l = 1;
  int m = 0;
  int n = 1;

  [[nodiscard]] bool valid() const;
  /// Throws std::domain_error describing the violated branch rule.
  void require_valid() const;

  /// "plus:2:-1:2" style key, stable across runs.
  [[nodiscard]] std::string key() const;
  static ModeIndex parse(const std::string& key);

  friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

struct EigenPair {
  ModeIndex index;
  double beta = 0.0;
  double alpha_sq = 0.0;
  double gamma_sq = 0.0;
  double b = 0.0;  ///< temperature amplitude, plus/minus branches only
};

/// l(l+1)/r^2
[[nodiscard]] double alpha_sq(int l, double r);
/// n^2 pi^2 + alpha_l^2
[[nodiscard]] double gamma_sq(int l, int n, double r);

/// Coefficients of beta^2 + D beta + Pr E = 0 for the (l, n) poloidal pair.
/// Without friction D = (1+Pr) gamma^2 and E = gamma^4 - lambda^2 alpha^2 / gamma^2.
struct PoloidalQuadratic {
  double d = 0.0;
  double e = 0.0;
};
[[nodiscard]] PoloidalQuadratic poloidal_quadratic(const PhysicalParams& p, int l, int n);

/// (beta_plus, beta_minus) for l, n >= 1. The smaller root is formed directly
/// and the larger from the product Pr*E, so beta_plus is exact to rounding at
/// the neutral curve.
[[nodiscard]] std::pair<double, double> poloidal_betas(const PhysicalParams& p, int l, int n);

/// lambda*alpha^2 / (beta + gamma^2); the same form is used with friction.
[[nodiscard]] double temperature_amplitude(const PhysicalParams& p, int l, int n, double beta);

EigenPair eigenvalue(const PhysicalParams& params, const ModeIndex& idx);

/// Every mode with 1 <= l <= l_max and 1 <= n <= n_max (all m), plus toroidal
/// modes for 1 <= l <= l_max and thermal modes for n <= n_max.
std::vector<EigenPair> spectrum_scan(const PhysicalParams& params, int l_max, int n_max);

// --- Critical parameters -----------------------------------------------------

/// lambda at which beta_plus(l, n) vanishes: sqrt(gamma^2 (gamma^4 + s1 a^2 + s0 n^2 pi^2) / alpha^2).
[[nodiscard]] double neutral_lambda(const PhysicalParams& p, int l, int n = 1);

struct CriticalPoint {
  double lambda_c = 0.0;
  int l_c = 0;
  bool degenerate = false;
  int tied_l = 0;  ///< the neighbouring degree that ties l_c, when degenerate
  int scanned_up_to = 0;

  [[nodiscard]] double rayleigh() const { return lambda_c * lambda_c; }
};

/// Default scan bound 10*ceil(r) + 20; the scan is extended until the objective
/// is increasing at the last scanned degree.
[[nodiscard]] int default_scan_limit(double r);

/// Minimizes neutral_lambda over l >= 1 with n = 1. params.lambda is ignored.
CriticalPoint critical_rayleigh(const PhysicalParams& params, int l_scan = -1);

/// Principle of exchange of stability at params.lambda.
struct PesReport {
  double lambda = 0.0;
  CriticalPoint critical;
  int l_max = 0;
  int n_max = 0;
  int zero_count = 0;      ///< eigenvalues with |beta| <= zero_tol
  int positive_count = 0;  ///< eigenvalues > zero_tol
  std::vector<ModeIndex> zero_modes;
  std::vector<ModeIndex> positive_modes;
  double max_other = 0.0;  ///< largest beta outside the (l_c, 1) plus family
  /// Smallest gamma^2 of any mode outside the scan; beta_plus < 0 there when it exceeds lambda.
  double tail_gamma_sq = 0.0;
  bool tail_certified = false;
  bool holds = false;
  std::string regime;  ///< "below", "at" or "above"
};

/// Scans the spectrum up to (l_max, n_max) and certifies the unscanned tail.
/// Throws DegeneracyError when two consecutive degrees share the minimum.
PesReport pes_check(const PhysicalParams& params, int l_max, int n_max, double zero_tol = 1e-10,
                    double margin = 1e-3);

// --- Friction pattern selection ---------------------------------------------

/// Degree selected by the exact friction minimization for given (sigma0, sigma1).
[[nodiscard]] int friction_selected_degree(double r, double sigma0, double sigma1);

struct PatternSelection {
  int requested_l = 0;
  double aspect = 0.0;  ///< h/a
  double alpha_sq = 0.0;
  /// sigma0/sigma1 from alpha^2 = pi^2 sqrt(sigma0/sigma1), the leading-order
  /// minimizer when 1 << sigma0 << sigma1.
  double ratio = 0.0;
  /// sigma0/sigma1 from the frictionless prefactor, alpha^2 = (pi^2/2) sqrt(sigma0/sigma1).
  double half_prefactor_ratio = 0.0;
  double sigma0 = 0.0;
  double sigma1 = 0.0;
  int selected_l = 0;  ///< exact minimization at (sigma0, sigma1)
  int half_prefactor_selected_l = 0;
  bool consistent = false;
};

/// Inverts the asymptotic pattern-selection law for sigma0/sigma1 and checks it
/// against the exact minimization with the given sigma0.
PatternSelection friction_ratio_for_pattern(double a, double h, int l_c, double sigma0 = 1e6);

}  // namespace shellconv
