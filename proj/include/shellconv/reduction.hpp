#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shellconv/modes.hpp"
#include "shellconv/spectrum.hpp"

namespace shellconv {

/// The reduced vector field failed a structural check (e.g. lost isotropy).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Amplitudes of the critical modes indexed by m + l_c, m = -l_c..l_c.
using Amplitudes = std::vector<complex>;

/// Coefficients of monomials x_p x_q (p <= q), keyed by (p, q).
using QuadraticForm = std::map<std::pair<int, int>, complex>;
/// Coefficients of monomials x_a x_b x_c (a <= b <= c).
using CubicForm = std::map<std::array<int, 3>, complex>;

[[nodiscard]] complex evaluate(const QuadraticForm& form, const Amplitudes& x, int l_c);
[[nodiscard]] complex evaluate(const CubicForm& form, const Amplitudes& x, int l_c);

/// I(x) = sum_m (-1)^m x_m x_{-m}; equals x_0^2 + 2 sum_{m>0} |x_m|^2 on real states.
[[nodiscard]] complex invariant_quadratic(const Amplitudes& x, int l_c);

/// Amplitudes satisfying x_{-m} = (-1)^m conj(x_m) from the entries m >= 0.
[[nodiscard]] Amplitudes real_amplitudes(std::span<const complex> nonnegative);

// --- Nonlinear operator ------------------------------------------------------

/// G(a, b) = -[u_a . grad u_b + w_a d_z u_b, u_a . grad w_b + w_a d_z w_b, u_a . grad T_b + w_a d_z T_b].
/// No Leray projection is applied; projections onto divergence-free modes
/// do not see the gradient part.
ShellField nonlinear_term(const ShellJet& a, const ShellJet& b, const SphereGrid& grid);

/// (G(a, b) + G(b, a)) / 2.
ShellField nonlinear_form(const ShellJet& a, const ShellJet& b, const SphereGrid& grid);

// --- Center manifold ---------------------------------------------------------

struct ReductionOptions {
  int l_max = -1;  ///< angular resolution; default 3*l_c + 2
  int n_z = 17;
  InnerProduct inner = InnerProduct::l2;
  double drop_tol = 1e-12;      ///< relative size below which a coefficient is treated as zero
  double isotropy_tol = 1e-8;   ///< relative residual allowed in the isotropic cubic fit
};

struct CenterManifoldCoeffs {
  int l_c = 0;
  PhysicalParams params;  ///< lambda set to lambda_c
  /// Every candidate stable mode with its (possibly empty) quadratic form y_k(x).
  std::map<ModeIndex, QuadraticForm> forms;
  std::map<ModeIndex, double> betas;
  std::map<ModeIndex, double> norms_sq;
  double max_dropped = 0.0;  ///< largest coefficient magnitude discarded as zero

  [[nodiscard]] complex evaluate(const ModeIndex& mode, const Amplitudes& x) const;
  [[nodiscard]] std::vector<ModeIndex> nonzero_modes() const;
};

/// Gaunt-rule prediction of whether mode `k` can receive a quadratic
/// contribution from products of two degree-l_c critical modes.
[[nodiscard]] bool coupling_allowed(int l_c, const ModeIndex& k);

/// Candidate stable modes: toroidal (l, m, 0) and plus/minus (l, m, 2) for
/// 1 <= l <= 2 l_c, and thermal (0, 0, 2).
[[nodiscard]] std::vector<ModeIndex> candidate_modes(int l_c);

struct ReducedModel {
  int l_c = 0;
  PhysicalParams params;  ///< lambda set to lambda_c
  double lambda_c = 0.0;
  double q = 0.0;
  std::optional<double> closed_form_q;
  double isotropy_residual = 0.0;   ///< relative deviation from -q x_m I(x)
  double quadratic_residual = 0.0;  ///< largest |<G(x,x), Psi_m>| coefficient (should vanish)
  bool validated = false;           ///< l_c in {1, 2}: a closed form exists
  std::vector<CubicForm> cubic;     ///< full cubic term per m + l_c

  /// beta_plus(l_c, 1) at the given lambda, other parameters fixed.
  [[nodiscard]] double beta_plus(double lambda) const;
  /// Full cubic vector field component m (no truncation to the isotropic fit).
  [[nodiscard]] Amplitudes cubic_field(const Amplitudes& x) const;
};

struct Reduction {
  CenterManifoldCoeffs coeffs;
  ReducedModel model;
};

/// Center manifold and reduced cubic model at lambda_c for the critical degree
/// l_c selected by params.r. params.lambda must lie in [lambda_c, 1.1 lambda_c]
/// or be zero (meaning lambda_c).
Reduction reduce(const PhysicalParams& params, int l_c, const ReductionOptions& opts = {});

CenterManifoldCoeffs cm_coefficients(const PhysicalParams& params, int l_c, const ReductionOptions& opts = {});
ReducedModel reduced_model(const PhysicalParams& params, int l_c, const ReductionOptions& opts = {});

/// r at which alpha_{l}^2 = pi^2/2, i.e. l is critical with the classical lambda_c.
[[nodiscard]] double optimal_aspect_ratio(int l);

// --- Closed forms ------------------------------------------------------------

/// Closed-form center-manifold and reduced-equation coefficients for
/// l_c = 1 (any Pr) and l_c = 2 (q only at Pr = 1), evaluated as printed.
struct ClosedFormTable {
  int l_c = 0;
  double prandtl = 1.0;
  double A = 0.0, d1_plus = 0.0, d1_minus = 0.0;
  double B = 0.0, C = 0.0;
  double c1_plus = 0.0, c1_minus = 0.0, c2_plus = 0.0, c2_minus = 0.0, c3_plus = 0.0, c3_minus = 0.0;
  double beta22_plus = 0.0, beta22_minus = 0.0, beta42_plus = 0.0, beta42_minus = 0.0;
  std::optional<double> q;
  double y002_prefactor = 0.0;  ///< as printed
};

ClosedFormTable closed_form_coefficients(double prandtl, int l_c);

/// q_1(Pr) for l_c = 1.
[[nodiscard]] double closed_form_q1(double prandtl);
/// q_2 at Pr = 1.
[[nodiscard]] double closed_form_q2();

/// How to expand the closed forms into monomials.
enum class ClosedFormReading {
  as_printed,
  /// y_202 weights for l_c = 1 use the Clebsch-Gordan value sqrt(2/3), and the
  /// l_c = 2 thermal coefficient uses the l_c = 1 prefactor -(sqrt(3)/64) pi^2.
  resolved,
};

/// Monomial expansion of the closed-form y coefficients, keyed like CenterManifoldCoeffs::forms.
std::map<ModeIndex, QuadraticForm> closed_form_forms(const ClosedFormTable& table,
                                                     ClosedFormReading reading = ClosedFormReading::resolved);

/// Largest relative difference between two forms for the same mode (0 if both empty).
[[nodiscard]] double form_difference(const QuadraticForm& a, const QuadraticForm& b);

}  // namespace shellconv
