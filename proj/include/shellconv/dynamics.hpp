#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "shellconv/reduction.hpp"

namespace shellconv {

/// Step-size underflow or a stalled adaptive integrator.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Critical amplitudes x_m for 0 <= m <= l_c; x_0 is real and the negative
/// entries follow from x_{-m} = (-1)^m conj(x_m).
struct ReducedState {
  int l_c = 1;
  std::vector<complex> x;
  double time = 0.0;

  ReducedState() = default;
  explicit ReducedState(int l_c_) : l_c(l_c_), x(static_cast<std::size_t>(l_c_ + 1)) {}

  /// Real chart (x0, y1, z1, ..., y_lc, z_lc) with x_m = (y_m + i z_m)/sqrt2.
  [[nodiscard]] std::vector<double> real_coordinates() const;
  static ReducedState from_real(int l_c, const std::vector<double>& coords, double time = 0.0);

  /// All 2 l_c + 1 amplitudes indexed by m + l_c.
  [[nodiscard]] Amplitudes amplitudes() const;

  /// N = x0^2 + 2 sum_{m>0} |x_m|^2.
  [[nodiscard]] double radial() const;

  /// x_m -> exp(i m phi) x_m
  [[nodiscard]] ReducedState rotated(double phi) const;
};

[[nodiscard]] inline int real_dimension(int l_c) { return 2 * l_c + 1; }

/// dx/dt = beta x + cubic(x). By default cubic(x) = -q x N(x); with
/// `full_cubic` set the unfitted Galerkin cubic of the model is used instead.
struct AmplitudeEquation {
  int l_c = 1;
  double beta = 0.0;
  double q = 0.0;
  bool full_cubic = false;
  std::vector<CubicForm> cubic;

  /// beta = beta+_{l_c,1}(lambda) with the model's other parameters.
  static AmplitudeEquation from_model(const ReducedModel& model, double lambda, bool full_cubic = false);
};

[[nodiscard]] ReducedState vector_field(const AmplitudeEquation& eq, const ReducedState& s);
/// Same field in the real chart.
[[nodiscard]] std::vector<double> vector_field(const AmplitudeEquation& eq, const std::vector<double>& coords);
/// Row-major Jacobian in the real chart.
[[nodiscard]] std::vector<double> jacobian(const AmplitudeEquation& eq, const std::vector<double>& coords);

struct IntegrationOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double dt_initial = 1e-3;
  double output_dt = 0.0;  ///< 0: record every accepted step
  std::size_t max_steps = 10'000'000;
};

struct TrajectoryPoint {
  double t = 0.0;
  std::vector<double> coords;
  double radial = 0.0;
};

/// Adaptive Dormand-Prince 5(4) integration of the real chart from s0.time to t_end.
std::vector<TrajectoryPoint> integrate(const AmplitudeEquation& eq, const ReducedState& s0, double t_end,
                                       const IntegrationOptions& opts = {});

/// N(t) for the isotropic model: N0 beta e^{2 beta t} / (beta + q N0 (e^{2 beta t} - 1)).
[[nodiscard]] double logistic_radial(double beta, double q, double n0, double t);

struct AttractorEstimate {
  double radius = 0.0;  ///< sqrt(beta/q)
  std::vector<ReducedState> samples;
  std::vector<bool> steady;
  std::vector<double> field_norm;
};

/// Low-discrepancy samples on the sphere N = beta/q. Throws std::domain_error
/// when beta <= 0 or q <= 0 (no bifurcated attractor).
AttractorEstimate attractor(const AmplitudeEquation& eq, std::size_t n_samples = 64, std::uint64_t seed = 0);

/// sum_m x_m Psi+_{l_c,m,1} + sum_k y_k(x) Psi_k on the grid, at lambda_c.
ShellJet reconstruct(const CenterManifoldCoeffs& coeffs, const ReducedState& s, const SphereGrid& grid);

}  // namespace shellconv
