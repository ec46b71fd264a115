#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shellconv {

using complex = std::complex<double>;

/// Thrown when a field or index needs more angular resolution than a grid carries.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HarmonicIndex {
  int l = 0;
  int m = 0;

  [[nodiscard]] bool valid() const { return l >= 0 && m >= -l && m <= l; }
  friend bool operator==(const HarmonicIndex&, const HarmonicIndex&) = default;
};

/// Packed position of (l, m) in a degree-major coefficient array: l*l + l + m.
[[nodiscard]] inline std::size_t packed_index(int l, int m) {
  return static_cast<std::size_t>(l * l + l + m);
}

/// Tensor-product grid on the shell S^2_r x (0,1).
///
/// Colatitudes are Gauss-Legendre nodes in cos(theta) (the poles are never
/// sampled, so 1/sin(theta) and cot(theta) are finite everywhere). Longitudes
/// are uniform, which makes the trapezoidal rule exact for trigonometric
/// polynomials of order < n_phi. Vertical nodes are Gauss-Legendre on (0,1)
/// unless supplied explicitly for sampling-only use.
class SphereGrid {
 public:
  SphereGrid(int n_theta, int n_phi, int n_z, double r);

  /// Smallest grid that integrates products of two degree-`l_max` harmonics exactly.
  static SphereGrid for_degree(int l_max, double r, int n_z = 17);

  /// Same angular grid with the given vertical sample points. Vertical weights
  /// are set to zero: such a grid is for sampling, not for shell quadrature.
  [[nodiscard]] SphereGrid with_z_nodes(std::vector<double> z) const;

  [[nodiscard]] int n_theta() const { return n_theta_; }
  [[nodiscard]] int n_phi() const { return n_phi_; }
  [[nodiscard]] int n_z() const { return static_cast<int>(z_.size()); }
  [[nodiscard]] double r() const { return r_; }

  /// Highest degree whose harmonic products the angular rule integrates exactly.
  [[nodiscard]] int max_degree() const;

  [[nodiscard]] std::span<const double> theta() const { return theta_; }
  [[nodiscard]] std::span<const double> cos_theta() const { return cos_theta_; }
  [[nodiscard]] std::span<const double> sin_theta() const { return sin_theta_; }
  [[nodiscard]] std::span<const double> theta_weights() const { return theta_weights_; }
  [[nodiscard]] std::span<const double> phi() const { return phi_; }
  [[nodiscard]] double phi_weight() const;
  [[nodiscard]] std::span<const double> z() const { return z_; }
  [[nodiscard]] std::span<const double> z_weights() const { return z_weights_; }

  [[nodiscard]] std::size_t layer_size() const {
    return static_cast<std::size_t>(n_theta_) * static_cast<std::size_t>(n_phi_);
  }
  [[nodiscard]] std::size_t size() const { return layer_size() * z_.size(); }

  /// Sphere quadrature weight of node (i, j), unit sphere (sums to 4*pi).
  [[nodiscard]] double unit_weight(int i) const { return theta_weights_[static_cast<std::size_t>(i)] * phi_weight(); }

 private:
  int n_theta_;
  int n_phi_;
  double r_;
  std::vector<double> theta_, cos_theta_, sin_theta_, theta_weights_;
  std::vector<double> phi_;
  std::vector<double> z_, z_weights_;
};

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Complex samples on a grid, laid out z-major, then theta, then phi.
/// A field may have a single layer (purely horizontal) or one layer per z node.
struct ScalarField {
  int layers = 0;
  int n_theta = 0;
  int n_phi = 0;
  std::vector<complex> data;

  ScalarField() = default;
  ScalarField(int layers_, const SphereGrid& grid);

  [[nodiscard]] std::size_t index(int k, int i, int j) const {
    return (static_cast<std::size_t>(k) * static_cast<std::size_t>(n_theta) + static_cast<std::size_t>(i)) *
               static_cast<std::size_t>(n_phi) +
           static_cast<std::size_t>(j);
  }
  complex& operator()(int k, int i, int j) { return data[index(k, i, j)]; }
  const complex& operator()(int k, int i, int j) const { return data[index(k, i, j)]; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator*=(complex s);
  void axpy(complex a, const ScalarField& x);
  [[nodiscard]] double max_abs() const;
  [[nodiscard]] double max_imag() const;
};

/// Tangent field on the sphere in the (e_theta, e_phi) frame.
struct VectorField {
  ScalarField theta;
  ScalarField phi;

  VectorField() = default;
  VectorField(int layers, const SphereGrid& grid) : theta(layers, grid), phi(layers, grid) {}
  VectorField(ScalarField t, ScalarField p) : theta(std::move(t)), phi(std::move(p)) {}

  VectorField& operator+=(const VectorField& o);
  void axpy(complex a, const VectorField& x);
};

/// A scalar field together with its partial derivatives in theta, phi and z.
struct ScalarJet {
  ScalarField value, d_theta, d_phi, d_z;

  ScalarJet() = default;
  ScalarJet(int layers, const SphereGrid& grid)
      : value(layers, grid), d_theta(layers, grid), d_phi(layers, grid), d_z(layers, grid) {}

  void axpy(complex a, const ScalarJet& x);
};

/// Component-wise jet of a tangent field: partials of u_theta and u_phi.
struct VectorJet {
  ScalarJet theta, phi;

  VectorJet() = default;
  VectorJet(int layers, const SphereGrid& grid) : theta(layers, grid), phi(layers, grid) {}

  [[nodiscard]] VectorField values() const { return {theta.value, phi.value}; }
  void axpy(complex a, const VectorJet& x);
};

/// Normalized associated Legendre functions (Condon-Shortley phase) with their
/// first two colatitude derivatives, tabulated at a grid's Gauss nodes.
///
/// Y_lm(theta, phi) = P(l, m, i) * exp(i m phi) is orthonormal on the unit sphere.
/// Values for negative m follow from P(l, -m) = (-1)^m P(l, m).
class HarmonicTable {
 public:
  HarmonicTable(const SphereGrid& grid, int l_max);

  [[nodiscard]] int l_max() const { return l_max_; }
  [[nodiscard]] double p(int l, int m, int i) const;
  [[nodiscard]] double dp(int l, int m, int i) const;
  [[nodiscard]] double d2p(int l, int m, int i) const;

  [[nodiscard]] const SphereGrid& grid() const { return *grid_; }

 private:
  [[nodiscard]] std::size_t slot(int l, int m, int i) const;

  const SphereGrid* grid_;
  int l_max_;
  int n_theta_;
  std::vector<double> p_, dp_, d2p_;
};

/// Normalized associated Legendre values P_lm(x) for 0 <= m <= l <= l_max,
/// Condon-Shortley phase, via the stable three-term recurrence in l.
/// Output is packed l*(l+1)/2 + m.
std::vector<double> normalized_legendre(int l_max, double x);

/// Spherical harmonic coefficients per layer, packed by packed_index(l, m).
struct HarmonicCoefficients {
  int l_max = 0;
  std::vector<std::vector<complex>> layers;
};

// --- Sampling and transforms -------------------------------------------------

/// Orthonormal Y_lm (unit sphere, Condon-Shortley phase) sampled on one layer.
ScalarField eval_ylm(HarmonicIndex idx, const SphereGrid& grid);

/// Projects each layer of `f` onto Y_lm for l <= l_max (default: grid limit).
HarmonicCoefficients analyze(const ScalarField& f, const SphereGrid& grid, int l_max = -1);

/// Sums coefficients back onto the grid.
ScalarField synthesize(const HarmonicCoefficients& c, const SphereGrid& grid);

/// Scalar jet (value and angular partials) of a band-limited sampled field;
/// d_z is left zero.
ScalarJet angular_jet(const ScalarField& f, const SphereGrid& grid);

// --- Differential operators on S^2_r -----------------------------------------

/// Horizontal gradient, including the 1/r and 1/(r sin(theta)) metric factors.
VectorField grad_sphere(const ScalarField& f, const SphereGrid& grid);

/// Surface curl: (1/(r sin)) df/dphi e_theta - (1/r) df/dtheta e_phi.
VectorField curl_sphere(const ScalarField& f, const SphereGrid& grid);

/// Horizontal divergence of a band-limited tangent field.
ScalarField div_sphere(const VectorField& v, const SphereGrid& grid);

/// Surface Laplacian.
ScalarField laplacian_sphere(const ScalarField& f, const SphereGrid& grid);

/// Hodge potentials (A, B) with v = grad A + curl B, per layer.
struct HodgePotentials {
  HarmonicCoefficients gradient;
  HarmonicCoefficients curl;
};
HodgePotentials hodge_decompose(const VectorField& v, const SphereGrid& grid, int l_max = -1);

/// Jet of the tangent field grad A + curl B.
VectorJet hodge_jet(const HodgePotentials& h, const SphereGrid& grid);

// --- Advection ---------------------------------------------------------------

/// Directional derivative (1/r)(u_theta dT/dtheta + u_phi/sin(theta) dT/dphi).
ScalarField advect(const VectorField& u, const ScalarJet& t, const SphereGrid& grid);

/// Covariant derivative of a tangent field along u, with the cot(theta) terms.
VectorField advect(const VectorField& u, const VectorJet& v, const SphereGrid& grid);

/// Convenience forms on sampled band-limited fields.
ScalarField advect(const VectorField& u, const ScalarField& t, const SphereGrid& grid);
VectorField advect(const VectorField& u, const VectorField& v, const SphereGrid& grid);

// --- Quadrature --------------------------------------------------------------

/// Integral of one layer over S^2_r (metric factor r^2 included).
complex quad_sphere(const ScalarField& f, const SphereGrid& grid, int layer = 0);

/// Integral over the unit sphere.
complex quad_unit_sphere(const ScalarField& f, const SphereGrid& grid, int layer = 0);

/// Integral over S^2_r x (0,1); requires one layer per vertical node.
complex quad_shell(const ScalarField& f, const SphereGrid& grid);

/// sum f * conj(g) integrated over the shell.
complex inner_shell(const ScalarField& f, const ScalarField& g, const SphereGrid& grid);
complex inner_shell(const VectorField& f, const VectorField& g, const SphereGrid& grid);

// --- Triple products ---------------------------------------------------------

/// Wigner 3-j symbol for integer angular momenta, from the Racah formula in
/// exact rational arithmetic.
double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3);

/// Integral over the unit sphere of Y_{l1 m1} Y_{l2 m2} Y_{l3 m3} (no conjugates).
double gaunt(HarmonicIndex a, HarmonicIndex b, HarmonicIndex c);

/// True when the Gaunt selection rules allow a nonzero triple product.
bool gaunt_allowed(HarmonicIndex a, HarmonicIndex b, HarmonicIndex c);

}  // namespace shellconv
