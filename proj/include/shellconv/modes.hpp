#pragma once

#include <utility>

#include "shellconv/harmonics.hpp"
#include "shellconv/spectrum.hpp"

namespace shellconv {

/// (u, w, T) sampled on every vertical node of a grid.
struct ShellField {
  VectorField u;
  ScalarField w;
  ScalarField T;

  ShellField() = default;
  explicit ShellField(const SphereGrid& grid) : u(grid.n_z(), grid), w(grid.n_z(), grid), T(grid.n_z(), grid) {}
  ShellField(VectorField u_, ScalarField w_, ScalarField T_) : u(std::move(u_)), w(std::move(w_)), T(std::move(T_)) {}

  void axpy(complex a, const ShellField& x);
  [[nodiscard]] double max_abs() const;
  [[nodiscard]] double max_imag() const;
};

/// (u, w, T) with first partials in theta, phi and z.
struct ShellJet {
  VectorJet u;
  ScalarJet w;
  ScalarJet T;

  ShellJet() = default;
  explicit ShellJet(const SphereGrid& grid) : u(grid.n_z(), grid), w(grid.n_z(), grid), T(grid.n_z(), grid) {}

  [[nodiscard]] ShellField values() const { return {u.values(), w.value, T.value}; }
  void axpy(complex a, const ShellJet& x);
};

/// Inner product on H. `l2` is the plain L^2(Omega)^4 product; `energy`
/// weights the velocity components by 1/Pr, which makes the linear operator
/// symmetric for every Pr. The two agree at Pr = 1.
enum class InnerProduct { l2, energy };

complex inner(const ShellField& f, const ShellField& g, const SphereGrid& grid, InnerProduct kind = InnerProduct::l2,
              double prandtl = 1.0);

/// Samples an eigenmode and its partials. Conventions:
///  toroidal: (curl Y_lm, 0, 0)
///  thermal:  (0, 0, sin(n pi z))           (no horizontal normalization)
///  plus/minus: (n pi cos(n pi z) grad Y_lm, alpha^2 Y_lm sin(n pi z), b Y_lm sin(n pi z))
/// The table must cover degree idx.l on the same grid.
ShellJet eigenfunction(const PhysicalParams& params, const ModeIndex& idx, const HarmonicTable& table);
ShellJet eigenfunction(const PhysicalParams& params, const ModeIndex& idx, const SphereGrid& grid);

/// div u + dw/dz, with the horizontal divergence taken spectrally from the sampled u.
ScalarField divergence_3d(const ShellJet& phi, const SphereGrid& grid);

/// Residual of the linear eigen-relation for the temperature equation,
/// (Delta + d_zz) T + lambda w - beta T, sampled. Zero for a correct amplitude b.
ScalarField temperature_residual(const PhysicalParams& params, const EigenPair& e, const ShellJet& phi,
                                 const SphereGrid& grid);

}  // namespace shellconv
