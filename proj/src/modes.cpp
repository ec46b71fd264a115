#include "shellconv/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shellconv {

void ShellField::axpy(complex a, const ShellField& x) {
  u.axpy(a, x.u);
  w.axpy(a, x.w);
  T.axpy(a, x.T);
}

double ShellField::max_abs() const {
  return std::max({u.theta.max_abs(), u.phi.max_abs(), w.max_abs(), T.max_abs()});
}

double ShellField::max_imag() const {
  return std::max({u.theta.max_imag(), u.phi.max_imag(), w.max_imag(), T.max_imag()});
}

void ShellJet::axpy(complex a, const ShellJet& x) {
  u.axpy(a, x.u);
  w.axpy(a, x.w);
  T.axpy(a, x.T);
}

complex inner(const ShellField& f, const ShellField& g, const SphereGrid& grid, InnerProduct kind, double prandtl) {
  const double velocity_weight = kind == InnerProduct::energy ? 1.0 / prandtl : 1.0;
  return velocity_weight * (inner_shell(f.u, g.u, grid) + inner_shell(f.w, g.w, grid)) + inner_shell(f.T, g.T, grid);
}

ShellJet eigenfunction(const PhysicalParams& params, const ModeIndex& idx, const HarmonicTable& table) {
  idx.require_valid();
  const SphereGrid& grid = table.grid();
  if (idx.l > table.l_max() || idx.l > grid.max_degree()) {
    throw ResolutionError("eigenfunction: degree " + std::to_string(idx.l) + " not resolved by grid");
  }
  ShellJet jet(grid);
  const double r = grid.r();
  const double kz = idx.n * std::numbers::pi;

  if (idx.branch == Branch::thermal) {
    for (int k = 0; k < grid.n_z(); ++k) {
      const double z = grid.z()[static_cast<std::size_t>(k)];
      for (int i = 0; i < grid.n_theta(); ++i) {
        for (int j = 0; j < grid.n_phi(); ++j) {
          jet.T.value(k, i, j) = std::sin(kz * z);
          jet.T.d_z(k, i, j) = kz * std::cos(kz * z);
        }
      }
    }
    return jet;
  }

  const EigenPair e = eigenvalue(params, idx);
  const int l = idx.l;
  const int m = idx.m;
  const complex im(0.0, m);
  for (int i = 0; i < grid.n_theta(); ++i) {
    const double s = grid.sin_theta()[static_cast<std::size_t>(i)];
    const double c = grid.cos_theta()[static_cast<std::size_t>(i)];
    const double p = table.p(l, m, i);
    const double dp = table.dp(l, m, i);
    const double d2p = table.d2p(l, m, i);
    for (int j = 0; j < grid.n_phi(); ++j) {
      const complex ph = std::polar(1.0, m * grid.phi()[static_cast<std::size_t>(j)]);
      const complex f = p * ph;
      const complex ft = dp * ph;
      const complex ftt = d2p * ph;
      const complex fp = im * f;
      const complex ftp = im * ft;
      const complex fpp = -double(m * m) * f;
      // d/dtheta of (df/dphi / sin)
      const complex fp_over_s_t = ftp / s - c * fp / (s * s);

      for (int k = 0; k < grid.n_z(); ++k) {
        if (idx.branch == Branch::toroidal) {
          jet.u.theta.value(k, i, j) = fp / (r * s);
          jet.u.theta.d_theta(k, i, j) = fp_over_s_t / r;
          jet.u.theta.d_phi(k, i, j) = fpp / (r * s);
          jet.u.phi.value(k, i, j) = -ft / r;
          jet.u.phi.d_theta(k, i, j) = -ftt / r;
          jet.u.phi.d_phi(k, i, j) = -ftp / r;
          continue;
        }
        const double z = grid.z()[static_cast<std::size_t>(k)];
        const double h = std::sin(kz * z);
        const double hp = kz * std::cos(kz * z);
        const double hpp = -kz * kz * h;

        jet.u.theta.value(k, i, j) = hp * ft / r;
        jet.u.theta.d_theta(k, i, j) = hp * ftt / r;
        jet.u.theta.d_phi(k, i, j) = hp * ftp / r;
        jet.u.theta.d_z(k, i, j) = hpp * ft / r;

        jet.u.phi.value(k, i, j) = hp * fp / (r * s);
        jet.u.phi.d_theta(k, i, j) = hp * fp_over_s_t / r;
        jet.u.phi.d_phi(k, i, j) = hp * fpp / (r * s);
        jet.u.phi.d_z(k, i, j) = hpp * fp / (r * s);

        jet.w.value(k, i, j) = e.alpha_sq * h * f;
        jet.w.d_theta(k, i, j) = e.alpha_sq * h * ft;
        jet.w.d_phi(k, i, j) = e.alpha_sq * h * fp;
        jet.w.d_z(k, i, j) = e.alpha_sq * hp * f;

        jet.T.value(k, i, j) = e.b * h * f;
        jet.T.d_theta(k, i, j) = e.b * h * ft;
        jet.T.d_phi(k, i, j) = e.b * h * fp;
        jet.T.d_z(k, i, j) = e.b * hp * f;
      }
    }
  }
  return jet;
}

ShellJet eigenfunction(const PhysicalParams& params, const ModeIndex& idx, const SphereGrid& grid) {
  const HarmonicTable table(grid, std::max(idx.l, 0));
  return eigenfunction(params, idx, table);
}

ScalarField divergence_3d(const ShellJet& phi, const SphereGrid& grid) {
  ScalarField div = div_sphere(phi.u.values(), grid);
  div += phi.w.d_z;
  return div;
}

ScalarField temperature_residual(const PhysicalParams& params, const EigenPair& e, const ShellJet& phi,
                                 const SphereGrid& grid) {
  // (Delta + d_zz) T: the horizontal part spectrally, the vertical part from sin(n pi z).
  ScalarField res = laplacian_sphere(phi.T.value, grid);
  const double kz2 = e.index.n * e.index.n * std::numbers::pi * std::numbers::pi;
  res.axpy(-kz2, phi.T.value);
  res.axpy(params.lambda, phi.w.value);
  res.axpy(-e.beta, phi.T.value);
  return res;
}

}  // namespace shellconv
