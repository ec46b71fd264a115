#include "shellconv/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "shellconv/parallel.hpp"

namespace shellconv {

namespace {

std::size_t slot(int m, int l_c) { return static_cast<std::size_t>(m + l_c); }

double sign_pow(int m) { return (std::abs(m) % 2) ? -1.0 : 1.0; }

// w_a * d_z of each component of b, added into g with the given factor.
void add_vertical_advection(ShellField& g, const ShellJet& a, const ShellJet& b, double factor) {
  const auto& w = a.w.value.data;
  auto add = [&](ScalarField& out, const ScalarField& dz) {
    for (std::size_t k = 0; k < w.size(); ++k) out.data[k] += factor * w[k] * dz.data[k];
  };
  add(g.u.theta, b.u.theta.d_z);
  add(g.u.phi, b.u.phi.d_z);
  add(g.w, b.w.d_z);
  add(g.T, b.T.d_z);
}

}  // namespace

complex evaluate(const QuadraticForm& form, const Amplitudes& x, int l_c) {
  complex acc{};
  for (const auto& [pq, c] : form) acc += c * x[slot(pq.first, l_c)] * x[slot(pq.second, l_c)];
  return acc;
}

complex evaluate(const CubicForm& form, const Amplitudes& x, int l_c) {
  complex acc{};
  for (const auto& [abc, c] : form) acc += c * x[slot(abc[0], l_c)] * x[slot(abc[1], l_c)] * x[slot(abc[2], l_c)];
  return acc;
}

complex invariant_quadratic(const Amplitudes& x, int l_c) {
  complex acc{};
  for (int m = -l_c; m <= l_c; ++m) acc += sign_pow(m) * x[slot(m, l_c)] * x[slot(-m, l_c)];
  return acc;
}

Amplitudes real_amplitudes(std::span<const complex> nonnegative) {
  const int l_c = static_cast<int>(nonnegative.size()) - 1;
  Amplitudes x(static_cast<std::size_t>(2 * l_c + 1));
  x[slot(0, l_c)] = nonnegative[0].real();
  for (int m = 1; m <= l_c; ++m) {
    x[slot(m, l_c)] = nonnegative[static_cast<std::size_t>(m)];
    x[slot(-m, l_c)] = sign_pow(m) * std::conj(nonnegative[static_cast<std::size_t>(m)]);
  }
  return x;
}

// --- Nonlinear operator ------------------------------------------------------

ShellField nonlinear_term(const ShellJet& a, const ShellJet& b, const SphereGrid& grid) {
  const VectorField ua = a.u.values();
  ShellField g(advect(ua, b.u, grid), advect(ua, b.w, grid), advect(ua, b.T, grid));
  add_vertical_advection(g, a, b, 1.0);
  g.u.theta *= -1.0;
  g.u.phi *= -1.0;
  g.w *= -1.0;
  g.T *= -1.0;
  return g;
}

ShellField nonlinear_form(const ShellJet& a, const ShellJet& b, const SphereGrid& grid) {
  ShellField g = nonlinear_term(a, b, grid);
  g.axpy(1.0, nonlinear_term(b, a, grid));
  g.u.theta *= 0.5;
  g.u.phi *= 0.5;
  g.w *= 0.5;
  g.T *= 0.5;
  return g;
}

// --- Center manifold ---------------------------------------------------------

complex CenterManifoldCoeffs::evaluate(const ModeIndex& mode, const Amplitudes& x) const {
  const auto it = forms.find(mode);
  if (it == forms.end()) return {};
  return shellconv::evaluate(it->second, x, l_c);
}

std::vector<ModeIndex> CenterManifoldCoeffs::nonzero_modes() const {
  std::vector<ModeIndex> out;
  for (const auto& [mode, form] : forms) {
    if (!form.empty()) out.push_back(mode);
  }
  return out;
}

bool coupling_allowed(int l_c, const ModeIndex& k) {
  if (k.branch == Branch::thermal) return k.n == 2;
  // Products of gradient-type critical fields are horizontal gradients plus
  // scalars, so the curl (toroidal) family receives nothing.
  if (k.branch == Branch::toroidal) return false;
  if (k.n != 2) return false;
  for (int p = -l_c; p <= l_c; ++p) {
    const int q = k.m - p;
    if (std::abs(q) > l_c) continue;
    if (gaunt_allowed({l_c, p}, {l_c, q}, {k.l, -k.m})) return true;
  }
  return false;
}

std::vector<ModeIndex> candidate_modes(int l_c) {
  std::vector<ModeIndex> out;
  for (int l = 1; l <= 2 * l_c; ++l) {
    for (int m = -l; m <= l; ++m) {
      out.push_back({Branch::toroidal, l, m, 0});
      out.push_back({Branch::plus, l, m, 2});
      out.push_back({Branch::minus, l, m, 2});
    }
  }
  out.push_back({Branch::thermal, 0, 0, 2});
  return out;
}

double optimal_aspect_ratio(int l) { return std::sqrt(2.0 * l * (l + 1.0)) / std::numbers::pi; }

double ReducedModel::beta_plus(double lambda) const {
  PhysicalParams p = params;
  p.lambda = lambda;
  return poloidal_betas(p, l_c, 1).first;
}

Amplitudes ReducedModel::cubic_field(const Amplitudes& x) const {
  Amplitudes out(x.size());
  for (int m = -l_c; m <= l_c; ++m) out[slot(m, l_c)] = evaluate(cubic[slot(m, l_c)], x, l_c);
  return out;
}

Reduction reduce(const PhysicalParams& params, int l_c, const ReductionOptions& opts) {
  params.validate();
  if (l_c < 1) throw std::invalid_argument("reduce: l_c must be >= 1");

  const CriticalPoint cp = critical_rayleigh(params);
  if (cp.degenerate) {
    std::ostringstream os;
    os << "critical degree is degenerate (l = " << cp.l_c << " and " << cp.tied_l << ")";
    throw DegeneracyError(os.str());
  }
  if (cp.l_c != l_c) {
    std::ostringstream os;
    os << "aspect ratio r = " << params.r << " selects l_c = " << cp.l_c << ", not " << l_c;
    throw std::invalid_argument(os.str());
  }
  if (params.lambda != 0.0 &&
      (params.lambda < cp.lambda_c * (1.0 - 1e-12) || params.lambda > 1.1 * cp.lambda_c)) {
    throw std::domain_error("reduce: lambda must lie in [lambda_c, 1.1 lambda_c]");
  }

  PhysicalParams p = params;
  p.lambda = cp.lambda_c;

  const int l_max = opts.l_max < 0 ? 3 * l_c + 2 : opts.l_max;
  if (l_max < 2 * l_c) throw ResolutionError("reduce: angular resolution must reach 2 l_c");
  const SphereGrid grid = SphereGrid::for_degree(l_max, p.r, opts.n_z);
  const HarmonicTable table(grid, 2 * l_c);
  auto ip = [&](const ShellField& f, const ShellField& g) { return inner(f, g, grid, opts.inner, p.prandtl); };

  const int n_crit = 2 * l_c + 1;
  std::vector<ShellJet> crit;
  std::vector<ShellField> crit_values;
  std::vector<double> crit_norm;
  for (int m = -l_c; m <= l_c; ++m) {
    crit.push_back(eigenfunction(p, {Branch::plus, l_c, m, 1}, table));
    crit_values.push_back(crit.back().values());
    crit_norm.push_back(ip(crit_values.back(), crit_values.back()).real());
  }

  // Symmetrized pair products G_s(p, q), p <= q.
  std::vector<std::pair<int, int>> pairs;
  for (int a = -l_c; a <= l_c; ++a) {
    for (int b = a; b <= l_c; ++b) pairs.emplace_back(a, b);
  }
  std::vector<ShellField> pair_fields(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    pair_fields[i] = nonlinear_form(crit[slot(pairs[i].first, l_c)], crit[slot(pairs[i].second, l_c)], grid);
  });

  Reduction out;
  auto& cm = out.coeffs;
  cm.l_c = l_c;
  cm.params = p;

  // Projection onto each candidate stable mode.
  const auto candidates = candidate_modes(l_c);
  std::vector<QuadraticForm> raw(candidates.size());
  std::vector<double> betas(candidates.size()), norms(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t i) {
    const ModeIndex& k = candidates[i];
    const EigenPair e = eigenvalue(p, k);
    if (std::abs(e.beta) < 1e-10) throw DegeneracyError("stable mode " + k.key() + " has a vanishing eigenvalue");
    const ShellField psi = eigenfunction(p, k, table).values();
    const double norm = ip(psi, psi).real();
    QuadraticForm form;
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      const double mult = pairs[j].first == pairs[j].second ? 1.0 : 2.0;
      form[pairs[j]] = -mult * ip(pair_fields[j], psi) / (e.beta * norm);
    }
    raw[i] = std::move(form);
    betas[i] = e.beta;
    norms[i] = norm;
  });

  double scale = 0.0;
  for (const auto& form : raw) {
    for (const auto& [key, c] : form) scale = std::max(scale, std::abs(c));
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    QuadraticForm kept;
    for (const auto& [key, c] : raw[i]) {
      if (std::abs(c) > opts.drop_tol * scale) {
        kept[key] = c;
      } else {
        cm.max_dropped = std::max(cm.max_dropped, std::abs(c));
      }
    }
    cm.forms[candidates[i]] = std::move(kept);
    cm.betas[candidates[i]] = betas[i];
    cm.norms_sq[candidates[i]] = norms[i];
  }

  // Reduced model.
  auto& model = out.model;
  model.l_c = l_c;
  model.params = p;
  model.lambda_c = cp.lambda_c;
  model.cubic.assign(static_cast<std::size_t>(n_crit), CubicForm{});

  for (const auto& field : pair_fields) {
    for (int m = 0; m < n_crit; ++m) {
      model.quadratic_residual =
          std::max(model.quadratic_residual, std::abs(ip(field, crit_values[static_cast<std::size_t>(m)])) /
                                                 crit_norm[static_cast<std::size_t>(m)]);
    }
  }

  // dx_m/dt cubic part: sum_{j,k} x_j y_k(x) <G(Psi_j, Psi_k) + G(Psi_k, Psi_j), Psi_m> / |Psi_m|^2.
  const auto active = cm.nonzero_modes();
  // coupling[i][j][m]
  std::vector<std::vector<std::vector<complex>>> coupling(active.size());
  parallel_for(active.size(), [&](std::size_t i) {
    const ShellJet psi_k = eigenfunction(p, active[i], table);
    auto& per_j = coupling[i];
    per_j.assign(static_cast<std::size_t>(n_crit), std::vector<complex>(static_cast<std::size_t>(n_crit)));
    for (int j = 0; j < n_crit; ++j) {
      ShellField g = nonlinear_term(crit[static_cast<std::size_t>(j)], psi_k, grid);
      g.axpy(1.0, nonlinear_term(psi_k, crit[static_cast<std::size_t>(j)], grid));
      for (int m = 0; m < n_crit; ++m) {
        per_j[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] =
            ip(g, crit_values[static_cast<std::size_t>(m)]) / crit_norm[static_cast<std::size_t>(m)];
      }
    }
  });
  for (std::size_t i = 0; i < active.size(); ++i) {
    const auto& form = cm.forms.at(active[i]);
    for (int j = 0; j < n_crit; ++j) {
      for (const auto& [pq, c] : form) {
        std::array<int, 3> key{j - l_c, pq.first, pq.second};
        std::sort(key.begin(), key.end());
        for (int m = 0; m < n_crit; ++m) {
          model.cubic[static_cast<std::size_t>(m)][key] +=
              coupling[i][static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] * c;
        }
      }
    }
  }

  // Isotropic template x_m I(x), fitted by least squares over all coefficients.
  std::vector<CubicForm> iso(static_cast<std::size_t>(n_crit));
  for (int m = -l_c; m <= l_c; ++m) {
    for (int a = -l_c; a <= l_c; ++a) {
      std::array<int, 3> key{m, a, -a};
      std::sort(key.begin(), key.end());
      iso[slot(m, l_c)][key] += sign_pow(a);
    }
  }
  complex num{};
  double den = 0.0;
  for (int m = 0; m < n_crit; ++m) {
    for (const auto& [key, t] : iso[static_cast<std::size_t>(m)]) {
      const auto it = model.cubic[static_cast<std::size_t>(m)].find(key);
      const complex c = it == model.cubic[static_cast<std::size_t>(m)].end() ? complex{} : it->second;
      num += std::conj(t) * c;
      den += std::norm(t);
    }
  }
  const complex q = -num / den;
  model.q = q.real();
  double resid = std::abs(q.imag());
  for (int m = 0; m < n_crit; ++m) {
    const auto& cubic = model.cubic[static_cast<std::size_t>(m)];
    const auto& tmpl = iso[static_cast<std::size_t>(m)];
    for (const auto& [key, c] : cubic) {
      const auto it = tmpl.find(key);
      const double t = it == tmpl.end() ? 0.0 : it->second.real();
      resid = std::max(resid, std::abs(c + model.q * t));
    }
  }
  model.isotropy_residual = resid / std::max(std::abs(model.q), 1e-300);

  if (l_c == 1) {
    model.closed_form_q = closed_form_q1(p.prandtl);
  } else if (l_c == 2 && std::abs(p.prandtl - 1.0) < 1e-12) {
    model.closed_form_q = closed_form_q2();
  }
  model.validated = l_c <= 2;
  if (model.validated && model.isotropy_residual > opts.isotropy_tol) {
    std::ostringstream os;
    os << "cubic term is not isotropic (relative residual " << model.isotropy_residual << ")";
    throw StructuralError(os.str());
  }
  return out;
}

CenterManifoldCoeffs cm_coefficients(const PhysicalParams& params, int l_c, const ReductionOptions& opts) {
  return reduce(params, l_c, opts).coeffs;
}

ReducedModel reduced_model(const PhysicalParams& params, int l_c, const ReductionOptions& opts) {
  return reduce(params, l_c, opts).model;
}

}  // namespace shellconv
