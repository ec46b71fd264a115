#include "shellconv/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace shellconv {

namespace {

constexpr double kPi = std::numbers::pi;

void require_same_shape(const ScalarField& a, const ScalarField& b) {
  if (a.layers != b.layers || a.n_theta != b.n_theta || a.n_phi != b.n_phi) {
    throw std::invalid_argument("field shapes differ");
  }
}

void require_on_grid(const ScalarField& f, const SphereGrid& grid) {
  if (f.n_theta != grid.n_theta() || f.n_phi != grid.n_phi()) {
    throw std::invalid_argument("field is not sampled on this grid");
  }
}

int resolve_degree(int l_max, const SphereGrid& grid) {
  if (l_max < 0) return grid.max_degree();
  if (l_max > grid.max_degree()) {
    throw ResolutionError("degree " + std::to_string(l_max) + " exceeds grid limit " +
                          std::to_string(grid.max_degree()));
  }
  return l_max;
}

// Per-(theta node, m) partial sums over l of c_lm * P_lm and its derivatives.
struct ThetaSums {
  int l_max;
  int n_theta;
  std::vector<complex> p, dp, d2p;

  ThetaSums(int l_max_, int n_theta_)
      : l_max(l_max_),
        n_theta(n_theta_),
        p(static_cast<std::size_t>(n_theta_ * (2 * l_max_ + 1))),
        dp(p.size()),
        d2p(p.size()) {}

  [[nodiscard]] std::size_t at(int i, int m) const {
    return static_cast<std::size_t>(i * (2 * l_max + 1) + m + l_max);
  }
};

ThetaSums theta_sums(const std::vector<complex>& coeffs, const HarmonicTable& table, int l_max) {
  const int nt = table.grid().n_theta();
  ThetaSums s(l_max, nt);
  for (int l = 0; l <= l_max; ++l) {
    for (int m = -l; m <= l; ++m) {
      const complex c = coeffs[packed_index(l, m)];
      if (c == complex{}) continue;
      for (int i = 0; i < nt; ++i) {
        const std::size_t k = s.at(i, m);
        s.p[k] += c * table.p(l, m, i);
        s.dp[k] += c * table.dp(l, m, i);
        s.d2p[k] += c * table.d2p(l, m, i);
      }
    }
  }
  return s;
}

// e^{i m phi_j} for |m| <= l_max.
std::vector<complex> phase_table(const SphereGrid& grid, int l_max) {
  const int np = grid.n_phi();
  std::vector<complex> e(static_cast<std::size_t>(np * (2 * l_max + 1)));
  for (int j = 0; j < np; ++j) {
    for (int m = -l_max; m <= l_max; ++m) {
      e[static_cast<std::size_t>(j * (2 * l_max + 1) + m + l_max)] = std::polar(1.0, m * grid.phi()[j]);
    }
  }
  return e;
}

}  // namespace

// --- Grid --------------------------------------------------------------------

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  // P_n(x) and P_n'(x) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

SphereGrid::SphereGrid(int n_theta, int n_phi, int n_z, double r) : n_theta_(n_theta), n_phi_(n_phi), r_(r) {
  if (n_theta < 1 || n_phi < 1 || n_z < 1) throw std::invalid_argument("SphereGrid: node counts must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("SphereGrid: radius must be positive");

  std::vector<double> x, w;
  gauss_legendre(n_theta, x, w);
  // Ascending theta means descending cos(theta).
  for (int i = 0; i < n_theta; ++i) {
    const double c = x[static_cast<std::size_t>(n_theta - 1 - i)];
    cos_theta_.push_back(c);
    theta_.push_back(std::acos(c));
    sin_theta_.push_back(std::sqrt((1.0 - c) * (1.0 + c)));
    theta_weights_.push_back(w[static_cast<std::size_t>(n_theta - 1 - i)]);
  }
  for (int j = 0; j < n_phi; ++j) phi_.push_back(2.0 * kPi * j / n_phi);

  gauss_legendre(n_z, x, w);
  for (int k = 0; k < n_z; ++k) {
    z_.push_back(0.5 * (x[static_cast<std::size_t>(k)] + 1.0));
    z_weights_.push_back(0.5 * w[static_cast<std::size_t>(k)]);
  }
}

SphereGrid SphereGrid::for_degree(int l_max, double r, int n_z) {
  if (l_max < 0) throw std::invalid_argument("for_degree: negative degree");
  return SphereGrid(l_max + 1, 2 * l_max + 1, n_z, r);
}

SphereGrid SphereGrid::with_z_nodes(std::vector<double> z) const {
  if (z.empty()) throw std::invalid_argument("with_z_nodes: empty node list");
  SphereGrid g = *this;
  g.z_weights_.assign(z.size(), 0.0);
  g.z_ = std::move(z);
  return g;
}

int SphereGrid::max_degree() const { return std::min(n_theta_ - 1, (n_phi_ - 1) / 2); }

double SphereGrid::phi_weight() const { return 2.0 * kPi / n_phi_; }

// --- Fields ------------------------------------------------------------------

ScalarField::ScalarField(int layers_, const SphereGrid& grid)
    : layers(layers_),
      n_theta(grid.n_theta()),
      n_phi(grid.n_phi()),
      data(static_cast<std::size_t>(layers_) * grid.layer_size()) {}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_shape(*this, o);
  for (std::size_t k = 0; k < data.size(); ++k) data[k] += o.data[k];
  return *this;
}

ScalarField& ScalarField::operator*=(complex s) {
  for (auto& v : data) v *= s;
  return *this;
}

void ScalarField::axpy(complex a, const ScalarField& x) {
  require_same_shape(*this, x);
  for (std::size_t k = 0; k < data.size(); ++k) data[k] += a * x.data[k];
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (const auto& v : data) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::max_imag() const {
  double m = 0.0;
  for (const auto& v : data) m = std::max(m, std::abs(v.imag()));
  return m;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  theta += o.theta;
  phi += o.phi;
  return *this;
}

void VectorField::axpy(complex a, const VectorField& x) {
  theta.axpy(a, x.theta);
  phi.axpy(a, x.phi);
}

void ScalarJet::axpy(complex a, const ScalarJet& x) {
  value.axpy(a, x.value);
  d_theta.axpy(a, x.d_theta);
  d_phi.axpy(a, x.d_phi);
  d_z.axpy(a, x.d_z);
}

void VectorJet::axpy(complex a, const VectorJet& x) {
  theta.axpy(a, x.theta);
  phi.axpy(a, x.phi);
}

// --- Legendre tables ---------------------------------------------------------

std::vector<double> normalized_legendre(int l_max, double x) {
  std::vector<double> p(static_cast<std::size_t>((l_max + 1) * (l_max + 2) / 2), 0.0);
  auto at = [](int l, int m) { return static_cast<std::size_t>(l * (l + 1) / 2 + m); };
  const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
  p[0] = 0.5 / std::sqrt(kPi);
  for (int m = 1; m <= l_max; ++m) {
    p[at(m, m)] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * p[at(m - 1, m - 1)];
  }
  for (int m = 0; m < l_max; ++m) {
    p[at(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * p[at(m, m)];
  }
  for (int m = 0; m <= l_max; ++m) {
    double a_prev = std::sqrt((4.0 * (m + 1) * (m + 1) - 1.0) / ((m + 1.0) * (m + 1.0) - m * m));
    for (int l = m + 2; l <= l_max; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (1.0 * l * l - 1.0 * m * m));
      p[at(l, m)] = a * (x * p[at(l - 1, m)] - p[at(l - 2, m)] / a_prev);
      a_prev = a;
    }
  }
  return p;
}

HarmonicTable::HarmonicTable(const SphereGrid& grid, int l_max)
    : grid_(&grid), l_max_(l_max), n_theta_(grid.n_theta()) {
  if (l_max < 0) throw std::invalid_argument("HarmonicTable: negative degree");
  const std::size_t per_node = static_cast<std::size_t>((l_max + 1) * (l_max + 2) / 2);
  p_.resize(per_node * static_cast<std::size_t>(n_theta_));
  dp_.resize(p_.size());
  d2p_.resize(p_.size());
  for (int i = 0; i < n_theta_; ++i) {
    const double c = grid.cos_theta()[static_cast<std::size_t>(i)];
    const double s = grid.sin_theta()[static_cast<std::size_t>(i)];
    const double cot = c / s;
    // One degree higher so that P_{l, m+1} is available for the derivative.
    const auto p = normalized_legendre(l_max + 1, c);
    auto at = [](int l, int m) { return static_cast<std::size_t>(l * (l + 1) / 2 + m); };
    for (int l = 0; l <= l_max; ++l) {
      for (int m = 0; m <= l; ++m) {
        const double v = p[at(l, m)];
        const double up = m < l ? p[at(l, m + 1)] : 0.0;
        const double d = m * cot * v + std::sqrt((l - m) * (l + m + 1.0)) * up;
        const double d2 = -cot * d + (m * m / (s * s) - l * (l + 1.0)) * v;
        const std::size_t k = slot(l, m, i);
        p_[k] = v;
        dp_[k] = d;
        d2p_[k] = d2;
      }
    }
  }
}

std::size_t HarmonicTable::slot(int l, int m, int i) const {
  return static_cast<std::size_t>(i) * static_cast<std::size_t>((l_max_ + 1) * (l_max_ + 2) / 2) +
         static_cast<std::size_t>(l * (l + 1) / 2 + m);
}

double HarmonicTable::p(int l, int m, int i) const {
  if (m < 0) return ((-m) % 2 ? -1.0 : 1.0) * p_[slot(l, -m, i)];
  return p_[slot(l, m, i)];
}

double HarmonicTable::dp(int l, int m, int i) const {
  if (m < 0) return ((-m) % 2 ? -1.0 : 1.0) * dp_[slot(l, -m, i)];
  return dp_[slot(l, m, i)];
}

double HarmonicTable::d2p(int l, int m, int i) const {
  if (m < 0) return ((-m) % 2 ? -1.0 : 1.0) * d2p_[slot(l, -m, i)];
  return d2p_[slot(l, m, i)];
}

// --- Transforms --------------------------------------------------------------

ScalarField eval_ylm(HarmonicIndex idx, const SphereGrid& grid) {
  if (!idx.valid()) throw std::invalid_argument("eval_ylm: requires |m| <= l");
  if (idx.l > grid.max_degree()) {
    throw ResolutionError("eval_ylm: degree " + std::to_string(idx.l) + " exceeds grid limit " +
                          std::to_string(grid.max_degree()));
  }
  ScalarField f(1, grid);
  const int am = std::abs(idx.m);
  const double sign = (idx.m < 0 && am % 2) ? -1.0 : 1.0;
  for (int i = 0; i < grid.n_theta(); ++i) {
    const auto p = normalized_legendre(idx.l, grid.cos_theta()[static_cast<std::size_t>(i)]);
    const double v = sign * p[static_cast<std::size_t>(idx.l * (idx.l + 1) / 2 + am)];
    for (int j = 0; j < grid.n_phi(); ++j) f(0, i, j) = std::polar(v, idx.m * grid.phi()[static_cast<std::size_t>(j)]);
  }
  return f;
}

HarmonicCoefficients analyze(const ScalarField& f, const SphereGrid& grid, int l_max) {
  require_on_grid(f, grid);
  l_max = resolve_degree(l_max, grid);
  const HarmonicTable table(grid, l_max);
  const auto phase = phase_table(grid, l_max);
  const int np = grid.n_phi();
  const int width = 2 * l_max + 1;

  HarmonicCoefficients out;
  out.l_max = l_max;
  out.layers.resize(static_cast<std::size_t>(f.layers));
  std::vector<complex> fm(static_cast<std::size_t>(width));
  for (int k = 0; k < f.layers; ++k) {
    auto& c = out.layers[static_cast<std::size_t>(k)];
    c.assign(packed_index(l_max, l_max) + 1, complex{});
    for (int i = 0; i < grid.n_theta(); ++i) {
      std::fill(fm.begin(), fm.end(), complex{});
      for (int j = 0; j < np; ++j) {
        const complex v = f(k, i, j);
        for (int m = -l_max; m <= l_max; ++m) {
          fm[static_cast<std::size_t>(m + l_max)] += v * std::conj(phase[static_cast<std::size_t>(j * width + m + l_max)]);
        }
      }
      const double w = grid.unit_weight(i);
      for (int l = 0; l <= l_max; ++l) {
        for (int m = -l; m <= l; ++m) c[packed_index(l, m)] += w * table.p(l, m, i) * fm[static_cast<std::size_t>(m + l_max)];
      }
    }
  }
  return out;
}

ScalarField synthesize(const HarmonicCoefficients& c, const SphereGrid& grid) {
  if (c.l_max > grid.max_degree()) throw ResolutionError("synthesize: coefficients exceed grid resolution");
  const HarmonicTable table(grid, c.l_max);
  const auto phase = phase_table(grid, c.l_max);
  const int width = 2 * c.l_max + 1;
  ScalarField f(static_cast<int>(c.layers.size()), grid);
  for (int k = 0; k < f.layers; ++k) {
    const auto s = theta_sums(c.layers[static_cast<std::size_t>(k)], table, c.l_max);
    for (int i = 0; i < grid.n_theta(); ++i) {
      for (int j = 0; j < grid.n_phi(); ++j) {
        complex acc{};
        for (int m = -c.l_max; m <= c.l_max; ++m) {
          acc += s.p[s.at(i, m)] * phase[static_cast<std::size_t>(j * width + m + c.l_max)];
        }
        f(k, i, j) = acc;
      }
    }
  }
  return f;
}

ScalarJet angular_jet(const ScalarField& f, const SphereGrid& grid) {
  const auto c = analyze(f, grid);
  const HarmonicTable table(grid, c.l_max);
  const auto phase = phase_table(grid, c.l_max);
  const int L = c.l_max;
  const int width = 2 * L + 1;
  ScalarJet jet(f.layers, grid);
  for (int k = 0; k < f.layers; ++k) {
    const auto s = theta_sums(c.layers[static_cast<std::size_t>(k)], table, L);
    for (int i = 0; i < grid.n_theta(); ++i) {
      for (int j = 0; j < grid.n_phi(); ++j) {
        complex v{}, dt{}, dph{};
        for (int m = -L; m <= L; ++m) {
          const complex e = phase[static_cast<std::size_t>(j * width + m + L)];
          v += s.p[s.at(i, m)] * e;
          dt += s.dp[s.at(i, m)] * e;
          dph += complex(0.0, m) * s.p[s.at(i, m)] * e;
        }
        jet.value(k, i, j) = v;
        jet.d_theta(k, i, j) = dt;
        jet.d_phi(k, i, j) = dph;
      }
    }
  }
  return jet;
}

// --- Differential operators --------------------------------------------------

VectorField grad_sphere(const ScalarField& f, const SphereGrid& grid) {
  const auto jet = angular_jet(f, grid);
  VectorField v(f.layers, grid);
  const double r = grid.r();
  for (int k = 0; k < f.layers; ++k) {
    for (int i = 0; i < grid.n_theta(); ++i) {
      const double s = grid.sin_theta()[static_cast<std::size_t>(i)];
      for (int j = 0; j < grid.n_phi(); ++j) {
        v.theta(k, i, j) = jet.d_theta(k, i, j) / r;
        v.phi(k, i, j) = jet.d_phi(k, i, j) / (r * s);
      }
    }
  }
  return v;
}

VectorField curl_sphere(const ScalarField& f, const SphereGrid& grid) {
  const auto jet = angular_jet(f, grid);
  VectorField v(f.layers, grid);
  const double r = grid.r();
  for (int k = 0; k < f.layers; ++k) {
    for (int i = 0; i < grid.n_theta(); ++i) {
      const double s = grid.sin_theta()[static_cast<std::size_t>(i)];
      for (int j = 0; j < grid.n_phi(); ++j) {
        v.theta(k, i, j) = jet.d_phi(k, i, j) / (r * s);
        v.phi(k, i, j) = -jet.d_theta(k, i, j) / r;
      }
    }
  }
  return v;
}

HodgePotentials hodge_decompose(const VectorField& v, const SphereGrid& grid, int l_max) {
  require_on_grid(v.theta, grid);
  require_same_shape(v.theta, v.phi);
  l_max = resolve_degree(l_max, grid);
  const HarmonicTable table(grid, l_max);
  const auto phase = phase_table(grid, l_max);
  const int width = 2 * l_max + 1;
  const double r = grid.r();

  HodgePotentials h;
  h.gradient.l_max = h.curl.l_max = l_max;
  h.gradient.layers.resize(static_cast<std::size_t>(v.theta.layers));
  h.curl.layers.resize(static_cast<std::size_t>(v.theta.layers));
  std::vector<complex> ft(static_cast<std::size_t>(width)), fp(static_cast<std::size_t>(width));
  for (int k = 0; k < v.theta.layers; ++k) {
    auto& a = h.gradient.layers[static_cast<std::size_t>(k)];
    auto& b = h.curl.layers[static_cast<std::size_t>(k)];
    a.assign(packed_index(l_max, l_max) + 1, complex{});
    b.assign(a.size(), complex{});
    for (int i = 0; i < grid.n_theta(); ++i) {
      const double s = grid.sin_theta()[static_cast<std::size_t>(i)];
      std::fill(ft.begin(), ft.end(), complex{});
      std::fill(fp.begin(), fp.end(), complex{});
      for (int j = 0; j < grid.n_phi(); ++j) {
        for (int m = -l_max; m <= l_max; ++m) {
          const complex e = std::conj(phase[static_cast<std::size_t>(j * width + m + l_max)]);
          ft[static_cast<std::size_t>(m + l_max)] += v.theta(k, i, j) * e;
          fp[static_cast<std::size_t>(m + l_max)] += v.phi(k, i, j) * e;
        }
      }
      const double w = grid.unit_weight(i);
      for (int l = 1; l <= l_max; ++l) {
        const double eig = l * (l + 1.0) / (r * r);
        for (int m = -l; m <= l; ++m) {
          const complex vt = ft[static_cast<std::size_t>(m + l_max)];
          const complex vp = fp[static_cast<std::size_t>(m + l_max)];
          const double p = table.p(l, m, i);
          const double dp = table.dp(l, m, i);
          // <v, grad Y> and <v, curl Y>; conj(i m) = -i m.
          const complex g = (vt * dp + vp * complex(0.0, -m) * p / s) / r;
          const complex c = (vt * complex(0.0, -m) * p / s - vp * dp) / r;
          a[packed_index(l, m)] += w * g / eig;
          b[packed_index(l, m)] += w * c / eig;
        }
      }
    }
  }
  return h;
}

VectorJet hodge_jet(const HodgePotentials& h, const SphereGrid& grid) {
  const int L = h.gradient.l_max;
  if (L > grid.max_degree()) throw ResolutionError("hodge_jet: potentials exceed grid resolution");
  const HarmonicTable table(grid, L);
  const auto phase = phase_table(grid, L);
  const int width = 2 * L + 1;
  const double r = grid.r();
  const int layers = static_cast<int>(h.gradient.layers.size());
  VectorJet jet(layers, grid);
  for (int k = 0; k < layers; ++k) {
    const auto sa = theta_sums(h.gradient.layers[static_cast<std::size_t>(k)], table, L);
    const auto sb = theta_sums(h.curl.layers[static_cast<std::size_t>(k)], table, L);
    for (int i = 0; i < grid.n_theta(); ++i) {
      const double s = grid.sin_theta()[static_cast<std::size_t>(i)];
      const double c = grid.cos_theta()[static_cast<std::size_t>(i)];
      for (int j = 0; j < grid.n_phi(); ++j) {
        complex vt{}, vp{}, vt_t{}, vt_p{}, vp_t{}, vp_p{};
        for (int m = -L; m <= L; ++m) {
          const complex e = phase[static_cast<std::size_t>(j * width + m + L)];
          const complex im(0.0, m);
          const std::size_t q = sa.at(i, m);
          const complex a = sa.p[q], da = sa.dp[q], d2a = sa.d2p[q];
          const complex b = sb.p[q], db = sb.dp[q], d2b = sb.d2p[q];
          vt += (da + im * b / s) * e;
          vp += (im * a / s - db) * e;
          vt_t += (d2a + im * (db / s - c * b / (s * s))) * e;
          vt_p += (im * da - double(m * m) * b / s) * e;
          vp_t += (im * (da / s - c * a / (s * s)) - d2b) * e;
          vp_p += (-double(m * m) * a / s - im * db) * e;
        }
        jet.theta.value(k, i, j) = vt / r;
        jet.theta.d_theta(k, i, j) = vt_t / r;
        jet.theta.d_phi(k, i, j) = vt_p / r;
        jet.phi.value(k, i, j) = vp / r;
        jet.phi.d_theta(k, i, j) = vp_t / r;
        jet.phi.d_phi(k, i, j) = vp_p / r;
      }
    }
  }
  return jet;
}

ScalarField div_sphere(const VectorField& v, const SphereGrid& grid) {
  auto h = hodge_decompose(v, grid);
  const double r = grid.r();
  for (auto& layer : h.gradient.layers) {
    for (int l = 0; l <= h.gradient.l_max; ++l) {
      for (int m = -l; m <= l; ++m) layer[packed_index(l, m)] *= -l * (l + 1.0) / (r * r);
    }
  }
  return synthesize(h.gradient, grid);
}

ScalarField laplacian_sphere(const ScalarField& f, const SphereGrid& grid) {
  auto c = analyze(f, grid);
  const double r = grid.r();
  for (auto& layer : c.layers) {
    for (int l = 0; l <= c.l_max; ++l) {
      for (int m = -l; m <= l; ++m) layer[packed_index(l, m)] *= -l * (l + 1.0) / (r * r);
    }
  }
  return synthesize(c, grid);
}

// --- Advection ---------------------------------------------------------------

ScalarField advect(const VectorField& u, const ScalarJet& t, const SphereGrid& grid) {
  require_same_shape(u.theta, t.value);
  require_on_grid(u.theta, grid);
  ScalarField out(u.theta.layers, grid);
  const double r = grid.r();
  for (int k = 0; k < out.layers; ++k) {
    for (int i = 0; i < grid.n_theta(); ++i) {
      const double s = grid.sin_theta()[static_cast<std::size_t>(i)];
      for (int j = 0; j < grid.n_phi(); ++j) {
        out(k, i, j) = (u.theta(k, i, j) * t.d_theta(k, i, j) + u.phi(k, i, j) / s * t.d_phi(k, i, j)) / r;
      }
    }
  }
  return out;
}

VectorField advect(const VectorField& u, const VectorJet& v, const SphereGrid& grid) {
  require_same_shape(u.theta, v.theta.value);
  require_on_grid(u.theta, grid);
  VectorField out(u.theta.layers, grid);
  const double r = grid.r();
  for (int k = 0; k < u.theta.layers; ++k) {
    for (int i = 0; i < grid.n_theta(); ++i) {
      const double s = grid.sin_theta()[static_cast<std::size_t>(i)];
      const double cot = grid.cos_theta()[static_cast<std::size_t>(i)] / s;
      for (int j = 0; j < grid.n_phi(); ++j) {
        const complex ut = u.theta(k, i, j);
        const complex up = u.phi(k, i, j);
        out.theta(k, i, j) =
            (ut * v.theta.d_theta(k, i, j) + up / s * v.theta.d_phi(k, i, j) - up * v.phi.value(k, i, j) * cot) / r;
        out.phi(k, i, j) =
            (ut * v.phi.d_theta(k, i, j) + up / s * v.phi.d_phi(k, i, j) + up * v.theta.value(k, i, j) * cot) / r;
      }
    }
  }
  return out;
}

ScalarField advect(const VectorField& u, const ScalarField& t, const SphereGrid& grid) {
  return advect(u, angular_jet(t, grid), grid);
}

VectorField advect(const VectorField& u, const VectorField& v, const SphereGrid& grid) {
  return advect(u, hodge_jet(hodge_decompose(v, grid), grid), grid);
}

// --- Quadrature --------------------------------------------------------------

complex quad_unit_sphere(const ScalarField& f, const SphereGrid& grid, int layer) {
  require_on_grid(f, grid);
  if (layer < 0 || layer >= f.layers) throw std::out_of_range("quad_unit_sphere: layer");
  complex acc{};
  for (int i = 0; i < grid.n_theta(); ++i) {
    complex row{};
    for (int j = 0; j < grid.n_phi(); ++j) row += f(layer, i, j);
    acc += grid.unit_weight(i) * row;
  }
  return acc;
}

complex quad_sphere(const ScalarField& f, const SphereGrid& grid, int layer) {
  return grid.r() * grid.r() * quad_unit_sphere(f, grid, layer);
}

complex quad_shell(const ScalarField& f, const SphereGrid& grid) {
  if (f.layers != grid.n_z()) throw std::invalid_argument("quad_shell: need one layer per vertical node");
  complex acc{};
  for (int k = 0; k < f.layers; ++k) acc += grid.z_weights()[static_cast<std::size_t>(k)] * quad_sphere(f, grid, k);
  return acc;
}

complex inner_shell(const ScalarField& f, const ScalarField& g, const SphereGrid& grid) {
  require_same_shape(f, g);
  require_on_grid(f, grid);
  if (f.layers != grid.n_z()) throw std::invalid_argument("inner_shell: need one layer per vertical node");
  complex acc{};
  for (int k = 0; k < f.layers; ++k) {
    complex layer{};
    for (int i = 0; i < grid.n_theta(); ++i) {
      complex row{};
      for (int j = 0; j < grid.n_phi(); ++j) row += f(k, i, j) * std::conj(g(k, i, j));
      layer += grid.unit_weight(i) * row;
    }
    acc += grid.z_weights()[static_cast<std::size_t>(k)] * layer;
  }
  return grid.r() * grid.r() * acc;
}

complex inner_shell(const VectorField& f, const VectorField& g, const SphereGrid& grid) {
  return inner_shell(f.theta, g.theta, grid) + inner_shell(f.phi, g.phi, grid);
}

}  // namespace shellconv
