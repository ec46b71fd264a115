#include "shellconv/dynamics.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace shellconv {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

double sign_pow(int m) { return (std::abs(m) % 2) ? -1.0 : 1.0; }

void check_dimension(const AmplitudeEquation& eq, std::size_t n) {
  if (n != static_cast<std::size_t>(real_dimension(eq.l_c))) {
    throw std::invalid_argument("state dimension does not match l_c");
  }
}

double sum_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return s;
}

// d x_a / d s_j for the real chart, indexed [a + l_c][j].
std::vector<std::vector<complex>> chart_derivative(int l_c) {
  const auto dim = static_cast<std::size_t>(real_dimension(l_c));
  std::vector<std::vector<complex>> a(dim, std::vector<complex>(dim));
  a[static_cast<std::size_t>(l_c)][0] = 1.0;
  for (int m = 1; m <= l_c; ++m) {
    const auto y = static_cast<std::size_t>(2 * m - 1), z = static_cast<std::size_t>(2 * m);
    const double s = sign_pow(m);
    a[static_cast<std::size_t>(l_c + m)][y] = inv_sqrt2;
    a[static_cast<std::size_t>(l_c + m)][z] = complex(0.0, inv_sqrt2);
    a[static_cast<std::size_t>(l_c - m)][y] = s * inv_sqrt2;
    a[static_cast<std::size_t>(l_c - m)][z] = complex(0.0, -s * inv_sqrt2);
  }
  return a;
}

}  // namespace

// --- ReducedState ------------------------------------------------------------

std::vector<double> ReducedState::real_coordinates() const {
  std::vector<double> c(static_cast<std::size_t>(real_dimension(l_c)));
  c[0] = x[0].real();
  for (int m = 1; m <= l_c; ++m) {
    c[static_cast<std::size_t>(2 * m - 1)] = std::numbers::sqrt2 * x[static_cast<std::size_t>(m)].real();
    c[static_cast<std::size_t>(2 * m)] = std::numbers::sqrt2 * x[static_cast<std::size_t>(m)].imag();
  }
  return c;
}

ReducedState ReducedState::from_real(int l_c, const std::vector<double>& coords, double time) {
  if (coords.size() != static_cast<std::size_t>(real_dimension(l_c))) {
    throw std::invalid_argument("real coordinates do not match l_c");
  }
  ReducedState s(l_c);
  s.time = time;
  s.x[0] = coords[0];
  for (int m = 1; m <= l_c; ++m) {
    s.x[static_cast<std::size_t>(m)] =
        complex(coords[static_cast<std::size_t>(2 * m - 1)], coords[static_cast<std::size_t>(2 * m)]) * inv_sqrt2;
  }
  return s;
}

Amplitudes ReducedState::amplitudes() const {
  std::vector<complex> head(x);
  head[0] = head[0].real();
  return real_amplitudes(head);
}

double ReducedState::radial() const {
  double n = x[0].real() * x[0].real();
  for (int m = 1; m <= l_c; ++m) n += 2.0 * std::norm(x[static_cast<std::size_t>(m)]);
  return n;
}

ReducedState ReducedState::rotated(double phi) const {
  ReducedState out = *this;
  for (int m = 1; m <= l_c; ++m) out.x[static_cast<std::size_t>(m)] *= std::polar(1.0, m * phi);
  return out;
}

// --- Vector field ------------------------------------------------------------

AmplitudeEquation AmplitudeEquation::from_model(const ReducedModel& model, double lambda, bool full_cubic) {
  AmplitudeEquation eq;
  eq.l_c = model.l_c;
  eq.beta = model.beta_plus(lambda);
  eq.q = model.q;
  eq.full_cubic = full_cubic;
  if (full_cubic) eq.cubic = model.cubic;
  return eq;
}

ReducedState vector_field(const AmplitudeEquation& eq, const ReducedState& s) {
  if (s.l_c != eq.l_c) throw std::invalid_argument("state l_c does not match the model");
  ReducedState f(eq.l_c);
  f.time = s.time;
  if (eq.full_cubic) {
    const Amplitudes x = s.amplitudes();
    for (int m = 0; m <= eq.l_c; ++m) {
      f.x[static_cast<std::size_t>(m)] =
          eq.beta * x[static_cast<std::size_t>(m + eq.l_c)] + evaluate(eq.cubic[static_cast<std::size_t>(m + eq.l_c)], x, eq.l_c);
    }
  } else {
    const double g = eq.beta - eq.q * s.radial();
    for (int m = 0; m <= eq.l_c; ++m) f.x[static_cast<std::size_t>(m)] = g * s.x[static_cast<std::size_t>(m)];
  }
  f.x[0] = f.x[0].real();
  return f;
}

std::vector<double> vector_field(const AmplitudeEquation& eq, const std::vector<double>& coords) {
  check_dimension(eq, coords.size());
  if (!eq.full_cubic) {
    const double g = eq.beta - eq.q * sum_sq(coords);
    std::vector<double> f(coords);
    for (double& v : f) v *= g;
    return f;
  }
  return vector_field(eq, ReducedState::from_real(eq.l_c, coords)).real_coordinates();
}

std::vector<double> jacobian(const AmplitudeEquation& eq, const std::vector<double>& coords) {
  check_dimension(eq, coords.size());
  const std::size_t n = coords.size();
  std::vector<double> j(n * n, 0.0);
  if (!eq.full_cubic) {
    const double g = eq.beta - eq.q * sum_sq(coords);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) j[a * n + b] = (a == b ? g : 0.0) - 2.0 * eq.q * coords[a] * coords[b];
    }
    return j;
  }
  const int l_c = eq.l_c;
  const Amplitudes x = ReducedState::from_real(l_c, coords).amplitudes();
  const auto dx = chart_derivative(l_c);
  // dF_m/dx_k for m >= 0
  std::vector<std::vector<complex>> df(static_cast<std::size_t>(l_c + 1), std::vector<complex>(n));
  auto at = [&](int m) { return x[static_cast<std::size_t>(m + l_c)]; };
  for (int m = 0; m <= l_c; ++m) {
    auto& row = df[static_cast<std::size_t>(m)];
    row[static_cast<std::size_t>(m + l_c)] += eq.beta;
    for (const auto& [k, c] : eq.cubic[static_cast<std::size_t>(m + l_c)]) {
      row[static_cast<std::size_t>(k[0] + l_c)] += c * at(k[1]) * at(k[2]);
      row[static_cast<std::size_t>(k[1] + l_c)] += c * at(k[0]) * at(k[2]);
      row[static_cast<std::size_t>(k[2] + l_c)] += c * at(k[0]) * at(k[1]);
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<complex> d(static_cast<std::size_t>(l_c + 1));
    for (int m = 0; m <= l_c; ++m) {
      for (std::size_t k = 0; k < n; ++k) d[static_cast<std::size_t>(m)] += df[static_cast<std::size_t>(m)][k] * dx[k][col];
    }
    j[col] = d[0].real();
    for (int m = 1; m <= l_c; ++m) {
      j[static_cast<std::size_t>(2 * m - 1) * n + col] = std::numbers::sqrt2 * d[static_cast<std::size_t>(m)].real();
      j[static_cast<std::size_t>(2 * m) * n + col] = std::numbers::sqrt2 * d[static_cast<std::size_t>(m)].imag();
    }
  }
  return j;
}

// --- Integration -------------------------------------------------------------

double logistic_radial(double beta, double q, double n0, double t) {
  if (beta == 0.0) return n0 / (1.0 + 2.0 * q * n0 * t);
  const double e = std::expm1(2.0 * beta * t);
  return n0 * beta * (e + 1.0) / (beta + q * n0 * e);
}

std::vector<TrajectoryPoint> integrate(const AmplitudeEquation& eq, const ReducedState& s0, double t_end,
                                       const IntegrationOptions& opts) {
  if (!(eq.q > 0.0)) throw std::domain_error("integrate: requires q > 0");
  if (s0.l_c != eq.l_c) throw std::invalid_argument("integrate: state l_c does not match the model");
  if (!(t_end >= s0.time)) throw std::invalid_argument("integrate: t_end must not precede the initial time");
  if (!(opts.rel_tol > 0.0 && opts.abs_tol > 0.0 && opts.dt_initial > 0.0 && opts.output_dt >= 0.0)) {
    throw std::invalid_argument("integrate: tolerances and steps must be positive");
  }

  using State = std::vector<double>;
  auto system = [&eq](const State& s, State& ds, double) { ds = vector_field(eq, s); };

  std::vector<TrajectoryPoint> out;
  auto record = [&](double t, const State& s) { out.push_back({t, s, sum_sq(s)}); };

  State s = s0.real_coordinates();
  double t = s0.time;
  record(t, s);
  if (t_end == t) return out;

  auto stepper = odeint::make_dense_output(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(s, t, std::min(opts.dt_initial, t_end - t));
  std::size_t steps = 0, n_out = 1;
  State tmp(s.size());
  try {
    while (true) {
      const auto [t0, t1] = stepper.do_step(system);
      ++steps;
      if (!(t1 - t0 > 1e-14 * std::max(1.0, std::abs(t1)))) {
        std::ostringstream os;
        os << "step size underflow at t = " << t0;
        throw IntegrationError(os.str());
      }
      for (double v : stepper.current_state()) {
        if (!std::isfinite(v)) throw IntegrationError("non-finite state during integration");
      }
      if (opts.output_dt > 0.0) {
        // output times are s0.time + k dt, computed without accumulation
        for (double to = s0.time + n_out * opts.output_dt; to <= std::min(t1, t_end); to = s0.time + n_out * opts.output_dt) {
          stepper.calc_state(to, tmp);
          record(to, tmp);
          ++n_out;
        }
      } else if (t1 < t_end) {
        record(t1, stepper.current_state());
      }
      if (t1 >= t_end) {
        if (out.back().t < t_end) {
          stepper.calc_state(t_end, tmp);
          record(t_end, tmp);
        }
        break;
      }
      if (steps >= opts.max_steps) throw IntegrationError("maximum number of integration steps exceeded");
    }
  } catch (const odeint::odeint_error& e) {
    throw IntegrationError(e.what());
  }
  return out;
}

// --- Attractor ---------------------------------------------------------------

AttractorEstimate attractor(const AmplitudeEquation& eq, std::size_t n_samples, std::uint64_t seed) {
  if (!(eq.beta > 0.0) || !(eq.q > 0.0)) {
    throw std::domain_error("no bifurcated attractor: requires beta+ > 0 and q > 0");
  }
  static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73};
  const int dim = real_dimension(eq.l_c);
  if (dim > static_cast<int>(std::size(primes))) throw std::invalid_argument("attractor: l_c too large for sampling");

  // Cranley-Patterson shift of the Halton points, drawn from the seed.
  std::mt19937_64 rng(seed);
  std::vector<double> shift(static_cast<std::size_t>(dim));
  for (double& v : shift) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;

  AttractorEstimate est;
  est.radius = std::sqrt(eq.beta / eq.q);
  for (std::size_t i = 1; i <= n_samples; ++i) {
    std::vector<double> g(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) {
      double h = 0.0, f = 1.0;
      for (std::size_t k = i; k > 0; k /= static_cast<std::size_t>(primes[d])) {
        f /= primes[d];
        h += f * static_cast<double>(k % static_cast<std::size_t>(primes[d]));
      }
      double u = std::fmod(h + shift[static_cast<std::size_t>(d)], 1.0);
      u = std::clamp(u, 1e-15, 1.0 - 1e-15);
      g[static_cast<std::size_t>(d)] = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u - 1.0);
    }
    const double norm = std::sqrt(sum_sq(g));
    for (double& v : g) v *= est.radius / norm;
    const auto f = vector_field(eq, g);
    const double fn = std::sqrt(sum_sq(f));
    const double sn = std::sqrt(sum_sq(g));
    est.samples.push_back(ReducedState::from_real(eq.l_c, g));
    est.field_norm.push_back(fn);
    est.steady.push_back(fn < 1e-10 * std::max(1.0, sn * sn * sn));
  }
  return est;
}

// --- Reconstruction ----------------------------------------------------------

ShellJet reconstruct(const CenterManifoldCoeffs& coeffs, const ReducedState& s, const SphereGrid& grid) {
  if (coeffs.l_c != s.l_c) throw std::invalid_argument("reconstruct: l_c mismatch between coefficients and state");
  const int l_c = s.l_c;
  if (grid.max_degree() < 2 * l_c) throw ResolutionError("reconstruct: grid cannot resolve degree 2 l_c");
  const HarmonicTable table(grid, 2 * l_c);
  const Amplitudes x = s.amplitudes();
  ShellJet out(grid);
  for (int m = -l_c; m <= l_c; ++m) {
    const complex a = x[static_cast<std::size_t>(m + l_c)];
    if (a == complex{}) continue;
    out.axpy(a, eigenfunction(coeffs.params, {Branch::plus, l_c, m, 1}, table));
  }
  for (const auto& mode : coeffs.nonzero_modes()) {
    const complex y = coeffs.evaluate(mode, x);
    if (y == complex{}) continue;
    out.axpy(y, eigenfunction(coeffs.params, mode, table));
  }
  return out;
}

}  // namespace shellconv
