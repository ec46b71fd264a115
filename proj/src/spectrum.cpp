#include "shellconv/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace shellconv {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
}  // namespace

void PhysicalParams::validate() const {
  if (!(prandtl > 0.0)) throw std::invalid_argument("Prandtl number must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("aspect ratio r must be positive");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  if (!(sigma0 >= 0.0) || !(sigma1 >= 0.0)) throw std::invalid_argument("friction coefficients must be non-negative");
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::toroidal: return "toroidal";
    case Branch::thermal: return "thermal";
    case Branch::plus: return "plus";
    case Branch::minus: return "minus";
  }
  return "?";
}

Branch parse_branch(const std::string& s) {
  if (s == "toroidal") return Branch::toroidal;
  if (s == "thermal") return Branch::thermal;
  if (s == "plus") return Branch::plus;
  if (s == "minus") return Branch::minus;
  throw std::invalid_argument("unknown branch '" + s + "'");
}

bool ModeIndex::valid() const {
  if (std::abs(m) > l) return false;
  switch (branch) {
    case Branch::toroidal: return n == 0 && l >= 1;
    case Branch::thermal: return l == 0 && m == 0 && n >= 1;
    case Branch::plus:
    case Branch::minus: return l >= 1 && n >= 1;
  }
  return false;
}

void ModeIndex::require_valid() const {
  if (!valid()) throw std::domain_error("invalid mode index " + key());
}

std::string ModeIndex::key() const {
  std::ostringstream os;
  os << to_string(branch) << ':' << l << ':' << m << ':' << n;
  return os.str();
}

ModeIndex ModeIndex::parse(const std::string& key) {
  std::istringstream is(key);
  std::string branch;
  std::getline(is, branch, ':');
  ModeIndex idx;
  idx.branch = parse_branch(branch);
  char c1 = 0, c2 = 0;
  is >> idx.l >> c1 >> idx.m >> c2 >> idx.n;
  if (!is || c1 != ':' || c2 != ':') throw std::invalid_argument("malformed mode key '" + key + "'");
  return idx;
}

double alpha_sq(int l, double r) { return l * (l + 1.0) / (r * r); }

double gamma_sq(int l, int n, double r) { return n * n * kPi2 + alpha_sq(l, r); }

PoloidalQuadratic poloidal_quadratic(const PhysicalParams& p, int l, int n) {
  const double a2 = alpha_sq(l, p.r);
  const double g2 = gamma_sq(l, n, p.r);
  const double s = p.sigma1 * a2 + p.sigma0 * n * n * kPi2;
  return {g2 * (1.0 + p.prandtl) + p.prandtl * s / g2, g2 * g2 - p.lambda * p.lambda * a2 / g2 + s};
}

std::pair<double, double> poloidal_betas(const PhysicalParams& p, int l, int n) {
  const auto q = poloidal_quadratic(p, l, n);
  // The discriminant is a perfect square plus a non-negative term; clamp rounding.
  const double disc = std::max(0.0, q.d * q.d - 4.0 * p.prandtl * q.e);
  const double minus = -0.5 * (q.d + std::sqrt(disc));
  const double plus = p.prandtl * q.e / minus;
  return {plus, minus};
}

double temperature_amplitude(const PhysicalParams& p, int l, int n, double beta) {
  return p.lambda * alpha_sq(l, p.r) / (beta + gamma_sq(l, n, p.r));
}

EigenPair eigenvalue(const PhysicalParams& params, const ModeIndex& idx) {
  idx.require_valid();
  EigenPair e;
  e.index = idx;
  e.alpha_sq = alpha_sq(idx.l, params.r);
  e.gamma_sq = gamma_sq(idx.l, idx.n, params.r);
  switch (idx.branch) {
    case Branch::toroidal: e.beta = -params.prandtl * (e.alpha_sq + params.sigma0); break;
    case Branch::thermal: e.beta = -idx.n * idx.n * kPi2; break;
    case Branch::plus:
    case Branch::minus: {
      const auto [bp, bm] = poloidal_betas(params, idx.l, idx.n);
      e.beta = idx.branch == Branch::plus ? bp : bm;
      e.b = temperature_amplitude(params, idx.l, idx.n, e.beta);
      break;
    }
  }
  return e;
}

std::vector<EigenPair> spectrum_scan(const PhysicalParams& params, int l_max, int n_max) {
  params.validate();
  std::vector<EigenPair> out;
  for (int n = 1; n <= n_max; ++n) out.push_back(eigenvalue(params, {Branch::thermal, 0, 0, n}));
  for (int l = 1; l <= l_max; ++l) {
    for (int m = -l; m <= l; ++m) {
      out.push_back(eigenvalue(params, {Branch::toroidal, l, m, 0}));
      for (int n = 1; n <= n_max; ++n) {
        out.push_back(eigenvalue(params, {Branch::plus, l, m, n}));
        out.push_back(eigenvalue(params, {Branch::minus, l, m, n}));
      }
    }
  }
  return out;
}

double neutral_lambda(const PhysicalParams& p, int l, int n) {
  const double a2 = alpha_sq(l, p.r);
  const double g2 = gamma_sq(l, n, p.r);
  return std::sqrt(g2 * (g2 * g2 + p.sigma1 * a2 + p.sigma0 * n * n * kPi2) / a2);
}

int default_scan_limit(double r) { return 10 * static_cast<int>(std::ceil(r)) + 20; }

CriticalPoint critical_rayleigh(const PhysicalParams& params, int l_scan) {
  PhysicalParams p = params;
  p.lambda = 0.0;
  p.validate();
  if (l_scan < 2) l_scan = default_scan_limit(p.r);

  // lambda^2 as a function of alpha^2 is s^2 + c1 s + c2/s + c0 with c1, c2 > 0:
  // strictly convex, so the sampled sequence over l is unimodal and the scan may
  // stop once it has increased past the minimum.
  std::vector<double> obj{std::numeric_limits<double>::infinity()};
  int l = 1;
  for (;; ++l) {
    obj.push_back(neutral_lambda(p, l, 1));
    if (l >= l_scan && obj[static_cast<std::size_t>(l)] > obj[static_cast<std::size_t>(l - 1)]) break;
  }

  CriticalPoint cp;
  cp.scanned_up_to = l;
  const auto best = std::min_element(obj.begin() + 1, obj.end());
  cp.l_c = static_cast<int>(best - obj.begin());
  cp.lambda_c = *best;
  for (int nb : {cp.l_c - 1, cp.l_c + 1}) {
    if (nb < 1 || nb >= static_cast<int>(obj.size())) continue;
    const double other = obj[static_cast<std::size_t>(nb)];
    if (std::abs(other - cp.lambda_c) <= 1e-9 * cp.lambda_c) {
      cp.degenerate = true;
      cp.tied_l = nb;
    }
  }
  return cp;
}

PesReport pes_check(const PhysicalParams& params, int l_max, int n_max, double zero_tol, double margin) {
  params.validate();
  if (l_max < 1 || n_max < 1) throw std::invalid_argument("pes_check: scan bounds must be positive");
  PesReport rep;
  rep.lambda = params.lambda;
  rep.l_max = l_max;
  rep.n_max = n_max;
  rep.critical = critical_rayleigh(params);
  if (rep.critical.degenerate) {
    std::ostringstream os;
    os << "critical degree is degenerate: l = " << rep.critical.l_c << " and l = " << rep.critical.tied_l
       << " share lambda_c = " << rep.critical.lambda_c;
    throw DegeneracyError(os.str());
  }
  const int lc = rep.critical.l_c;
  if (lc > l_max) throw std::invalid_argument("pes_check: scan must include the critical degree");

  const double rel = std::abs(params.lambda - rep.critical.lambda_c) / rep.critical.lambda_c;
  rep.regime = rel <= 1e-12 ? "at" : (params.lambda < rep.critical.lambda_c ? "below" : "above");

  rep.max_other = -std::numeric_limits<double>::infinity();
  for (const auto& e : spectrum_scan(params, l_max, n_max)) {
    const auto& idx = e.index;
    const bool critical_family = idx.branch == Branch::plus && idx.l == lc && idx.n == 1;
    if (std::abs(e.beta) <= zero_tol) {
      ++rep.zero_count;
      rep.zero_modes.push_back(idx);
    } else if (e.beta > 0.0) {
      ++rep.positive_count;
      rep.positive_modes.push_back(idx);
    }
    if (!critical_family) rep.max_other = std::max(rep.max_other, e.beta);
  }

  // Outside the scan: E > 0 (hence beta_plus < 0) whenever gamma^2 > lambda,
  // because gamma^6 > lambda^2 gamma^2 >= lambda^2 alpha^2. gamma^2 grows with l and n.
  rep.tail_gamma_sq = std::min(gamma_sq(l_max + 1, 1, params.r), gamma_sq(1, n_max + 1, params.r));
  rep.tail_certified = rep.tail_gamma_sq > params.lambda;

  const int multiplicity = 2 * lc + 1;
  const bool others_negative = rep.max_other < -margin;
  bool family_ok = false;
  if (rep.regime == "at") {
    family_ok = rep.zero_count == multiplicity && rep.positive_count == 0;
  } else if (rep.regime == "below") {
    family_ok = rep.zero_count == 0 && rep.positive_count == 0;
  } else {
    family_ok = rep.zero_count == 0 && rep.positive_count == multiplicity &&
                std::all_of(rep.positive_modes.begin(), rep.positive_modes.end(), [lc](const ModeIndex& m) {
                  return m.branch == Branch::plus && m.l == lc && m.n == 1;
                });
  }
  rep.holds = family_ok && others_negative && rep.tail_certified;
  return rep;
}

int friction_selected_degree(double r, double sigma0, double sigma1) {
  PhysicalParams p;
  p.r = r;
  p.sigma0 = sigma0;
  p.sigma1 = sigma1;
  return critical_rayleigh(p).l_c;
}

PatternSelection friction_ratio_for_pattern(double a, double h, int l_c, double sigma0) {
  if (l_c < 1) throw std::invalid_argument("pattern degree l_c must be >= 1");
  if (!(h > 0.0) || !(a > h)) throw std::invalid_argument("require 0 < h < a");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be positive");

  PatternSelection s;
  s.requested_l = l_c;
  s.aspect = h / a;
  s.alpha_sq = s.aspect * s.aspect * l_c * (l_c + 1.0);
  const double root = s.alpha_sq / kPi2;
  s.ratio = root * root;
  s.half_prefactor_ratio = 4.0 * root * root;
  s.sigma0 = sigma0;
  s.sigma1 = sigma0 / s.ratio;

  const double r = a / h;
  s.selected_l = friction_selected_degree(r, s.sigma0, s.sigma1);
  s.half_prefactor_selected_l = friction_selected_degree(r, sigma0, sigma0 / s.half_prefactor_ratio);
  s.consistent = s.selected_l == l_c;
  return s;
}

}  // namespace shellconv
