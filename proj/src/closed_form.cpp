#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "shellconv/reduction.hpp"

namespace shellconv {

namespace {

constexpr double pi = std::numbers::pi;

double critical_lambda_at(double prandtl, double r) {
  PhysicalParams p;
  p.prandtl = prandtl;
  p.r = r;
  return critical_rayleigh(p).lambda_c;
}

std::pair<double, double> betas_at(double prandtl, double r, double lambda, int l, int n) {
  PhysicalParams p;
  p.prandtl = prandtl;
  p.r = r;
  p.lambda = lambda;
  return poloidal_betas(p, l, n);
}

ModeIndex stable(Branch b, int l, int m) { return {b, l, m, 2}; }

}  // namespace

double closed_form_q1(double pr) {
  const double num = 17787.0 + 355912.0 * pr - 669713.0 * pr * pr + 387787.0 * pr * pr * pr;
  const double den = 400000.0 * pr * (353.0 - 625.0 * pr + 353.0 * pr * pr);
  return 3.0 * pi * pi * pi * num / den;
}

double closed_form_q2() { return 2291405.0 * pi * pi * pi / 214754176.0; }

ClosedFormTable closed_form_coefficients(double pr, int l_c) {
  if (!(pr > 0.0)) throw std::invalid_argument("closed_form_coefficients: Pr must be positive");
  ClosedFormTable t;
  t.l_c = l_c;
  t.prandtl = pr;
  const double pi52 = std::pow(pi, 2.5);
  if (l_c == 1) {
    const double A = std::sqrt(11.0) * std::sqrt(1331.0 - 2338.0 * pr + 1331.0 * pr * pr);
    t.A = A;
    t.d1_plus = 3.0 * std::sqrt(3.0 / 10.0) * pi52 * (121.0 - 121.0 * pr + A) * (187.0 - 121.0 * pr + A) /
                (1936.0 * (-1493.0 - 1331.0 * pr * pr - 11.0 * A + pr * (2500.0 + 11.0 * A)));
    t.d1_minus = -3.0 * std::sqrt(3.0 / 10.0) * pi52 * (-121.0 + 121.0 * pr + A) * (-187.0 + 121.0 * pr + A) /
                 (1936.0 * (1493.0 + 1331.0 * pr * pr - 11.0 * A + pr * (-2500.0 + 11.0 * A)));
    t.beta22_plus = pi * pi / 44.0 * (-121.0 - 121.0 * pr + A);
    t.beta22_minus = -pi * pi / 44.0 * (121.0 + 121.0 * pr + A);
    t.q = closed_form_q1(pr);
    t.y002_prefactor = -std::sqrt(3.0) / 64.0 * pi * pi;
    return t;
  }
  if (l_c == 2) {
    const double B = std::sqrt(81.0 - 150.0 * pr + 81.0 * pr * pr);
    const double C = std::sqrt(4913.0 - 8611.0 * pr + 4913.0 * pr * pr);
    const double s17c = std::sqrt(17.0) * C;
    t.B = B;
    t.C = C;
    t.c1_plus = std::sqrt(5.0) * pi52 * (9.0 - 9.0 * pr + B) * (15.0 - 9.0 * pr + B) /
                (672.0 * (-29.0 - 27.0 * pr * pr - 3.0 * B + pr * (52.0 + 3.0 * B)));
    t.c1_minus = -std::sqrt(5.0) * pi52 * (-9.0 + 9.0 * pr + B) * (-15.0 + 9.0 * pr + B) /
                 (672.0 * (29.0 + 27.0 * pr * pr - 3.0 * B + pr * (-52.0 + 3.0 * B)));
    const double gp = 289.0 - 289.0 * pr + s17c;
    const double gm = -289.0 + 289.0 * pr + s17c;
    t.c2_plus = 3.0 * std::sqrt(5.0 / 14.0) * pi52 * (-1.0 - 153.0 / gp) / (136.0 * (1.0 + 20655.0 / (gp * gp)));
    t.c2_minus = 3.0 * std::sqrt(5.0 / 14.0) * pi52 * (-1.0 + 153.0 / gm) / (136.0 * (1.0 + 20655.0 / (gm * gm)));
    t.c3_plus = 3.0 * pi52 * (442.0 - 289.0 * pr + s17c) * (289.0 - 289.0 * pr + s17c) /
                (16184.0 * (-11041.0 - 9826.0 * pr * pr - 34.0 * s17c + pr * (18437.0 + 34.0 * s17c)));
    t.c3_minus = -3.0 * pi52 * (-442.0 + 289.0 * pr + s17c) * (-289.0 + 289.0 * pr + s17c) /
                 (16184.0 * (11041.0 + 9826.0 * pr * pr - 34.0 * s17c + pr * (-18437.0 + 34.0 * s17c)));
    const double r = optimal_aspect_ratio(2);
    const double lambda = critical_lambda_at(pr, r);
    std::tie(t.beta22_plus, t.beta22_minus) = betas_at(pr, r, lambda, 2, 2);
    std::tie(t.beta42_plus, t.beta42_minus) = betas_at(pr, r, lambda, 4, 2);
    if (std::abs(pr - 1.0) < 1e-12) t.q = closed_form_q2();
    t.y002_prefactor = -std::sqrt(3.0) / 16.0 * std::pow(pi, 4);
    return t;
  }
  throw std::invalid_argument("closed_form_coefficients: closed forms exist only for l_c = 1 and 2");
}

std::map<ModeIndex, QuadraticForm> closed_form_forms(const ClosedFormTable& t, ClosedFormReading reading) {
  std::map<ModeIndex, QuadraticForm> out;
  const bool resolved = reading == ClosedFormReading::resolved;
  const double s2 = std::sqrt(2.0), s5 = std::sqrt(5.0), s6 = std::sqrt(6.0);
  if (t.l_c == 1) {
    const double w202 = resolved ? std::sqrt(2.0 / 3.0) : std::sqrt(1.5);
    for (const auto& [b, d, beta] : {std::tuple{Branch::plus, t.d1_plus, t.beta22_plus},
                                    std::tuple{Branch::minus, t.d1_minus, t.beta22_minus}}) {
      const double k = d / (-beta);
      out[stable(b, 2, -2)] = {{{-1, -1}, k}};
      out[stable(b, 2, -1)] = {{{-1, 0}, s2 * k}};
      out[stable(b, 2, 0)] = {{{0, 0}, w202 * k}, {{-1, 1}, w202 * k}};
      out[stable(b, 2, 1)] = {{{0, 1}, s2 * k}};
      out[stable(b, 2, 2)] = {{{1, 1}, k}};
    }
    out[{Branch::thermal, 0, 0, 2}] = {{{0, 0}, t.y002_prefactor}, {{-1, 1}, -2.0 * t.y002_prefactor}};
    return out;
  }
  if (t.l_c == 2) {
    struct Row {
      Branch b;
      double c1, c2, c3, beta22, beta42;
    };
    for (const Row& r : {Row{Branch::plus, t.c1_plus, t.c2_plus, t.c3_plus, t.beta22_plus, t.beta42_plus},
                         Row{Branch::minus, t.c1_minus, t.c2_minus, t.c3_minus, t.beta22_minus, t.beta42_minus}}) {
      const double k1 = r.c1 / (-r.beta22);
      const double k2 = r.c2 / (-r.beta42);
      const double k3 = r.c3 / (-r.beta42);
      out[stable(r.b, 2, -2)] = {{{-1, -1}, s6 * k1}, {{-2, 0}, -4.0 * k1}};
      out[stable(r.b, 2, -1)] = {{{-1, 0}, 2.0 * k1}, {{-2, 1}, -2.0 * s6 * k1}};
      out[stable(r.b, 2, 0)] = {{{0, 0}, 2.0 * k1}, {{-1, 1}, -2.0 * k1}, {{-2, 2}, -4.0 * k1}};
      out[stable(r.b, 2, 1)] = {{{0, 1}, 2.0 * k1}, {{-1, 2}, -2.0 * s6 * k1}};
      out[stable(r.b, 2, 2)] = {{{1, 1}, s6 * k1}, {{0, 2}, -4.0 * k1}};
      out[stable(r.b, 4, -4)] = {{{-2, -2}, k2}};
      out[stable(r.b, 4, -3)] = {{{-2, -1}, s2 * k2}};
      out[stable(r.b, 4, -2)] = {{{-1, -1}, s5 * s2 * k3}, {{-2, 0}, s5 * std::sqrt(3.0) * k3}};
      out[stable(r.b, 4, -1)] = {{{-1, 0}, s5 * s6 * k3}, {{-2, 1}, s5 * k3}};
      out[stable(r.b, 4, 0)] = {{{0, 0}, 3.0 * k3}, {{-1, 1}, 4.0 * k3}, {{-2, 2}, k3}};
      out[stable(r.b, 4, 1)] = {{{0, 1}, s5 * s6 * k3}, {{-1, 2}, s5 * k3}};
      out[stable(r.b, 4, 2)] = {{{1, 1}, s5 * s2 * k3}, {{0, 2}, s5 * std::sqrt(3.0) * k3}};
      out[stable(r.b, 4, 3)] = {{{1, 2}, s2 * k2}};
      out[stable(r.b, 4, 4)] = {{{2, 2}, k2}};
    }
    const double y = resolved ? -std::sqrt(3.0) / 64.0 * pi * pi : t.y002_prefactor;
    out[{Branch::thermal, 0, 0, 2}] = {{{0, 0}, y}, {{-1, 1}, -2.0 * y}, {{-2, 2}, 2.0 * y}};
    return out;
  }
  throw std::invalid_argument("closed_form_forms: unsupported l_c");
}

double form_difference(const QuadraticForm& a, const QuadraticForm& b) {
  double scale = 0.0, diff = 0.0;
  for (const auto& [k, c] : a) scale = std::max(scale, std::abs(c));
  for (const auto& [k, c] : b) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  for (const auto& [k, c] : a) {
    const auto it = b.find(k);
    diff = std::max(diff, std::abs(c - (it == b.end() ? complex{} : it->second)));
  }
  for (const auto& [k, c] : b) {
    if (!a.contains(k)) diff = std::max(diff, std::abs(c));
  }
  return diff / scale;
}

}  // namespace shellconv
