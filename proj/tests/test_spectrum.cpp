#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shellconv/modes.hpp"
#include "shellconv/spectrum.hpp"

using namespace shellconv;

namespace {

constexpr double pi = std::numbers::pi;
const double r1 = 2.0 / pi;
const double r2 = 2.0 * std::sqrt(3.0) / pi;

PhysicalParams params(double pr, double r, double lambda = 0.0, double s0 = 0.0, double s1 = 0.0) {
  PhysicalParams p;
  p.prandtl = pr;
  p.r = r;
  p.lambda = lambda;
  p.sigma0 = s0;
  p.sigma1 = s1;
  return p;
}

// r at which degrees 1 and 2 give the same neutral lambda, by bisection on the
// frictionless objective (pi^2 + s)^3 / s.
double tie_radius() {
  auto gap = [](double r) {
    auto f = [](double s) { return std::pow(pi * pi + s, 3) / s; };
    return f(2.0 / (r * r)) - f(6.0 / (r * r));
  };
  double lo = r1, hi = r2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("closed-form eigenvalue examples") {
    const PhysicalParams p = params(1.0, r1, 17.0);
    CHECK(eigenvalue(p, {Branch::toroidal, 1, 0, 0}).beta == doctest::Approx(-pi * pi / 2).epsilon(1e-15));
    CHECK(eigenvalue(p, {Branch::thermal, 0, 0, 1}).beta == doctest::Approx(-pi * pi).epsilon(1e-15));
    CHECK(eigenvalue(params(7.0, 3.0, 2.0, 1.0, 2.0), {Branch::thermal, 0, 0, 1}).beta ==
          doctest::Approx(-pi * pi).epsilon(1e-15));

    const double lambda = 3.0 * std::sqrt(3.0) * pi * pi / 2.0;
    const EigenPair e = eigenvalue(params(1.0, r1, lambda), {Branch::plus, 1, 0, 1});
    CHECK(std::abs(e.beta) < 1e-10);
    CHECK(e.alpha_sq == doctest::Approx(pi * pi / 2));
    CHECK(e.gamma_sq == doctest::Approx(1.5 * pi * pi));
    CHECK(e.b == doctest::Approx(lambda * e.alpha_sq / e.gamma_sq));
  }

  TEST_CASE("friction toroidal eigenvalue") {
    const PhysicalParams p = params(2.0, 1.5, 0.0, 3.0, 5.0);
    CHECK(eigenvalue(p, {Branch::toroidal, 2, 1, 0}).beta == doctest::Approx(-2.0 * (6.0 / 2.25 + 3.0)));
  }

  TEST_CASE("invalid mode indices are rejected") {
    const PhysicalParams p = params(1.0, 1.0, 1.0);
    CHECK_THROWS_AS((void)eigenvalue(p, {Branch::toroidal, 1, 0, 1}), std::domain_error);
    CHECK_THROWS_AS((void)eigenvalue(p, {Branch::thermal, 1, 0, 1}), std::domain_error);
    CHECK_THROWS_AS((void)eigenvalue(p, {Branch::plus, 1, 2, 1}), std::domain_error);
    CHECK_THROWS_AS((void)eigenvalue(p, {Branch::minus, 0, 0, 1}), std::domain_error);
    CHECK_THROWS_AS((void)eigenvalue(p, {Branch::plus, 2, 0, 0}), std::domain_error);
    CHECK_THROWS_AS(params(-1.0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(params(1.0, 0.0).validate(), std::invalid_argument);
  }

  TEST_CASE("mode keys round trip") {
    const ModeIndex m{Branch::minus, 4, -3, 2};
    CHECK(m.key() == "minus:4:-3:2");
    CHECK(ModeIndex::parse(m.key()) == m);
    CHECK(parse_branch("toroidal") == Branch::toroidal);
    CHECK_THROWS((void)ModeIndex::parse("plus:1"));
  }

  TEST_CASE("critical Rayleigh number and degree") {
    const CriticalPoint c1 = critical_rayleigh(params(1.0, r1));
    CHECK(c1.l_c == 1);
    CHECK_FALSE(c1.degenerate);
    CHECK(std::abs(c1.rayleigh() / (27.0 * std::pow(pi, 4) / 4.0) - 1.0) < 1e-9);
    CHECK(c1.lambda_c == doctest::Approx(3.0 * std::sqrt(3.0) * pi * pi / 2.0).epsilon(1e-13));
    CHECK(std::abs(poloidal_betas(params(1.0, r1, c1.lambda_c), 1, 1).first) < 1e-10);

    const CriticalPoint c2 = critical_rayleigh(params(1.0, r2));
    CHECK(c2.l_c == 2);
    CHECK(std::abs(c2.rayleigh() / (27.0 * std::pow(pi, 4) / 4.0) - 1.0) < 1e-9);

    // independent of Pr
    CHECK(critical_rayleigh(params(0.01, r2)).lambda_c == doctest::Approx(c2.lambda_c).epsilon(1e-15));
  }

  TEST_CASE("large shells select large degrees") {
    for (double r : {5.0, 12.0, 40.0}) {
      const CriticalPoint c = critical_rayleigh(params(1.0, r));
      // alpha^2 closest to pi^2/2 on the convex objective
      double best = 1e300;
      int l_best = 0;
      for (int l = 1; l < 400; ++l) {
        const double v = neutral_lambda(params(1.0, r), l);
        if (v < best) {
          best = v;
          l_best = l;
        }
      }
      CHECK(c.l_c == l_best);
      CHECK(c.scanned_up_to >= c.l_c + 1);
    }
  }

  TEST_CASE("friction-free limit matches the free-slip result") {
    const CriticalPoint a = critical_rayleigh(params(1.0, r2));
    const CriticalPoint b = critical_rayleigh(params(1.0, r2, 0.0, 1e-14, 1e-14));
    CHECK(a.l_c == b.l_c);
    CHECK(b.lambda_c == doctest::Approx(a.lambda_c).epsilon(1e-12));
    const PhysicalParams p0 = params(0.7, 1.3, 25.0);
    const PhysicalParams pf = params(0.7, 1.3, 25.0, 1e-14, 1e-14);
    for (const ModeIndex& m : {ModeIndex{Branch::plus, 2, 0, 1}, ModeIndex{Branch::minus, 3, 1, 2},
                               ModeIndex{Branch::toroidal, 2, 0, 0}}) {
      CHECK(std::abs(eigenvalue(p0, m).beta - eigenvalue(pf, m).beta) < 1e-10);
    }
  }

  TEST_CASE("a tie between consecutive degrees is flagged as degenerate") {
    const double r = tie_radius();
    const CriticalPoint c = critical_rayleigh(params(1.0, r));
    CHECK(c.degenerate);
    CHECK(((c.l_c == 1 && c.tied_l == 2) || (c.l_c == 2 && c.tied_l == 1)));
    CHECK_THROWS_AS((void)pes_check(params(1.0, r, c.lambda_c), 6, 4), DegeneracyError);
    CHECK_FALSE(critical_rayleigh(params(1.0, r * 1.01)).degenerate);
  }

  TEST_CASE("root identities over a random parameter sweep") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_sum = 0.0, worst_prod = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double pr = std::pow(10.0, -2.0 + 4.0 * u(rng));
      const double r = 0.2 + 10.0 * u(rng);
      const double lambda = 100.0 * u(rng);
      const bool friction = i % 2 == 1;
      const double s0 = friction ? std::pow(10.0, -2.0 + 8.0 * u(rng)) : 0.0;
      const double s1 = friction ? std::pow(10.0, -2.0 + 8.0 * u(rng)) : 0.0;
      const int l = 1 + static_cast<int>(30 * u(rng));
      const int n = 1 + static_cast<int>(10 * u(rng));
      const PhysicalParams p = params(pr, r, lambda, s0, s1);
      const auto [bp, bm] = poloidal_betas(p, l, n);
      const auto q = poloidal_quadratic(p, l, n);
      const double a2 = alpha_sq(l, r), g2 = gamma_sq(l, n, r), n2 = n * n * pi * pi;
      // independent formulas for D and E
      const double d = g2 * (1.0 + pr) + pr * (s1 * a2 + s0 * n2) / g2;
      const double e = g2 * g2 - lambda * lambda * a2 / g2 + s1 * a2 + s0 * n2;
      CHECK(q.d == doctest::Approx(d).epsilon(1e-14));
      CHECK(q.e == doctest::Approx(e).epsilon(1e-12));
      CHECK(bp >= bm);
      worst_sum = std::max(worst_sum, std::abs(bp + bm + d) / d);
      worst_prod = std::max(worst_prod, std::abs(bp * bm - pr * e) / std::abs(pr * e));
    }
    CHECK(worst_sum < 1e-12);
    CHECK(worst_prod < 1e-12);
  }

  TEST_CASE("beta plus increases with lambda") {
    for (int l : {1, 2, 5}) {
      double prev = -1e300;
      for (int i = 0; i <= 50; ++i) {
        const double b = poloidal_betas(params(0.7, 1.1, 2.0 * i), l, 1).first;
        CHECK(b > prev);
        prev = b;
      }
    }
  }

  TEST_CASE("n = 1 minimizes the neutral curve") {
    for (double r : {r1, r2, 3.0}) {
      for (int l = 1; l <= 8; ++l) {
        for (int n = 1; n < 10; ++n) {
          CHECK(neutral_lambda(params(1.0, r), l, n + 1) > neutral_lambda(params(1.0, r), l, n));
        }
      }
    }
  }

  TEST_CASE("temperature amplitude satisfies the linear temperature equation") {
    for (const PhysicalParams& p : {params(1.0, r1, 20.0), params(0.3, 2.0, 40.0, 2.0, 7.0)}) {
      const SphereGrid g = SphereGrid::for_degree(4, p.r);
      for (const ModeIndex& m : {ModeIndex{Branch::plus, 2, 1, 1}, ModeIndex{Branch::minus, 3, -2, 2}}) {
        const EigenPair e = eigenvalue(p, m);
        CHECK(temperature_residual(p, e, eigenfunction(p, m, g), g).max_abs() < 1e-9);
      }
    }
  }

  TEST_CASE("eigenfunction structure and boundary values") {
    const PhysicalParams p = params(1.0, r1, 20.0);
    const SphereGrid g = SphereGrid::for_degree(4, p.r).with_z_nodes({0.0, 0.3, 1.0});
    const ShellJet tor = eigenfunction(p, {Branch::toroidal, 2, 1, 0}, g);
    CHECK(tor.w.value.max_abs() == 0.0);
    CHECK(tor.T.value.max_abs() == 0.0);
    CHECK(tor.u.theta.value.max_abs() > 0.1);

    const ShellJet plus = eigenfunction(p, {Branch::plus, 2, 1, 1}, g);
    for (int i = 0; i < g.n_theta(); ++i) {
      for (int j = 0; j < g.n_phi(); ++j) {
        for (int k : {0, 2}) {
          CHECK(std::abs(plus.w.value(k, i, j)) < 1e-14);
          CHECK(std::abs(plus.T.value(k, i, j)) < 1e-14);
          CHECK(std::abs(plus.u.theta.d_z(k, i, j)) < 1e-13);
          CHECK(std::abs(plus.u.phi.d_z(k, i, j)) < 1e-13);
        }
      }
    }
    CHECK_THROWS_AS((void)eigenfunction(p, {Branch::plus, 9, 0, 1}, g), ResolutionError);
  }

  TEST_CASE("eigenfields are divergence-free") {
    const PhysicalParams p = params(0.7, r2, 30.0, 0.5, 2.0);
    const SphereGrid g = SphereGrid::for_degree(8, p.r);
    CHECK(divergence_3d(eigenfunction(p, {Branch::plus, 2, 1, 1}, g), g).max_abs() < 1e-8);
    double worst = 0.0;
    for (const auto& e : spectrum_scan(p, 4, 3)) {
      worst = std::max(worst, divergence_3d(eigenfunction(p, e.index, g), g).max_abs());
    }
    CHECK(worst < 1e-8);
  }

  TEST_CASE("eigenmodes are mutually orthogonal") {
    auto off_diagonal = [](const PhysicalParams& p, InnerProduct kind) {
      const SphereGrid g = SphereGrid::for_degree(6, p.r);
      std::vector<ShellField> f;
      for (const auto& e : spectrum_scan(p, 3, 3)) f.push_back(eigenfunction(p, e.index, g).values());
      double worst = 0.0, scale = 0.0;
      for (std::size_t a = 0; a < f.size(); ++a) {
        scale = std::max(scale, inner(f[a], f[a], g, kind, p.prandtl).real());
        for (std::size_t b = a + 1; b < f.size(); ++b)
          worst = std::max(worst, std::abs(inner(f[a], f[b], g, kind, p.prandtl)));
      }
      CHECK(scale > 1.0);
      return worst;
    };
    const double lambda_c = critical_rayleigh(params(1.0, r1)).lambda_c;
    CHECK(off_diagonal(params(1.0, r1, lambda_c), InnerProduct::l2) < 1e-10);
    CHECK(off_diagonal(params(0.7, r1, lambda_c), InnerProduct::energy) < 1e-10);
    CHECK(off_diagonal(params(7.0, r2, 30.0), InnerProduct::energy) < 1e-10);
    // the plain L^2 product separates the plus/minus pair only at Pr = 1
    CHECK(off_diagonal(params(0.7, r1, lambda_c), InnerProduct::l2) > 1e-3);
  }

  TEST_CASE("principle of exchange of stability") {
    for (const auto& [r, lc] : {std::pair{r1, 1}, std::pair{r2, 2}}) {
      const double lambda_c = critical_rayleigh(params(1.0, r)).lambda_c;
      const PesReport at = pes_check(params(1.0, r, lambda_c), 3 * lc + 6, 6);
      CHECK(at.regime == "at");
      CHECK(at.zero_count == 2 * lc + 1);
      for (const auto& m : at.zero_modes) CHECK((m.branch == Branch::plus && m.l == lc && m.n == 1));
      CHECK(at.positive_count == 0);
      CHECK(at.max_other < -1e-3);
      CHECK(at.tail_certified);
      CHECK(at.holds);

      const PesReport below = pes_check(params(1.0, r, 0.999 * lambda_c), 3 * lc + 6, 6);
      CHECK(below.regime == "below");
      CHECK(below.zero_count == 0);
      CHECK(below.positive_count == 0);
      CHECK(below.holds);

      const PesReport above = pes_check(params(1.0, r, 1.001 * lambda_c), 3 * lc + 6, 6);
      CHECK(above.regime == "above");
      CHECK(above.positive_count == 2 * lc + 1);
      CHECK(above.max_other < -1e-3);
      CHECK(above.holds);
    }
  }

  TEST_CASE("tail certificate: beta plus is negative once gamma^2 exceeds lambda") {
    const PhysicalParams p = params(1.0, r1, 60.0);
    for (int l = 1; l < 60; ++l) {
      for (int n = 1; n < 20; ++n) {
        if (gamma_sq(l, n, p.r) > p.lambda) CHECK(poloidal_betas(p, l, n).first < 0.0);
      }
    }
    const PesReport rep = pes_check(p, 2, 1);
    CHECK_FALSE(rep.tail_certified);  // gamma^2(3,1) = 13.5 pi^2/... is below lambda = 60
    CHECK_FALSE(rep.holds);
  }

  TEST_CASE("friction pattern selection") {
    const PatternSelection s = friction_ratio_for_pattern(6.4e6, 1e4, 6);
    const double root = (1e4 / 6.4e6) * (1e4 / 6.4e6) * 42.0 / (pi * pi);
    CHECK(s.ratio == doctest::Approx(root * root).epsilon(1e-14));
    CHECK(s.ratio == doctest::Approx(1.0794e-10).epsilon(1e-4));
    CHECK(s.half_prefactor_ratio == doctest::Approx(4.0 * s.ratio).epsilon(1e-14));
    CHECK(s.selected_l == 6);
    CHECK(s.consistent);
    CHECK(s.half_prefactor_selected_l != 6);
    CHECK(s.sigma1 == doctest::Approx(1e6 / s.ratio));

    // h/a = pi / sqrt(2 l (l + 1)) makes the frictionless prefactor ratio exactly one
    const double a = 1.0, h = pi / std::sqrt(2.0 * 6 * 7);
    CHECK(friction_ratio_for_pattern(a, h, 6).half_prefactor_ratio == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS((void)friction_ratio_for_pattern(6.4e6, 1e4, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)friction_ratio_for_pattern(1e4, 1e4, 3), std::invalid_argument);
  }

  TEST_CASE("friction_selected_degree agrees with a brute-force scan") {
    const double r = 640.0, s0 = 1e6, s1 = 1e16;
    double best = 1e300;
    int l_best = 0;
    for (int l = 1; l < 2000; ++l) {
      const double v = neutral_lambda(params(1.0, r, 0.0, s0, s1), l);
      if (v < best) {
        best = v;
        l_best = l;
      }
    }
    CHECK(friction_selected_degree(r, s0, s1) == l_best);
  }

  TEST_CASE("spectrum scan coverage") {
    const auto rows = spectrum_scan(params(1.0, r1, 10.0), 2, 2);
    // thermal 2 + toroidal (3 + 5) + poloidal 2 branches * 2 n * (3 + 5)
    CHECK(rows.size() == 2 + 8 + 32);
    CHECK(spectrum_scan(params(1.0, r1, 10.0), 0, 0).empty());
    for (const auto& e : rows) {
      if (e.index.branch == Branch::toroidal) {
        CHECK(e.beta == eigenvalue(params(1.0, r1, 99.0), e.index).beta);
      }
    }
  }
}
