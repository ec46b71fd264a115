#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "shellconv/io.hpp"
#include "shellconv/reduction.hpp"

using namespace shellconv;

namespace {

constexpr double pi = std::numbers::pi;

PhysicalParams at_degree(int l_c, double pr) {
  PhysicalParams p;
  p.prandtl = pr;
  p.r = optimal_aspect_ratio(l_c);
  return p;
}

const Reduction& cached(int l_c, double pr) {
  static std::map<std::pair<int, double>, Reduction> cache;
  auto it = cache.find({l_c, pr});
  if (it == cache.end()) it = cache.emplace(std::pair{l_c, pr}, reduce(at_degree(l_c, pr), l_c)).first;
  return it->second;
}

nlohmann::json load_golden(const std::string& name) {
  std::ifstream in(std::string(SHELLCONV_GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

Amplitudes random_real_state(int l_c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<complex> nonneg{complex(g(rng), 0.0)};
  for (int m = 1; m <= l_c; ++m) nonneg.emplace_back(g(rng), g(rng));
  return real_amplitudes(nonneg);
}

// largest relative mismatch over every mode in either map
double max_form_difference(const std::map<ModeIndex, QuadraticForm>& a, const std::map<ModeIndex, QuadraticForm>& b) {
  double worst = 0.0;
  auto get = [](const std::map<ModeIndex, QuadraticForm>& m, const ModeIndex& k) {
    auto it = m.find(k);
    return it == m.end() ? QuadraticForm{} : it->second;
  };
  for (const auto& [k, f] : a) worst = std::max(worst, form_difference(f, get(b, k)));
  for (const auto& [k, f] : b) worst = std::max(worst, form_difference(get(a, k), f));
  return worst;
}

}  // namespace

TEST_SUITE("reduction") {
  TEST_CASE("optimal aspect ratio") {
    CHECK(optimal_aspect_ratio(1) == doctest::Approx(2.0 / pi).epsilon(1e-15));
    CHECK(optimal_aspect_ratio(2) == doctest::Approx(2.0 * std::sqrt(3.0) / pi).epsilon(1e-15));
    for (int l = 1; l < 6; ++l) CHECK(critical_rayleigh(at_degree(l, 1.0)).l_c == l);
  }

  TEST_CASE("candidate modes and the coupling rule") {
    const auto c1 = candidate_modes(1);
    // thermal + toroidal (3 + 5) + 2 * (3 + 5)
    CHECK(c1.size() == 1 + 8 + 16);
    CHECK(coupling_allowed(1, {Branch::thermal, 0, 0, 2}));
    CHECK(coupling_allowed(1, {Branch::plus, 2, 1, 2}));
    CHECK_FALSE(coupling_allowed(1, {Branch::plus, 1, 0, 2}));
    CHECK_FALSE(coupling_allowed(1, {Branch::toroidal, 2, 0, 0}));
    CHECK_FALSE(coupling_allowed(2, {Branch::minus, 3, 1, 2}));
    CHECK(coupling_allowed(2, {Branch::minus, 4, -3, 2}));
  }

  TEST_CASE("center manifold coefficients match the independent Galerkin goldens") {
    for (const auto& [file, l_c, pr] : {std::tuple{"cm_l1_pr1.json", 1, 1.0}, std::tuple{"cm_l1_pr0.7.json", 1, 0.7},
                                        std::tuple{"cm_l1_pr7.json", 1, 7.0}, std::tuple{"cm_l2_pr1.json", 2, 1.0}}) {
      CAPTURE(file);
      const nlohmann::json g = load_golden(file);
      const Reduction& red = cached(l_c, pr);
      CHECK(max_form_difference(red.coeffs.forms, io::forms_from_json(g.at("forms"))) < 1e-6);
      CHECK(red.model.q == doctest::Approx(g.at("q").get<double>()).epsilon(1e-6));
    }
  }

  TEST_CASE("thermal coefficient uses the resolved prefactor") {
    const nlohmann::json g = load_golden("y002_resolved.json");
    CHECK(g.at("prefactor").get<double>() == doctest::Approx(-std::sqrt(3.0) / 64.0 * pi * pi).epsilon(1e-14));
    for (int l_c : {1, 2}) {
      const QuadraticForm& y = cached(l_c, 1.0).coeffs.forms.at({Branch::thermal, 0, 0, 2});
      for (const auto& [key, v] : g.at(l_c == 1 ? "l_c_1" : "l_c_2").items()) {
        const int comma = static_cast<int>(key.find(','));
        const std::pair<int, int> pq{std::stoi(key.substr(0, comma)), std::stoi(key.substr(comma + 1))};
        CHECK(y.at(pq).real() == doctest::Approx(v.get<double>()).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("reduced coefficient q against the closed forms") {
    for (double pr : {0.7, 1.0, 7.0}) {
      const ReducedModel& m = cached(1, pr).model;
      REQUIRE(m.closed_form_q.has_value());
      CHECK(std::abs(m.q / closed_form_q1(pr) - 1.0) < 1e-6);
      CHECK(m.validated);
    }
    CHECK(closed_form_q1(1.0) == doctest::Approx(0.263475836091).epsilon(1e-10));
    const ReducedModel& m2 = cached(2, 1.0).model;
    CHECK(std::abs(m2.q / closed_form_q2() - 1.0) < 1e-6);
    CHECK(closed_form_q2() == doctest::Approx(0.330833787449).epsilon(1e-10));
    // l_c = 2 away from Pr = 1 has no closed form to compare against
    CHECK_FALSE(cached(2, 0.7).model.closed_form_q.has_value());
    CHECK(cached(2, 0.7).model.q > 0.0);
  }

  TEST_CASE("closed-form coefficient blocks") {
    for (double pr : {0.7, 1.0, 7.0}) {
      const ClosedFormTable t = closed_form_coefficients(pr, 1);
      CHECK(max_form_difference(closed_form_forms(t, ClosedFormReading::resolved), cached(1, pr).coeffs.forms) < 1e-8);
      CHECK(max_form_difference(closed_form_forms(t, ClosedFormReading::as_printed), cached(1, pr).coeffs.forms) >
            0.1);
    }
    const ClosedFormTable t2 = closed_form_coefficients(1.0, 2);
    CHECK(max_form_difference(closed_form_forms(t2, ClosedFormReading::resolved), cached(2, 1.0).coeffs.forms) <
          1e-8);
  }

  TEST_CASE("beta_22 comes from the spectrum, not -pi^2") {
    for (double pr : {0.7, 1.0, 7.0}) {
      const ClosedFormTable t = closed_form_coefficients(pr, 1);
      PhysicalParams p = at_degree(1, pr);
      p.lambda = critical_rayleigh(p).lambda_c;
      const auto [bp, bm] = poloidal_betas(p, 2, 2);
      CHECK(t.beta22_plus == doctest::Approx(bp).epsilon(1e-13));
      CHECK(t.beta22_minus == doctest::Approx(bm).epsilon(1e-13));
      CHECK(std::abs(t.beta22_plus + pi * pi) > 1.0);
    }
  }

  TEST_CASE("only Gaunt-allowed modes are excited") {
    for (int l_c : {1, 2}) {
      const CenterManifoldCoeffs& c = cached(l_c, 1.0).coeffs;
      for (const ModeIndex& k : c.nonzero_modes()) {
        CAPTURE(k.key());
        CHECK(coupling_allowed(l_c, k));
      }
      CHECK(c.max_dropped < 1e-10);
    }
    for (const ModeIndex& k : cached(1, 1.0).coeffs.nonzero_modes()) {
      const bool expected = (k.branch == Branch::thermal) ||
                            ((k.branch == Branch::plus || k.branch == Branch::minus) && k.l == 2 && k.n == 2);
      CHECK(expected);
    }
  }

  TEST_CASE("quadratic part of the reduced field vanishes") {
    for (int l_c : {1, 2}) CHECK(cached(l_c, 1.0).model.quadratic_residual < 1e-10);
  }

  TEST_CASE("equivariance under rotations about the axis") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    for (int l_c : {1, 2}) {
      const Reduction& red = cached(l_c, 0.7);
      for (int trial = 0; trial < 5; ++trial) {
        const Amplitudes x = random_real_state(l_c, rng);
        const double phi = angle(rng);
        Amplitudes xr = x;
        for (int m = -l_c; m <= l_c; ++m) xr[m + l_c] *= std::polar(1.0, m * phi);
        for (const auto& [k, f] : red.coeffs.forms) {
          const complex lhs = red.coeffs.evaluate(k, xr);
          const complex rhs = std::polar(1.0, k.m * phi) * red.coeffs.evaluate(k, x);
          CHECK(std::abs(lhs - rhs) < 1e-10);
        }
        const Amplitudes c = red.model.cubic_field(x);
        const Amplitudes cr = red.model.cubic_field(xr);
        for (int m = -l_c; m <= l_c; ++m) {
          CHECK(std::abs(cr[m + l_c] - std::polar(1.0, m * phi) * c[m + l_c]) < 1e-10);
        }
      }
    }
  }

  TEST_CASE("real states stay real") {
    std::mt19937_64 rng(11);
    for (int l_c : {1, 2}) {
      const Reduction& red = cached(l_c, 1.0);
      const Amplitudes x = random_real_state(l_c, rng);
      for (const auto& [k, f] : red.coeffs.forms) {
        if (k.branch == Branch::thermal) {
          CHECK(std::abs(red.coeffs.evaluate(k, x).imag()) < 1e-12);
          continue;
        }
        const ModeIndex mirror{k.branch, k.l, -k.m, k.n};
        const double sign = (k.m % 2 == 0) ? 1.0 : -1.0;
        CHECK(std::abs(red.coeffs.evaluate(mirror, x) - sign * std::conj(red.coeffs.evaluate(k, x))) < 1e-12);
      }
      const Amplitudes c = red.model.cubic_field(x);
      for (int m = 0; m <= l_c; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        CHECK(std::abs(c[l_c - m] - sign * std::conj(c[l_c + m])) < 1e-12);
      }
    }
  }

  TEST_CASE("invariant quadratic on real states") {
    std::mt19937_64 rng(3);
    for (int l_c : {1, 2, 3}) {
      const Amplitudes x = random_real_state(l_c, rng);
      double expected = std::norm(x[l_c]);
      for (int m = 1; m <= l_c; ++m) expected += 2.0 * std::norm(x[l_c + m]);
      const complex got = invariant_quadratic(x, l_c);
      CHECK(got.real() == doctest::Approx(expected).epsilon(1e-14));
      CHECK(std::abs(got.imag()) < 1e-14);
    }
  }

  TEST_CASE("cubic term is isotropic for l_c = 1 and 2") {
    std::mt19937_64 rng(5);
    for (int l_c : {1, 2}) {
      const ReducedModel& m = cached(l_c, 0.7).model;
      CHECK(m.isotropy_residual < 1e-8);
      for (int trial = 0; trial < 5; ++trial) {
        const Amplitudes x = random_real_state(l_c, rng);
        const complex inv = invariant_quadratic(x, l_c);
        const Amplitudes c = m.cubic_field(x);
        for (int k = 0; k <= 2 * l_c; ++k) CHECK(std::abs(c[k] + m.q * x[k] * inv) < 1e-8 * (1.0 + std::abs(c[k])));
      }
    }
  }

  TEST_CASE("l_c = 3 is computed but flagged as unvalidated") {
    const Reduction red = reduce(at_degree(3, 1.0), 3);
    CHECK_FALSE(red.model.validated);
    CHECK_FALSE(red.model.closed_form_q.has_value());
    CHECK(red.model.quadratic_residual < 1e-10);
    CHECK(std::isfinite(red.model.q));
    // the quadratic-in-I fit does not capture the l_c = 3 cubic
    CHECK(red.model.isotropy_residual > 1e-3);
  }

  TEST_CASE("nonlinear operator identities") {
    PhysicalParams p = at_degree(1, 0.7);
    p.lambda = critical_rayleigh(p).lambda_c;
    const SphereGrid g = SphereGrid::for_degree(10, p.r, 17);
    // m = 0 eigenfunctions are real
    const ShellJet a = eigenfunction(p, {Branch::plus, 2, 0, 1}, g);
    ShellJet b = eigenfunction(p, {Branch::plus, 1, 0, 1}, g);
    b.axpy(0.3, eigenfunction(p, {Branch::toroidal, 2, 0, 0}, g));
    b.axpy(-0.5, eigenfunction(p, {Branch::thermal, 0, 0, 2}, g));
    const ShellJet c = eigenfunction(p, {Branch::minus, 3, 0, 2}, g);

    const double scale = std::sqrt(inner(b.values(), b.values(), g).real());
    CHECK(std::abs(inner(nonlinear_term(a, b, g), b.values(), g)) < 1e-10 * scale);
    CHECK(std::abs(inner(nonlinear_term(a, b, g), c.values(), g) + inner(nonlinear_term(a, c, g), b.values(), g)) <
          1e-10 * scale);

    const ShellJet zero(g);
    CHECK(nonlinear_term(zero, b, g).max_abs() == 0.0);
    CHECK(nonlinear_term(a, zero, g).max_abs() == 0.0);

    const ShellField sym = nonlinear_form(a, b, g);
    ShellField manual = nonlinear_term(a, b, g);
    manual.axpy(1.0, nonlinear_term(b, a, g));
    ShellField diff = sym;
    diff.axpy(-0.5, manual);
    CHECK(diff.max_abs() < 1e-14 * (1.0 + sym.max_abs()));
  }

  TEST_CASE("input validation") {
    CHECK_THROWS_AS((void)reduce(at_degree(1, 1.0), 2), std::invalid_argument);
    PhysicalParams p = at_degree(1, 1.0);
    const double lc = critical_rayleigh(p).lambda_c;
    p.lambda = 1.2 * lc;
    CHECK_THROWS_AS((void)reduce(p, 1), std::domain_error);
    p.lambda = 0.9 * lc;
    CHECK_THROWS_AS((void)reduce(p, 1), std::domain_error);
    p.lambda = 1.05 * lc;
    const Reduction ok = reduce(p, 1);
    CHECK(ok.model.lambda_c == doctest::Approx(lc));
    CHECK(ok.model.beta_plus(1.05 * lc) > 0.0);
    CHECK(std::abs(ok.model.beta_plus(lc)) < 1e-10);

    ReductionOptions coarse;
    coarse.l_max = 1;
    CHECK_THROWS_AS((void)reduce(at_degree(1, 1.0), 1, coarse), ResolutionError);
  }

  TEST_CASE("energy inner product gives the same reduced coefficient at Pr = 1") {
    ReductionOptions opts;
    opts.inner = InnerProduct::energy;
    const ReducedModel m = reduced_model(at_degree(1, 1.0), 1, opts);
    CHECK(m.q == doctest::Approx(cached(1, 1.0).model.q).epsilon(1e-12));
  }
}
