#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "nhscat/error.hpp"
#include "nhscat/poles.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace nhscat;
constexpr double kPi = std::numbers::pi;

namespace {

std::vector<cplx> ks(const PoleSet& set) {
  std::vector<cplx> out;
  for (const Pole& p : set.poles) out.push_back(p.k);
  return out;
}

const Pole* find_class(const PoleSet& set, PoleClass c) {
  for (const Pole& p : set.poles)
    if (p.kind() == c) return &p;
  return nullptr;
}

// The five families at a parameter value, with the held parameters at their
// reference settings.
std::vector<CenterModel> reference_models(double g) {
  return {ImaginaryOnsite{1.0, g}, UnequalHopping{-1.0, g}, ComplexHopping{-1.0, g},
          AntiHermitianHopping{-1.0, g}, ImaginaryCoupling{g}};
}

}  // namespace

TEST_CASE("pole equation values") {
  CHECK(std::abs(pole_equation_value(ImaginaryOnsite{1.0, 1.8}, cplx(kPi / 2, 0.3219))) < 1e-3);
  CHECK(std::abs(pole_equation_value(ImaginaryOnsite{0.0, 0.0}, kPi / 4) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(pole_equation_value(UnequalHopping{-1.0, std::sqrt(2.0)}, kPi / 2)) < 1e-14);
}

TEST_CASE("super-critical gain/loss dimer") {
  const PoleSet set = solve_poles_analytic(ImaginaryOnsite{1.0, 1.8});
  REQUIRE(set.poles.size() == 2);
  const Pole* growing = find_class(set, PoleClass::GrowingBound);
  REQUIRE(growing);
  const double expected_im = -std::log((-1.0 + std::sqrt(6.0)) / 2.0);
  CHECK(growing->k.real() == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(growing->k.imag() == doctest::Approx(expected_im).epsilon(1e-14));
  CHECK(growing->energy().imag() == doctest::Approx(0.6550510257216822).epsilon(1e-12));
  CHECK(std::abs(growing->energy().real()) < 1e-14);

  const PoleSet numeric = solve_poles_numeric(ImaginaryOnsite{1.0, 1.8});
  CHECK(testing::set_distance(ks(set), ks(numeric)) < 1e-10);
}

TEST_CASE("sub-critical gain/loss dimer keeps the first quadrant empty") {
  const PoleSet set = solve_poles_numeric(ImaginaryOnsite{1.0, 1.2});
  REQUIRE(set.poles.size() == 2);
  for (const Pole& p : set.poles) CHECK_FALSE(in_open_first_quadrant(p.k));
  CHECK(testing::set_distance(ks(set), ks(solve_poles_analytic(ImaginaryOnsite{1.0, 1.2}))) < 1e-10);
}

TEST_CASE("hopping-model branch formulas") {
  SUBCASE("hermitian unequal hopping sits at 0 and pi") {
    const PoleSet set = solve_poles_analytic(UnequalHopping{-1.0, 0.0});
    REQUIRE(set.poles.size() == 2);
    CHECK(set.poles[0].k == cplx(0.0, 0.0));
    CHECK(set.poles[1].k == cplx(kPi, 0.0));
    for (const Pole& p : set.poles) CHECK(p.kind() == PoleClass::RealAxisVirtual);
  }
  SUBCASE("imaginary coupling at gamma = 1 is singular") {
    const PoleSet set = solve_poles_analytic(ImaginaryCoupling{1.0});
    const Pole* s = find_class(set, PoleClass::SpectralSingularity);
    REQUIRE(s);
    CHECK(s->k == cplx(kPi / 2, 0.0));
  }
  SUBCASE("complex hopping") {
    const PoleSet set = solve_poles_numeric(ComplexHopping{-1.0, 0.5});
    const cplx expected{std::atan(0.5), 0.5 * std::log(1.25)};
    double best = 1e9;
    for (const Pole& p : set.poles) best = std::min(best, std::abs(p.k - expected));
    CHECK(best < 1e-12);
  }
  SUBCASE("general kappa") {
    const UnequalHopping m{-0.6, 0.2};
    const PoleSet a = solve_poles_analytic(m);
    CHECK(testing::set_distance(ks(a), ks(solve_poles_numeric(m))) < 1e-10);
    for (const Pole& p : a.poles) CHECK(std::abs(pole_equation_value(m, p.k)) < 1e-10);
  }
}

TEST_CASE("poles at infinity") {
  CHECK_THROWS_AS(solve_poles_analytic(ImaginaryOnsite{1.0, 1.0}), PolesAtInfinity);
  CHECK_THROWS_AS(solve_poles_analytic(UnequalHopping{-1.0, 1.0}), PolesAtInfinity);
  CHECK_THROWS_AS(solve_poles_analytic(ImaginaryCoupling{0.0}), PolesAtInfinity);
  CHECK(solve_poles(ImaginaryOnsite{1.0, 1.0}).poles.empty());

  // the leading coefficient vanishes: one root fewer than the nominal degree
  const PoleSet collapsed = solve_poles_numeric(ImaginaryOnsite{1.0, 1.0});
  CHECK(collapsed.nominal_degree == 2);
  CHECK(collapsed.degree_collapsed());
}

TEST_CASE("pole classification") {
  CHECK(classify_pole({1.0, 0.5}) == PoleClass::GrowingBound);
  CHECK(classify_pole({-1.0, 0.5}) == PoleClass::DecayingBound);
  CHECK(classify_pole({-1.0, -0.5}) == PoleClass::Antiresonant);
  CHECK(classify_pole({1.0, -0.5}) == PoleClass::Resonant);
  CHECK(classify_pole({1.0, 1e-12}) == PoleClass::SpectralSingularity);
  CHECK(classify_pole({-1.0, 0.0}) == PoleClass::RealAxisVirtual);
  CHECK(classify_pole({0.0, 0.0}) == PoleClass::RealAxisVirtual);
  CHECK(classify_pole({kPi, 0.0}) == PoleClass::RealAxisVirtual);
  CHECK(classify_pole({0.0, 0.3}) == PoleClass::AxisBound);
  CHECK(classify_pole({kPi, -0.3}) == PoleClass::RealAxisVirtual);
  CHECK(pole_class_name(PoleClass::GrowingBound) == "growing_bound");

  CHECK(normalize_branch({-kPi, 0.2}).real() == kPi);
  CHECK(normalize_branch({3 * kPi / 2, 0.0}).real() == doctest::Approx(-kPi / 2));
  CHECK(normalize_branch({0.5, -1.0}) == cplx(0.5, -1.0));
}

TEST_CASE("pole properties over random models") {
  testing::Gen gen(42);
  for (int n = 0; n < 300; ++n) {
    const CenterModel m = gen.model();
    for (const PoleSet& set : {solve_poles(m), solve_poles_numeric(m)}) {
      for (const Pole& p : set.poles) {
        CHECK(std::abs(pole_equation_value(m, p.k)) < 1e-10);
        CHECK(p.k.real() > -kPi);
        CHECK(p.k.real() <= kPi);
        const cplx e = p.energy();
        CHECK(std::abs(e - (-2.0 * std::cos(p.k))) <= 1e-14 * std::max(1.0, std::abs(e)));
        CHECK(std::abs(e.imag() - 2.0 * std::sin(p.k.real()) * std::sinh(p.k.imag())) <=
              1e-12 * std::max(1.0, std::abs(e.imag())));
        if (std::abs(p.k.imag()) > 1e-12 && std::abs(std::sin(p.k.real())) > 1e-12) {
          const double sign = (std::sin(p.k.real()) > 0 ? 1.0 : -1.0) * (p.k.imag() > 0 ? 1.0 : -1.0);
          CHECK(e.imag() * sign > 0.0);
        }
      }
    }
    // the solvers agree with the quadratic formula
    const PoleSet s = solve_poles_numeric(m);
    const std::vector<cplx> q = testing::quadratic_poles(m);
    if (!s.degree_collapsed() && q.size() == 2) CHECK(testing::set_distance(ks(s), q) < 1e-9);
  }
}

TEST_CASE("analytic and numeric solvers agree on 50-point grids") {
  for (int f = 0; f < 5; ++f) {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double g = 0.013 + 2.9 * i / 49.0;
      const CenterModel m = reference_models(g)[f];
      PoleSet a;
      try {
        a = solve_poles_analytic(m);
      } catch (const PolesAtInfinity&) {
        continue;
      }
      const PoleSet n = solve_poles_numeric(m);
      REQUIRE(a.poles.size() == n.poles.size());
      worst = std::max(worst, testing::set_distance(ks(a), ks(n)));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("trajectories are continuous") {
  for (int f = 0; f < 5; ++f) {
    const CenterModel base = reference_models(0.0)[f];
    std::vector<double> grid;
    // stay clear of the points where poles leave for infinity
    for (double g = 0.101; g <= 0.899; g += 1e-3) grid.push_back(g);
    const PoleTrajectory t = trace_pole_trajectory(base, grid);
    REQUIRE(t.poles.size() == grid.size());
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      REQUIRE(t.poles[i].size() == t.poles[i - 1].size());
      for (std::size_t n = 0; n < t.poles[i].size(); ++n) {
        const double step = testing::branch_distance(t.poles[i][n].k, t.poles[i - 1][n].k);
        const double next = testing::branch_distance(t.poles[i + 1][n].k, t.poles[i][n].k);
        CHECK(step <= 10.0 * std::max(next, 1e-12));
      }
    }
  }
}

TEST_CASE("critical values") {
  const double expected[] = {1.5, std::sqrt(2.0), 0.0, 0.0, 1.0};
  for (int f = 0; f < 5; ++f) {
    const CriticalPoint c = critical_gamma(reference_models(0.0)[f]);
    CHECK(std::abs(c.gamma - expected[f]) < 1e-8);
    CHECK(c.zero_threshold == (expected[f] == 0.0));
  }
  // tiny gamma already invalidates the zero-threshold models
  CHECK_FALSE(validity_verdict(ComplexHopping{-1.0, 1e-9}).valid);
  CHECK_FALSE(validity_verdict(AntiHermitianHopping{-1.0, 1e-9}).valid);
  CHECK_FALSE(validity_verdict(ComplexHopping{-1.0, 1e-6}).valid);

  CriticalSearch narrow;
  narrow.upper = 1.0;
  narrow.scan_points = 11;
  CHECK_THROWS_AS(critical_gamma(ImaginaryOnsite{1.0, 0.0}, narrow), NoCriticalPoint);
}

TEST_CASE("validity verdicts") {
  const Verdict sub = validity_verdict(ImaginaryOnsite{1.0, 1.2});
  CHECK(sub.valid);
  CHECK(sub.offending_poles.empty());
  REQUIRE(sub.critical_value);
  CHECK(*sub.gamma_margin == doctest::Approx(-0.3).epsilon(1e-8));

  const Verdict super = validity_verdict(ImaginaryOnsite{1.0, 1.8});
  CHECK_FALSE(super.valid);
  REQUIRE(super.offending_poles.size() == 1);
  CHECK(super.offending_poles[0].kind() == PoleClass::GrowingBound);

  const Verdict at = validity_verdict(ImaginaryOnsite{1.0, 1.5});
  CHECK_FALSE(at.valid);
  CHECK(at.offending_poles.empty());
  REQUIRE(at.spectral_singularities.size() == 1);
  CHECK(at.spectral_singularities[0].k.real() == doctest::Approx(kPi / 2));

  CHECK(validity_verdict(UnequalHopping{-1.0, 0.0}).valid);
  CHECK(validity_verdict(ImaginaryOnsite{0.0, 0.0}).valid);
}
