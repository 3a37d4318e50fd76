#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kickscope/experiment.hpp"
#include "kickscope/sampling.hpp"
#include "test_support.hpp"

using namespace kickscope;
using namespace kickscope::experiment;
using kickscope::testing::small_geometry;
using kickscope::testing::small_grid;
using kickscope::testing::small_state;
using kickscope::testing::small_units;
using wavepacket::Slit;

namespace {

double max_density_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  return worst;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

// Propagated slit states, shared by several cases.
struct Evolved {
  Wavefunction psi1, psi2;
  Evolved()
      : psi1(wavepacket::propagate_fft(wavepacket::slit_state(small_geometry(), small_grid(), Slit::One), small_units())),
        psi2(wavepacket::propagate_fft(wavepacket::slit_state(small_geometry(), small_grid(), Slit::Two), small_units())) {}
};

const Evolved& evolved() {
  static const Evolved e;
  return e;
}

FringeAnalysis fringes_at(double c, double theta = 0.0) {
  const BranchState s = propagate_all(small_state(c, theta), small_units());
  return fringe_analysis(screen_density(s), FringeWindow::centered(small_geometry(), small_units()));
}

}  // namespace

TEST_CASE("assemble: computational probabilities") {
  const BranchState s = small_state(0.36);
  const auto p = s.probabilities();
  CHECK(p[0] == doctest::Approx(0.32).epsilon(1e-9));
  CHECK(p[1] == doctest::Approx(0.32).epsilon(1e-9));
  CHECK(p[2] == doctest::Approx(0.36).epsilon(1e-9));
  CHECK(s.total_norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.basis.kind == hilbert::BasisKind::Computational);
}

TEST_CASE("symmetric basis: probabilities and branch formulas") {
  const auto geom = small_geometry();
  const auto grid = small_grid();
  const Wavefunction psi1 = wavepacket::slit_state(geom, grid, Slit::One);
  const Wavefunction psi2 = wavepacket::slit_state(geom, grid, Slit::Two);
  for (double c : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CAPTURE(c);
    const BranchState s = change_basis(small_state(c), BasisChoice::symmetric());
    const auto p = s.probabilities();
    CHECK(std::abs(p[0] - (1 - c) / 2) < 1e-10);
    CHECK(std::abs(p[1] - (1 - c) / 2) < 1e-10);
    CHECK(std::abs(p[2] - c) < 1e-10);
    const double a = std::sqrt(1 - c), b = std::sqrt(c);
    CHECK(s.branches[0].max_abs_difference(combine(a / 2, psi1, a / 2, psi2)) < 1e-12);
    CHECK(s.branches[1].max_abs_difference(combine(a / 2, psi1, -a / 2, psi2)) < 1e-12);
    CHECK(s.branches[2].max_abs_difference(combine(b / std::sqrt(2.0), psi1, b / std::sqrt(2.0), psi2)) < 1e-12);
  }
}

TEST_CASE("tilted basis: branch formulas") {
  const auto geom = small_geometry();
  const auto grid = small_grid();
  const Wavefunction psi1 = wavepacket::slit_state(geom, grid, Slit::One);
  const Wavefunction psi2 = wavepacket::slit_state(geom, grid, Slit::Two);
  const double tp = 0.9, a = std::sqrt(0.5);
  const BranchState s = change_basis(small_state(0.5), BasisChoice::tilted(tp));
  const Complex ph = std::polar(1.0, -tp);
  CHECK(s.branches[0].max_abs_difference(combine(a / 2, psi1, a / 2 * ph, psi2)) < 1e-12);
  CHECK(s.branches[1].max_abs_difference(combine(a / 2, psi1, -a / 2 * ph, psi2)) < 1e-12);
}

TEST_CASE("change_basis round trips and commutes with propagation") {
  const BranchState s = small_state(0.3, 1.2);
  for (const BasisChoice& b : {BasisChoice::symmetric(), BasisChoice::tilted(-2.1)}) {
    const BranchState back = change_basis(change_basis(s, b), BasisChoice::computational());
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(back.branches[i].max_abs_difference(s.branches[i]) < 1e-12);
    const BranchState x = propagate_all(change_basis(s, b), small_units());
    const BranchState y = change_basis(propagate_all(s, small_units()), b);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(x.branches[i].max_abs_difference(y.branches[i]) < 1e-12);
  }
  CHECK_THROWS(s.branch(Outcome::QMinus));
}

TEST_CASE("propagate_all at t = 0 is the identity") {
  const BranchState s = small_state(0.5);
  const BranchState same = propagate_all(s, {1.0, 1.0, 0.0});
  for (std::size_t i = 0; i < 3; ++i) CHECK(same.branches[i].max_abs_difference(s.branches[i]) < 1e-12);
}

TEST_CASE("screen density equals the two-path formula for any overlap") {
  const auto& e = evolved();
  testing::Gen gen(5);
  for (int i = 0; i < 4; ++i) {
    const double c = gen.uniform(0.0, 1.0), theta = gen.uniform(-3.0, 3.0);
    CAPTURE(c);
    CAPTURE(theta);
    const BranchState s = propagate_all(small_state(c, theta), small_units());
    const ScreenPattern rho = screen_density(s);
    std::vector<double> expect(rho.density.size());
    const Complex ov = std::polar(c, theta);
    for (std::size_t j = 0; j < expect.size(); ++j)
      expect[j] = 0.5 * (std::norm(e.psi1[j]) + std::norm(e.psi2[j]) +
                         2.0 * std::real(ov * std::conj(e.psi1[j]) * e.psi2[j]));
    CHECK(max_density_difference(rho.density, expect) <= 1e-10 * max_of(expect));
    CHECK(max_density_difference(rho.density, two_path_density(e.psi1, e.psi2, ov).density) <=
          1e-10 * max_of(expect));
    // basis independence
    const ScreenPattern sym = screen_density(change_basis(s, BasisChoice::symmetric()));
    CHECK(max_density_difference(rho.density, sym.density) <= 1e-12 * max_of(expect));
    CHECK(rho.integral() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("screen density limits") {
  const auto& e = evolved();
  SUBCASE("c = 1 reproduces the no-detector pattern") {
    const ScreenPattern rho = screen_density(propagate_all(small_state(1.0), small_units()));
    const Wavefunction ref = wavepacket::propagate_fft(reference_state(small_geometry(), small_grid()), small_units());
    std::vector<double> expect(ref.size());
    for (std::size_t j = 0; j < ref.size(); ++j) expect[j] = std::norm(ref[j]);
    CHECK(max_density_difference(rho.density, expect) <= 1e-12 * max_of(expect));
  }
  SUBCASE("c = 0 has no cross term") {
    const ScreenPattern rho = screen_density(propagate_all(small_state(0.0), small_units()));
    std::vector<double> expect(rho.density.size());
    for (std::size_t j = 0; j < expect.size(); ++j)
      expect[j] = 0.5 * (std::norm(e.psi1[j]) + std::norm(e.psi2[j]));
    CHECK(max_density_difference(rho.density, expect) <= 1e-12 * max_of(expect));
  }
}

TEST_CASE("visibility tracks c") {
  for (double c : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CAPTURE(c);
    const FringeAnalysis fa = fringes_at(c);
    CHECK(std::abs(fa.visibility - c) <= 0.01);
    CHECK(fa.resolved == (c > 0.0));
    if (c > 0.0) {
      CHECK(std::abs(fa.fringe_period - 2 * kPi) <= 0.01 * 2 * kPi);
      CHECK(std::abs(fa.central_fringe_shift) <= 0.01 * 2 * kPi);
    }
  }
  // the detector phase moves the fringes but not their contrast
  const FringeAnalysis shifted = fringes_at(0.5, kPi / 2);
  CHECK(std::abs(shifted.visibility - 0.5) <= 0.01);
}

TEST_CASE("fringe_analysis on a synthetic pattern") {
  const GridSpec grid = GridSpec::centered(small_geometry(), 1 << 12, 0.01);
  ScreenPattern p{grid, std::vector<double>(grid.n)};
  for (std::size_t j = 0; j < grid.n; ++j) p.density[j] = 1.0 + 0.3 * std::cos(2 * kPi * (grid.x(j) - 0.5) / 4.0);
  FringeWindow w{-3.5, 4.5, 0.5, 4.0};
  const FringeAnalysis fa = fringe_analysis(p, w);
  CHECK(fa.visibility == doctest::Approx(0.3).epsilon(1e-4));
  CHECK(fa.fringe_period == doctest::Approx(4.0).epsilon(1e-2));
  CHECK(std::abs(fa.central_peak - 0.5) <= grid.dx());
  CHECK_THROWS_AS(fringe_analysis(p, FringeWindow{1.0, 0.0, 0.5, 4.0}), std::invalid_argument);
  CHECK_THROWS_AS(fringe_analysis(p, FringeWindow{-100.0, 100.0, 0.5, 4.0}), std::invalid_argument);
}

TEST_CASE("conditional patterns") {
  const BranchState s = propagate_all(change_basis(small_state(0.5), BasisChoice::symmetric()), small_units());
  const auto window = FringeWindow::centered(small_geometry(), small_units());
  const ConditionalPattern plus = conditional_density(s, Outcome::QPlus);
  const ConditionalPattern minus = conditional_density(s, Outcome::QMinus);
  const ConditionalPattern q3 = conditional_density(s, Outcome::Q3);
  REQUIRE(plus.pattern);
  REQUIRE(minus.pattern);
  REQUIRE(q3.pattern);
  CHECK(plus.probability == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(plus.pattern->integral() == doctest::Approx(1.0).epsilon(1e-9));
  // q+ and q3 share the no-detector fringes, q- is displaced by half a fringe
  CHECK(max_density_difference(plus.pattern->density, q3.pattern->density) <= 1e-10 * max_of(q3.pattern->density));
  const FringeAnalysis fm = fringe_analysis(*minus.pattern, window);
  CHECK(std::abs(std::abs(fm.central_fringe_shift) - kPi) <= 0.01 * 2 * kPi);
  CHECK(fm.visibility > 0.99);

  const BranchState full = change_basis(small_state(1.0), BasisChoice::symmetric());
  const ConditionalPattern empty = conditional_density(full, Outcome::QMinus);
  CHECK(empty.probability == 0.0);
  CHECK_FALSE(empty.pattern.has_value());
  CHECK_THROWS(conditional_density(full, Outcome::Path1));
}

TEST_CASE("kick identity residual follows its closed form") {
  // residual^2 = 2 (1 - exp(-pi^2 sigma^2 / (2 d^2))) for well separated slits
  double previous = 0.0;
  for (double ratio : {0.005, 0.01, 0.02, 0.05}) {
    const wavepacket::SlitGeometry geom{1.0, ratio};
    const GridSpec grid = GridSpec::centered(geom, 1 << 12, ratio / 8);
    const double r = kick_identity_residual(geom, grid);
    const double expect = std::sqrt(2.0 * (1.0 - std::exp(-kPi * kPi * ratio * ratio / 2.0)));
    CAPTURE(ratio);
    CHECK(r == doctest::Approx(expect).epsilon(1e-8));
    CHECK(r > previous);
    previous = r;
  }
  CHECK(kick_identity_residual({1.0, 0.01}, GridSpec::centered({1.0, 0.01}, 1 << 12, 0.00125)) <= 0.05);
}

TEST_CASE("momentum_shift recovers a known circular offset") {
  const std::size_t n = 4096;
  std::vector<double> a(n), b(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = static_cast<double>(k) - 2048.0;
    b[k] = std::exp(-x * x / 20000.0) * (1 + std::cos(2 * kPi * x / 100.0));
    const double y = x - 37.0;
    a[k] = std::exp(-y * y / 20000.0) * (1 + std::cos(2 * kPi * y / 100.0));
  }
  CHECK(experiment::momentum_shift(a, b, 0.5, 50.0) == doctest::Approx(18.5));
  CHECK(wrap_momentum(-1.0, 5.0) == doctest::Approx(4.0));
  CHECK(circular_distance(0.1, 4.9, 5.0) == doctest::Approx(0.2));
}

TEST_CASE("kick report") {
  const auto geom = small_geometry();
  for (double c : {0.0, 0.25, 0.5, 0.9}) {
    CAPTURE(c);
    const BranchState s = change_basis(small_state(c), BasisChoice::symmetric());
    const KickReport r = kick_report(s, geom, 1.0, {c, 0.0});
    CHECK(r.p0 == doctest::Approx(kPi));
    CHECK(std::abs(r.fk_branch - (1 - c) / 2) <= 1e-6);
    CHECK(r.fk_theory == doctest::Approx((1 - c) / 2));
    REQUIRE(r.p0_measured);
    CHECK(circular_distance(*r.p0_measured, r.p0, 2 * kPi) <= r.dp);
  }
  const KickReport none = kick_report(change_basis(small_state(1.0), BasisChoice::symmetric()), geom, 1.0, {1.0, 0.0});
  CHECK_FALSE(none.p0_measured.has_value());
  CHECK(none.fk_branch == doctest::Approx(0.0));
  CHECK_THROWS_AS(kick_report(small_state(0.5), geom, 1.0, {0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("phase kick equals theta hbar / d") {
  const auto geom = small_geometry();
  const BranchState ref = change_basis(small_state(0.5, 0.0), BasisChoice::symmetric());
  const double dp = 2 * kPi / small_grid().extent();
  for (double theta : {0.0, kPi / 4, kPi / 2, kPi, -kPi / 3}) {
    CAPTURE(theta);
    const BranchState s = change_basis(small_state(0.5, theta), BasisChoice::symmetric());
    const double shift = phase_kick_shift(s, ref, geom, 1.0);
    CHECK(circular_distance(shift, theta, 2 * kPi) <= dp);
  }
  CHECK_THROWS(phase_kick_shift(change_basis(small_state(0.0), BasisChoice::symmetric()), ref, geom, 1.0));
}

TEST_CASE("tilted basis: relative kick stays p0, branches move with theta'") {
  const auto geom = small_geometry();
  const BranchState s = small_state(0.4);
  const Wavefunction ref = reference_state(geom, small_grid());
  const double dp = 2 * kPi / small_grid().extent();
  for (double tp : {0.0, kPi / 3, -kPi / 2, 2.5}) {
    CAPTURE(tp);
    CHECK(circular_distance(tilted_relative_kick(s, tp, geom, 1.0), kPi, 2 * kPi) <= dp);
    const auto [plus, minus] = tilted_branch_shifts(s, tp, ref, geom, 1.0);
    CHECK(circular_distance(plus, -tp, 2 * kPi) <= dp);
    CHECK(circular_distance(minus, kPi - tp, 2 * kPi) <= dp);
  }
  CHECK_THROWS(tilted_relative_kick(small_state(1.0), 0.3, geom, 1.0));
}

TEST_CASE("Storey bound") {
  for (double v : {0.0, 0.3, 1.0}) {
    const StoreyBound b = storey_bound_report(v);
    CHECK(b.lhs == doctest::Approx(kPi));
    CHECK(b.rhs == doctest::Approx(1 - v));
    CHECK(b.satisfied);
  }
  CHECK_THROWS_AS(storey_bound_report(1.2), std::domain_error);
  CHECK_THROWS_AS(storey_bound_report(-0.1), std::domain_error);
}
