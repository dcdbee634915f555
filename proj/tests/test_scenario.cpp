#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "irsho/mathx.hpp"
#include "irsho/scenario.hpp"

using namespace irsho;
using doctest::Approx;

namespace {
ScenarioConfig default_cfg() {
  ScenarioConfig cfg;
  cfg.lambda_b = 1e-5;  // 10 per km^2
  cfg.v = 20.0;
  cfg.t_d = 0.01;
  return cfg;
}
}  // namespace

TEST_CASE("default offset matches the closed form 1/(pi sqrt(lambda))") {
  for (double lb : {1e-5, 1e-4, 2.5e-6, 4e-5}) {
    CHECK(default_offset(lb) ==
          Approx(1.0 / (pi * std::sqrt(lb))).epsilon(1e-10));
  }
  // Pinned value at the default density.
  CHECK(default_offset(1e-5) == Approx(100.65842420897506).epsilon(1e-13));
}

TEST_CASE("default offsets put the BSs on opposite sides at equal distance") {
  const auto [r_o, r_t] = default_offsets(1e-5);
  CHECK(r_o > 0.0);
  CHECK(r_t == -r_o);
}

TEST_CASE("offset scales as 1/sqrt(density): 4x density halves it") {
  CHECK(2.0 * default_offset(4e-5) ==
        Approx(default_offset(1e-5)).epsilon(1e-10));
}

TEST_CASE("crossing-length density: nonnegative, unit mass, scale covariant") {
  const double lb = 1e-5;
  for (double l : {1.0, 10.0, 50.0, 150.0, 300.0, 600.0, 1500.0}) {
    CHECK(crossing_length_pdf(l, lb) >= 0.0);
  }
  CHECK(crossing_length_mass(lb) == Approx(1.0).epsilon(1e-3));
  // f(l; lambda) = sqrt(lambda) f(l sqrt(lambda); 1)
  const double s = std::sqrt(lb);
  for (double l : {20.0, 150.0, 400.0}) {
    CHECK(crossing_length_pdf(l, lb) ==
          Approx(s * crossing_length_pdf(l * s, 1.0)).epsilon(1e-12));
  }
  // Mass is invariant under the scale collapse.
  CHECK(crossing_length_mass(4e-5) ==
        Approx(crossing_length_mass(1e-5)).epsilon(1e-12));
}

TEST_CASE("mean crossing length: pinned value, closed form, 1/sqrt scaling") {
  const double el = expected_crossing_length(1e-5);
  CHECK(el == Approx(248.35653949391801).epsilon(1e-12));
  // Mean of the angular-integral density equals the induced mean chord
  // pi/(4 sqrt(lambda)) up to the angular quadrature error.
  CHECK(el == Approx(pi / (4.0 * std::sqrt(1e-5))).epsilon(5e-4));
  CHECK(expected_crossing_length(2e-5) * std::sqrt(2.0) ==
        Approx(el).epsilon(1e-12));
}

TEST_CASE("default geometry: span, offsets, step grid") {
  const ScenarioGeometry g = make_geometry(default_cfg());
  CHECK(g.span == expected_crossing_length(1e-5));
  CHECK(g.span == Approx(248.35653949391801).epsilon(1e-13));
  CHECK(g.r_o == Approx(100.65842420897506).epsilon(1e-13));
  CHECK(g.r_t == -g.r_o);
  CHECK(g.dx == 0.2);
  CHECK(g.n_steps == 1242);
  // The step grid covers the span: last sample at or past L, one short before.
  CHECK(g.x(g.n_steps) >= g.span);
  CHECK(g.x(g.n_steps - 1) < g.span);
}

TEST_CASE("default geometry: boundary anchor and crossing angle") {
  const ScenarioGeometry g = make_geometry(default_cfg());
  CHECK(g.x_mid == Approx(124.178269746959).epsilon(1e-12));
  // Symmetric offsets put the boundary anchor at mid-span.
  CHECK(g.x_mid == Approx(0.5 * g.span).epsilon(1e-12));
  CHECK(g.theta == Approx(std::atan(g.span / (g.r_o - g.r_t))).epsilon(1e-12));
  CHECK(g.theta == Approx(0.889628).epsilon(1e-5));
  CHECK(g.sin_theta == Approx(std::sin(g.theta)).epsilon(1e-15));
  CHECK(g.cos_theta == Approx(std::cos(g.theta)).epsilon(1e-15));
  CHECK(g.sin_theta > 0.0);
}

TEST_CASE("step frames carry exact user-BS distances and bearings") {
  const ScenarioGeometry g = make_geometry(default_cfg());

  const StepFrame f0 = g.frame(0);
  CHECK(f0.i == 0);
  CHECK(f0.x == 0.0);
  CHECK(f0.x_prev == -g.dx);
  CHECK(f0.x_o == Approx(g.r_o).epsilon(1e-15));
  CHECK(f0.x_t ==
        Approx(std::sqrt(g.span * g.span + g.r_t * g.r_t)).epsilon(1e-15));
  // Original BS sits straight above the walk start.
  CHECK(f0.bearing_o == Approx(pi / 2).epsilon(1e-15));

  const int i = 700;
  const StepFrame f = g.frame(i);
  CHECK(f.x == g.x(i));
  CHECK(f.x_prev == g.x(i - 1));
  const Vec2 u = g.user(f.x);
  CHECK(f.x_o == Approx(norm(g.bs(Side::original) - u)).epsilon(1e-15));
  CHECK(f.x_t == Approx(norm(g.bs(Side::target) - u)).epsilon(1e-15));
  CHECK(f.x_mid == g.x_mid);
  CHECK(f.theta == g.theta);
  // Opening angle vanishes toward the BS bearing itself.
  CHECK(std::cos(f.phi_o(f.bearing_o)) == Approx(1.0).epsilon(1e-15));
  CHECK(std::cos(f.phi_t(f.bearing_t)) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("side offsets: antisymmetric, signed, vanish at the anchor") {
  const ScenarioGeometry g = make_geometry(default_cfg());
  for (double x : {0.0, 50.0, g.x_mid, 200.0, g.span}) {
    const Vec2 p = g.user(x);
    CHECK(g.side_offset(Side::target, p) == -g.side_offset(Side::original, p));
  }
  CHECK(g.side_offset(Side::original, g.user(0.0)) > 0.0);
  CHECK(g.side_offset(Side::original, g.user(g.span)) < 0.0);
  CHECK(std::abs(g.side_offset(Side::original, g.user(g.x_mid))) <= 1e-9);
  // Walking forward monotonically leaves the original cell.
  double prev = g.side_offset(Side::original, g.user(0.0));
  for (int i = 1; i <= g.n_steps; i += 97) {
    const double cur = g.side_offset(Side::original, g.user(g.x(i)));
    CHECK(cur < prev);
    prev = cur;
  }
  // The offset is a true perpendicular distance: off-axis points too.
  const Vec2 q{g.x_mid, 10.0};
  CHECK(g.side_offset(Side::original, q) ==
        Approx(10.0 * g.cos_theta).epsilon(1e-9));
}

TEST_CASE("asymmetric override geometry reproduces the hand-derived bisector") {
  // BSs at (0, 100) and (300, -50); equidistance on the walk solves to
  // x = 137.5, boundary direction (1, 2).
  const ScenarioGeometry g = build_geometry(100.0, -50.0, 300.0, 20.0, 0.01);
  CHECK(g.span == 300.0);
  CHECK(g.x_mid == Approx(137.5).epsilon(1e-12));
  CHECK(g.theta == Approx(std::atan(2.0)).epsilon(1e-12));
  // Equidistance at the anchor.
  const Vec2 p = g.user(g.x_mid);
  CHECK(norm(g.bs(Side::original) - p) ==
        Approx(norm(g.bs(Side::target) - p)).epsilon(1e-12));
}

TEST_CASE("equal-side offsets give a perpendicular boundary at mid-span") {
  const ScenarioGeometry g = build_geometry(100.0, 100.0, 300.0, 20.0, 0.01);
  CHECK(g.x_mid == Approx(150.0).epsilon(1e-12));
  CHECK(g.theta == Approx(pi / 2).epsilon(1e-12));
  CHECK(g.sin_theta == Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(g.cos_theta) < 1e-15);
}

TEST_CASE("geometry construction rejects non-positive inputs") {
  ScenarioConfig cfg = default_cfg();
  cfg.lambda_b = 0.0;
  CHECK_THROWS_AS((void)make_geometry(cfg), std::invalid_argument);
  cfg = default_cfg();
  cfg.v = 0.0;
  CHECK_THROWS_AS((void)make_geometry(cfg), std::invalid_argument);
  cfg = default_cfg();
  cfg.t_d = -1.0;
  CHECK_THROWS_AS((void)make_geometry(cfg), std::invalid_argument);
  cfg = default_cfg();
  cfg.span = 0.0;
  CHECK_THROWS_AS((void)make_geometry(cfg), std::invalid_argument);
  CHECK_THROWS_AS((void)default_offset(0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)expected_crossing_length(-1.0), std::invalid_argument);
}
