#include "catch_amalgamated.hpp"

#include <algorithm>
#include <numbers>

#include "trajthermo/error.hpp"
#include "trajthermo/loop.hpp"
#include "trajthermo/model.hpp"

using namespace trajthermo;
using Catch::Matchers::WithinAbs;

TEST_CASE("unit circle loop integral equals the signed area", "[loop]") {
  const auto model = harmonic_oscillator();
  const auto ccw = PhaseLoop::circle(0, 0, 1, 256, Orientation::kCounterclockwise);
  const auto cw = PhaseLoop::circle(0, 0, 1, 256, Orientation::kClockwise);
  CHECK_THAT(loop_1form_integral(model, ccw), WithinAbs(std::numbers::pi, 1e-3));
  CHECK_THAT(loop_1form_integral(model, cw), WithinAbs(-std::numbers::pi, 1e-3));
}

TEST_CASE("degenerate loop has zero integral", "[loop]") {
  const PhaseLoop loop({PhasePoint{0, {2}, {3}}, PhasePoint{0, {2}, {3}}, PhasePoint{0, {2}, {3}}});
  CHECK(loop_1form_integral(free_particle(), loop) == 0.0);
}

TEST_CASE("loop validation", "[loop]") {
  CHECK_THROWS_AS(PhaseLoop({PhasePoint{0, {0}, {0}}, PhasePoint{0, {1}, {1}}}),
                  ContractViolation);
  CHECK_THROWS_AS(
      PhaseLoop({PhasePoint{0, {0}, {0}}, PhasePoint{0, {1}, {1}}, PhasePoint{1, {0}, {1}}}),
      ContractViolation);
}

TEST_CASE("loop integral is invariant under cyclic relabelling", "[loop][property]") {
  const auto model = harmonic_oscillator();
  std::vector<PhasePoint> pts;
  for (int i = 0; i < 7; ++i) {
    pts.push_back(PhasePoint{0, {0.3 * i - 0.1 * i * i}, {std::sin(0.9 * i)}});
  }
  const double ref = loop_1form_integral(model, PhaseLoop(pts));
  for (int shift = 1; shift < 7; ++shift) {
    std::rotate(pts.begin(), pts.begin() + 1, pts.end());
    CHECK_THAT(loop_1form_integral(model, PhaseLoop(pts)), WithinAbs(ref, 1e-14));
  }
}

TEST_CASE("loop invariance under the flow", "[loop]") {
  const auto loop = PhaseLoop::circle(0, 0, 1, 256, Orientation::kCounterclockwise);
  const IntegratorConfig cfg{Scheme::kLeapfrog, 1e-3, 1};
  CHECK(loop_invariance_deviation(harmonic_oscillator(), loop, 0.0, cfg) == 0.0);
  CHECK(loop_invariance_deviation(free_particle(), loop, 5.0, cfg) <= 1e-6);
  CHECK(loop_invariance_deviation(harmonic_oscillator(), loop, 3.0, cfg) <= 1e-6);
}
