#include "catqed/model.hpp"

#include <cmath>
#include <random>

#include "catqed/errors.hpp"
#include "catqed/units.hpp"
#include "doctest.h"

using namespace catqed;

namespace {

DeviceParams paper_device() {
  DeviceParams d;
  d.omega = 90e10;
  d.ej = 15.9e10;
  d.ec = 250.0 * units::microev_over_hbar;
  d.gap = 458.3 * units::microev_over_hbar;
  d.g = 2.0 * units::pi * 50e6;
  d.temperature = 0.030;
  d.ng = 0.5;
  return d;
}

PulseSpec half_period_pulse() {
  PulseSpec p;
  p.amplitude_a = 0.7;
  p.sigma = units::pi / 7.5e-9;
  p.phi = 0.0;
  p.duration = 7.5e-9;
  return p;
}

}  // namespace

TEST_CASE("flux_ratio at reference points") {
  PulseSpec p = half_period_pulse();
  CHECK(flux_ratio(p, 0.0) == doctest::Approx(0.35).epsilon(1e-12));

  p.phi = units::pi / 2.0;
  CHECK(flux_ratio(p, 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  PulseSpec q{0.7, 8.0 * units::pi * 1e6, 0.0, 1e-6};
  CHECK(flux_ratio(q, units::pi / q.sigma) ==
        doctest::Approx(-0.35).epsilon(1e-12));
}

TEST_CASE("flux_ratio is periodic with period 2*pi/sigma") {
  const PulseSpec p = half_period_pulse();
  const double period = 2.0 * units::pi / p.sigma;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ts(0.0, 5.0 * period);
  for (int i = 0; i < 200; ++i) {
    const double t = ts(rng);
    CHECK(flux_ratio(p, t) ==
          doctest::Approx(flux_ratio(p, t + period)).epsilon(1e-9));
  }
}

TEST_CASE("detuning values and symmetry") {
  DeviceParams d = paper_device();
  const PulseSpec off = PulseSpec::off(7.5e-9);
  CHECK(detuning(d, off, 3e-9) == doctest::Approx(74.1e10).epsilon(1e-12));

  DeviceParams d0 = d;
  d0.ej = 0.0;
  CHECK(detuning(d0, half_period_pulse(), 1e-9) ==
        doctest::Approx(d.omega).epsilon(1e-14));

  // flux ratio pinned at exactly 0.5: cos(pi/2) = 0
  PulseSpec unit{1.0, 1e8, 0.0, 1e-7};
  CHECK(flux_ratio(unit, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(detuning(d, unit, 0.0) == doctest::Approx(d.omega).epsilon(1e-9));

  // even around pulse extrema (sigma*t + phi = k*pi)
  const PulseSpec p = half_period_pulse();
  const double textr = (units::pi - p.phi) / p.sigma;
  for (double delta : {1e-10, 3e-10, 1e-9}) {
    CHECK(detuning(d, p, textr + delta) ==
          doctest::Approx(detuning(d, p, textr - delta)).epsilon(1e-12));
  }
}

TEST_CASE("detuning_integral: constant detuning is exact") {
  const DeviceParams d = paper_device();
  const PulseSpec off = PulseSpec::off(1e-9);
  const TimeGrid grid{0.0, 1e-9, 10001};
  const auto cum = detuning_integral(d, off, grid);
  const double c = d.omega - d.ej;
  CHECK(cum[0] == 0.0);
  for (std::size_t k = 1; k < grid.n; k += 997) {
    CHECK(cum[k] == doctest::Approx(c * grid.time(k)).epsilon(1e-12));
  }
  CHECK(cum.back() == doctest::Approx(741.0).epsilon(1e-12));
}

TEST_CASE("detuning_integral: additivity across a split point") {
  const DeviceParams d = paper_device();
  const PulseSpec p = half_period_pulse();
  const TimeGrid grid{0.0, 4e-9, 40001};   // nodes align with the half grid
  const TimeGrid half{0.0, 2e-9, 20001};
  const auto full = detuning_integral(d, p, grid);
  const auto head = detuning_integral(d, p, half);

  // tail piece integrated on its own, same nodes
  double tail = 0.0;
  for (std::size_t k = 20000; k < 40000; ++k) {
    tail += 0.5 * grid.dt() *
            (detuning(d, p, grid.time(k)) + detuning(d, p, grid.time(k + 1)));
  }
  const double lhs = full.back();
  const double rhs = head.back() + tail;
  CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs) + 1e-12);
}

TEST_CASE("detuning_integral: second-order convergence under halving") {
  const DeviceParams d = paper_device();
  PulseSpec p = half_period_pulse();
  // generic window so the end-point slopes do not vanish by symmetry
  p.duration = 2.7e-9;
  auto value = [&](std::size_t n) {
    return detuning_integral(d, p, TimeGrid{0.0, p.duration, n}).back();
  };
  const double ref = value(128001);
  const double e1 = std::abs(value(1001) - ref);
  const double e2 = std::abs(value(2001) - ref);
  const double e3 = std::abs(value(4001) - ref);
  CHECK(e1 / e2 >= 3.5);
  CHECK(e2 / e3 >= 3.5);
}

TEST_CASE("detuning_integral rejects under-resolved grids") {
  const DeviceParams d = paper_device();
  PulseSpec p = half_period_pulse();
  p.sigma = 1e12;  // grid below resolves sigma poorly
  CHECK_THROWS_AS(detuning_integral(d, p, TimeGrid{0.0, 1e-9, 101}),
                  NumericsError);
  CHECK_THROWS_AS(detuning_integral(d, half_period_pulse(),
                                    TimeGrid{1e-12, 1e-9, 1001}),
                  NumericsError);
}

TEST_CASE("g_from_circuit") {
  CHECK(g_from_circuit(0.0, 600e-18, 9e11, 0.02, 1.66e-10) == 0.0);

  // scaling: doubling omega multiplies g by sqrt(2); linear in cg/csigma
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int i = 0; i < 50; ++i) {
    const double cg = 30e-18 * u(rng);
    const double cs = 600e-18 * u(rng);
    const double w = 9e11 * u(rng);
    const double L = 0.02 * u(rng);
    const double c = 1.66e-10 * u(rng);
    const double base = g_from_circuit(cg, cs, w, L, c);
    CHECK(g_from_circuit(cg, cs, 2.0 * w, L, c) ==
          doctest::Approx(std::sqrt(2.0) * base).epsilon(1e-12));
    CHECK(g_from_circuit(2.0 * cg, cs, w, L, c) ==
          doctest::Approx(2.0 * base).epsilon(1e-12));
  }

  // frozen hand evaluation of the same formula
  const double g = g_from_circuit(30e-18, 600e-18, 9e11, 0.02, 1.66e-10);
  const double vrms =
      std::sqrt(units::hbar * 9e11 / (0.02 * 1.66e-10));        // volts
  const double expected = units::e_charge * 0.05 * vrms / units::hbar;
  CHECK(g == doctest::Approx(expected).epsilon(1e-14));
  CHECK(g == doctest::Approx(4.0616e8).epsilon(1e-3));

  CHECK_THROWS_AS(g_from_circuit(1e-18, 0.0, 9e11, 0.02, 1.66e-10),
                  ConfigError);
  CHECK_THROWS_AS(g_from_circuit(1e-18, 6e-16, 9e11, -0.02, 1.66e-10),
                  ConfigError);
}

TEST_CASE("hierarchy audit with the reference device") {
  const auto checks = hierarchy_audit(paper_device());
  REQUIRE(checks.size() == 3);
  CHECK(checks[0].name == "kBT << 2EJ");
  CHECK(checks[0].status == CheckStatus::pass);
  CHECK(checks[0].ratio == doctest::Approx(0.01235).epsilon(1e-2));
  // 2EJ/EC = 0.837 and EC/gap = 0.5455 sit above the 0.5 pass threshold;
  // the audit reports them as warnings, never as hard errors.
  CHECK(checks[1].status == CheckStatus::warn);
  CHECK(checks[2].status == CheckStatus::warn);
  CHECK(checks[2].ratio == doctest::Approx(250.0 / 458.3).epsilon(1e-12));
}

TEST_CASE("perturbative regime flag") {
  const DeviceParams d = paper_device();
  const PulseSpec p = half_period_pulse();
  CHECK(perturbative_regime(d, p));
  CHECK(perturbative_ratio(d, p) == doctest::Approx(d.g / 74.1e10).epsilon(1e-6));

  DeviceParams strong = d;
  strong.g = 1e11;
  CHECK_FALSE(perturbative_regime(strong, p));
}

TEST_CASE("parameter validation") {
  DeviceParams d = paper_device();
  CHECK_NOTHROW(d.validate());
  d.ng = 1.5;
  CHECK_THROWS_AS(d.validate(), ConfigError);

  PulseSpec p = half_period_pulse();
  CHECK_NOTHROW(p.validate());
  p.amplitude_a = 2.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = half_period_pulse();
  p.duration = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);

  const PulseSpec off = PulseSpec::off(1e-9);
  CHECK(off.is_off());
  for (double t : {0.0, 1e-10, 5e-10}) CHECK(flux_ratio(off, t) == 0.0);

  CHECK_THROWS_AS((TimeGrid{0.0, -1.0, 100}.validate()), ConfigError);
  CHECK_THROWS_AS((TimeGrid{0.0, 1.0, 1}.validate()), ConfigError);
  const TimeGrid g{0.0, 1e-9, 11};
  CHECK(g.dt() == doctest::Approx(1e-10).epsilon(1e-15));
  CHECK(g.time(10) == doctest::Approx(1e-9).epsilon(1e-15));
}
