#include "catqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "catqed/errors.hpp"
#include "catqed/units.hpp"

namespace catqed {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

void DeviceParams::validate() const {
  require(omega > 0.0, "device.omega must be > 0");
  require(ej > 0.0, "device.ej must be > 0");
  require(ec > 0.0, "device.ec must be > 0");
  require(gap > 0.0, "device.gap must be > 0");
  require(g >= 0.0, "device.g must be >= 0");
  require(temperature > 0.0, "device.temperature must be > 0");
  require(ng >= 0.0 && ng <= 1.0, "device.ng must be in [0, 1]");
}

void PulseSpec::validate() const {
  require(amplitude_a >= 0.0 && amplitude_a < 2.0,
          "pulse.amplitude_a must be in [0, 2)");
  require(duration > 0.0, "pulse.duration must be > 0");
  require(std::isfinite(sigma) && sigma >= 0.0, "pulse.sigma must be >= 0");
  require(std::isfinite(phi), "pulse.phi must be finite");
}

PulseSpec PulseSpec::off(double duration) {
  return PulseSpec{0.0, 0.0, 0.0, duration};
}

void TimeGrid::validate() const {
  require(t1 > t0, "grid.t1 must exceed grid.t0");
  require(n >= 2, "grid.n must be >= 2");
}

double flux_ratio(const PulseSpec& pulse, double t) {
  return 0.5 * pulse.amplitude_a * std::cos(pulse.sigma * t + pulse.phi);
}

double detuning(const DeviceParams& params, const PulseSpec& pulse, double t) {
  return params.omega - params.ej * std::cos(units::pi * flux_ratio(pulse, t));
}

DetuningRange detuning_range(const DeviceParams& params, const PulseSpec& pulse) {
  // cos(pi*fr) with |fr| <= A/2 < 1 is monotone in |fr|, so the extremes of
  // ej*cos(pi*fr) sit at fr = 0 and |fr| = A/2.
  const double cos_edge = std::cos(units::pi * 0.5 * pulse.amplitude_a);
  const double lo = params.omega - params.ej;             // fr = 0
  const double hi = params.omega - params.ej * cos_edge;  // |fr| = A/2
  DetuningRange r;
  r.lo = std::min(lo, hi);
  r.hi = std::max(lo, hi);
  r.max_abs = std::max(std::abs(r.lo), std::abs(r.hi));
  r.min_abs = (r.lo <= 0.0 && r.hi >= 0.0) ? 0.0
                                           : std::min(std::abs(r.lo), std::abs(r.hi));
  return r;
}

std::vector<double> detuning_integral(const DeviceParams& params,
                                      const PulseSpec& pulse,
                                      const TimeGrid& grid) {
  grid.validate();
  if (grid.t0 != 0.0) {
    throw NumericsError("detuning_integral: grid must start at t = 0");
  }
  const double dt = grid.dt();
  if (dt * pulse.sigma > 0.1) {
    std::ostringstream os;
    os << "detuning_integral: grid under-resolves the pulse (dt*sigma = "
       << dt * pulse.sigma << " > 0.1)";
    throw NumericsError(os.str());
  }
  std::vector<double> out(grid.n);
  out[0] = 0.0;
  double prev = detuning(params, pulse, 0.0);
  for (std::size_t k = 1; k < grid.n; ++k) {
    const double cur = detuning(params, pulse, grid.time(k));
    out[k] = out[k - 1] + 0.5 * dt * (prev + cur);
    prev = cur;
  }
  return out;
}

double g_from_circuit(double cg, double csigma, double omega, double length,
                      double cap_density) {
  require(cg >= 0.0, "g_from_circuit: cg must be >= 0");
  require(csigma > 0.0, "g_from_circuit: csigma must be > 0");
  require(omega > 0.0, "g_from_circuit: omega must be > 0");
  require(length > 0.0, "g_from_circuit: length must be > 0");
  require(cap_density > 0.0, "g_from_circuit: cap_density must be > 0");
  const double rms_voltage = std::sqrt(units::hbar * omega / (length * cap_density));
  return units::e_charge * (cg / csigma) * rms_voltage / units::hbar;
}

std::vector<HierarchyCheck> hierarchy_audit(const DeviceParams& params) {
  const double kbt = params.temperature * units::kelvin_over_hbar;
  const double two_ej = 2.0 * params.ej;
  auto link = [](std::string name, double num, double den) {
    const double ratio = num / den;
    return HierarchyCheck{std::move(name), ratio,
                          ratio < 0.5 ? CheckStatus::pass : CheckStatus::warn};
  };
  return {
      link("kBT << 2EJ", kbt, two_ej),
      link("2EJ << EC", two_ej, params.ec),
      link("EC << gap", params.ec, params.gap),
  };
}

double perturbative_ratio(const DeviceParams& params, const PulseSpec& pulse) {
  const DetuningRange r = detuning_range(params, pulse);
  if (r.min_abs == 0.0) return std::numeric_limits<double>::infinity();
  return params.g / r.min_abs;
}

bool perturbative_regime(const DeviceParams& params, const PulseSpec& pulse) {
  return perturbative_ratio(params, pulse) < 0.1;
}

}  // namespace catqed
