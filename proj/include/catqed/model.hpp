#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace catqed {

// Circuit and energy scales.  All "energies" are E/hbar in rad/s.
struct DeviceParams {
  double omega;        // resonator mode angular frequency [rad/s]
  double ej;           // Josephson energy over hbar [rad/s]
  double ec;           // single-electron charging energy over hbar [rad/s]
  double gap;          // superconducting gap over hbar [rad/s]
  double g;            // qubit-field coupling [rad/s]
  double temperature;  // bath temperature [K]
  double ng;           // dimensionless gate charge, in [0, 1]

  void validate() const;  // throws ConfigError on invalid fields
};

// Classical flux drive  Phi_x(t)/Phi_0 = (A/2) cos(sigma t + phi).
struct PulseSpec {
  double amplitude_a;  // dimensionless strength A, 0 <= A < 2
  double sigma;        // pulse angular frequency [rad/s]
  double phi;          // phase offset [rad]
  double duration;     // pulse length [s]

  void validate() const;
  // Zero-flux encoding: drive switched off, flux_ratio == 0 for all t.
  static PulseSpec off(double duration);
  bool is_off() const { return amplitude_a == 0.0; }
};

// Uniform time grid with n samples on [t0, t1]; dt = (t1-t0)/(n-1).
struct TimeGrid {
  double t0;
  double t1;
  std::size_t n;

  double dt() const { return (t1 - t0) / static_cast<double>(n - 1); }
  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt(); }
  void validate() const;
};

// Phi_x(t)/Phi_0
double flux_ratio(const PulseSpec& pulse, double t);

// Instantaneous detuning Omega(t) = omega - ej*cos(pi * Phi_x(t)/Phi_0).
double detuning(const DeviceParams& params, const PulseSpec& pulse, double t);

// Envelope of Omega over all pulse phases: Omega in [lo, hi];
// min_abs = min |Omega|, max_abs = max |Omega| on that interval.
struct DetuningRange {
  double lo;
  double hi;
  double min_abs;
  double max_abs;
};
DetuningRange detuning_range(const DeviceParams& params, const PulseSpec& pulse);

// Cumulative integral of Omega(t') over [0, t] at every grid node
// (composite trapezoid, prefix sums).  Requires grid.t0 == 0 and
// dt*sigma <= 0.1; throws NumericsError otherwise.
std::vector<double> detuning_integral(const DeviceParams& params,
                                      const PulseSpec& pulse,
                                      const TimeGrid& grid);

// g = (e*cg/csigma) * sqrt(hbar*omega/(length*cap_density)) / hbar, in rad/s.
double g_from_circuit(double cg, double csigma, double omega, double length,
                      double cap_density);

enum class CheckStatus { pass, warn };

struct HierarchyCheck {
  std::string name;
  double ratio;
  CheckStatus status;
};

// Scale hierarchy kB*T/hbar << 2*ej << ec << gap, one entry per link.
// Each link passes when its ratio is < 0.5, warns otherwise; never throws.
std::vector<HierarchyCheck> hierarchy_audit(const DeviceParams& params);

// g over the pulse-minimum of |ej*cos(pi Phi_x/Phi_0) - omega|.
double perturbative_ratio(const DeviceParams& params, const PulseSpec& pulse);

// True when perturbative_ratio < 0.1.
bool perturbative_regime(const DeviceParams& params, const PulseSpec& pulse);

}  // namespace catqed
