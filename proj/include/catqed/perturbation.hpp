#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "catqed/model.hpp"

namespace catqed {

using cplx = std::complex<double>;

// Second-order kernels and conditional-phase series on a time grid.
//
//   F±(t) = ∫0..t dt1 e^{∓i u(t1)} ∫0..t1 dt2 e^{±i u(t2)},  u = 2∫Ω + ω t
//   G±(t) = ∫0..t dt1 e^{∓i v(t1)} ∫0..t1 dt2 e^{±i v(t2)},  v = 2∫Ω − ω t
//   θ±    = 1 + F±/G±            (defined where |G±| clears the floor)
//   f±    = 1 − exp(2 Re θ±)     (validity of the exponentiation step)
//
// The upper/lower signs above follow the ∓ convention of the defining
// integrals: the "+" series uses e^{-iu} outside, e^{+iu} inside.
// phase_minus/phase_plus carry Im θ± unwrapped along the grid (±2π jumps
// between adjacent nodes removed), the quantity a phase-accumulation plot
// shows.
struct PhaseTrace {
  TimeGrid grid;
  std::vector<cplx> f_minus, f_plus;  // F± [s^2]
  std::vector<cplx> g_minus, g_plus;  // G± [s^2]
  std::vector<cplx> theta_minus, theta_plus;   // NaN where undefined
  std::vector<double> phase_minus, phase_plus; // unwrapped Im θ±
  std::vector<double> validity_minus, validity_plus;  // f±(t)
  double t_min_valid = 0.0;
  std::size_t first_valid = 0;

  bool defined_at(std::size_t k) const;
};

// Dropped second-order prefactor -g^2 G±(t_end): the factor the conditional
// map from theta alone does not account for.
struct PrefactorDiag {
  double magnitude_minus, phase_minus;
  double magnitude_plus, phase_plus;
  double max_g2_abs_g;  // max over grid of g^2 |G-|, size of the 2nd order
};

// Conditional map of a coherent state under one qubit branch:
//   |±>|alpha>  ->  norm_factor |±>|alpha e^{theta}>
struct ConditionalFieldModel {
  cplx alpha;        // input amplitude
  cplx theta;        // per-photon exponent at the requested time
  double norm_factor;  // exp(-|alpha|^2 f / 2)
  cplx amplitude_after() const { return alpha * std::exp(theta); }
};

// Evaluates F± and G± on the grid in one O(n) streaming pass (the inner
// integrals are carried as running trapezoid prefixes).  The four series are
// accumulated independently; conjugacy between + and - is a checkable
// property, not an assumption.  Requires grid.t0 == 0 and
// dt*(2 max|Omega| + omega) <= 0.15.
void compute_fg(const DeviceParams& params, const PulseSpec& pulse,
                const TimeGrid& grid, PhaseTrace& trace);

// Same quadrature without storing the series: F±, G±, θ± snapshots at the
// requested times (each matched to the nearest grid node).  Memory O(#times),
// so the grid can be much finer than the storage budget would allow.
struct FgSample {
  double t;
  cplx f_minus, f_plus, g_minus, g_plus;
  cplx theta_minus, theta_plus;
};
std::vector<FgSample> compute_fg_sampled(const DeviceParams& params,
                                         const PulseSpec& pulse, double dt,
                                         const std::vector<double>& times);

// Fills theta, unwrapped phases, validity series.  theta is defined at nodes
// where |G±| > floor * t^2/2 (default floor 1e-24); the leading undefined
// stretch ends at t_min_valid.  Throws NumericsError when no node qualifies.
void compute_theta(PhaseTrace& trace, double floor = 1e-24);

// Both steps.
PhaseTrace phase_trace(const DeviceParams& params, const PulseSpec& pulse,
                       const TimeGrid& grid, double floor = 1e-24);

// Grid satisfying the compute_fg resolution rule for this device/pulse.
// safety < 1 tightens dt below the rule's cap.
TimeGrid auto_grid(const DeviceParams& params, const PulseSpec& pulse,
                   double duration, double safety = 1.0);

struct ValidityProfile {
  std::vector<double> f_minus, f_plus;
  double t_peak_minus;   // argmax |f-| over the defined range
  double peak_minus;     // f- there
  double end_minus, end_plus;
};
ValidityProfile validity_profile(const PhaseTrace& trace);

PrefactorDiag prefactor_diag(const PhaseTrace& trace, double g);

// Per-photon exponent of the full second-order map with the -g^2 G±
// prefactor retained: -g^2 (F± + G±).  This is what an exact propagation
// of the same order sees; Im of it is the branch phase prediction.
cplx second_order_exponent(const PhaseTrace& trace, double g, bool plus_branch,
                           std::size_t k);

enum class Branch { minus, plus };

// Conditional field map at time t (nearest grid node); throws NumericsError
// outside the validity domain.
ConditionalFieldModel conditional_map(const PhaseTrace& trace, cplx alpha,
                                      double t, Branch branch);

enum class FreeParameter { sigma, phi, duration };

struct ScanPoint {
  double value;   // the free parameter
  double phase;   // unwrapped Im theta- at pulse end
};

struct CalibrationResult {
  PulseSpec calibrated;
  double achieved;  // Im theta- (unwrapped) at pulse end
  std::vector<ScanPoint> scan;
  bool from_template = false;  // template already met the target
};

class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& msg, std::vector<ScanPoint> table)
      : std::runtime_error(msg), scan(std::move(table)) {}
  std::vector<ScanPoint> scan;
};

// Im theta-(t_end) for a pulse, on an auto grid (last defined node).
double endpoint_phase(const DeviceParams& params, const PulseSpec& pulse,
                      double safety = 1.0);

// 1-D scan of the free parameter over [lo, hi] (n_scan points) followed by
// bisection refinement between the bracketing pair.  Throws CalibrationError
// with the scan table when no pair straddles the target.
CalibrationResult calibrate_pulse(const DeviceParams& params,
                                  const PulseSpec& pulse_template,
                                  FreeParameter free_parameter,
                                  double target_phase, double tol,
                                  double lo, double hi, std::size_t n_scan = 64);

// Scan range defaults per parameter: phi over [0, 2pi), sigma over
// [sigma/4, 4*sigma], duration over [duration/2, 2*duration].
CalibrationResult calibrate_pulse(const DeviceParams& params,
                                  const PulseSpec& pulse_template,
                                  FreeParameter free_parameter,
                                  double target_phase, double tol);

}  // namespace catqed
