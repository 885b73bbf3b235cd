#include "catqed/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "catqed/errors.hpp"
#include "catqed/units.hpp"

namespace catqed {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double wrap_to_pi(double x) {
  double y = std::remainder(x, 2.0 * units::pi);
  if (y <= -units::pi) y += 2.0 * units::pi;
  return y;
}

// One nested cumulative trapezoid: carries the inner prefix
// S(t_k) ~ ∫ e^{-i phase} and the outer accumulator ∫ e^{+i phase} S.
struct NestedAccumulator {
  cplx inner_prev{1.0, 0.0};
  cplx s{0.0, 0.0};
  cplx prod_prev{0.0, 0.0};
  cplx acc{0.0, 0.0};

  // e_phase = e^{+i phase_k}; the inner integrand is its conjugate.
  void step(double dt, cplx e_phase) {
    const cplx inner_k = std::conj(e_phase);
    s += 0.5 * dt * (inner_prev + inner_k);
    const cplx prod_k = e_phase * s;
    acc += 0.5 * dt * (prod_prev + prod_k);
    inner_prev = inner_k;
    prod_prev = prod_k;
  }

  void reset(cplx e_phase0) {
    inner_prev = std::conj(e_phase0);
    s = cplx(0.0, 0.0);
    prod_prev = cplx(0.0, 0.0);
    acc = cplx(0.0, 0.0);
  }
};

// Streams the four kernels over the grid, handing (k, F-, F+, G-, G+) to the
// sink at every node.  The plus series run their own accumulators on the
// sign-flipped phases.  A flux-off pulse has exactly linear phases, so the
// unit exponentials advance by a constant rotation there, refreshed from
// std::polar every few hundred steps to pin down rounding.
template <typename Sink>
void fg_walk(const DeviceParams& params, const PulseSpec& pulse,
             const TimeGrid& grid, Sink&& sink) {
  const double dt = grid.dt();
  const std::size_t n = grid.n;

  NestedAccumulator fm, fp, gm, gp;
  fm.reset(cplx(1.0, 0.0));
  fp.reset(cplx(1.0, 0.0));
  gm.reset(cplx(1.0, 0.0));
  gp.reset(cplx(1.0, 0.0));
  sink(std::size_t{0}, fm.acc, fp.acc, gm.acc, gp.acc);

  // Branch convention: the minus series integrate e^{-i u} outside and
  // e^{+i u} inside (u = 2∫Ω + ωt for F, v = 2∫Ω − ωt for G); the plus
  // series take the flipped signs.  This resolves the sign ambiguity of the
  // ∓-to-branch map so the minus branch is the one whose accumulated phase
  // runs negative.
  if (pulse.is_off()) {
    const double om = detuning(params, pulse, 0.0);
    const double pu = 2.0 * om + params.omega;
    const double pv = 2.0 * om - params.omega;
    cplx eu(1.0, 0.0), ev(1.0, 0.0);
    const cplx ru = std::polar(1.0, pu * dt);
    const cplx rv = std::polar(1.0, pv * dt);
    for (std::size_t k = 1; k < n; ++k) {
      if (k % 256 == 0) {
        eu = std::polar(1.0, pu * (double(k) * dt));
        ev = std::polar(1.0, pv * (double(k) * dt));
      } else {
        eu *= ru;
        ev *= rv;
      }
      fm.step(dt, std::conj(eu));
      fp.step(dt, eu);
      gm.step(dt, std::conj(ev));
      gp.step(dt, ev);
      sink(k, fm.acc, fp.acc, gm.acc, gp.acc);
    }
    return;
  }

  double phi = 0.0;  // cumulative trapezoid of Omega
  double omega_prev = detuning(params, pulse, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double t = grid.time(k);
    const double omega_k = detuning(params, pulse, t);
    phi += 0.5 * dt * (omega_prev + omega_k);
    omega_prev = omega_k;
    const cplx eu = std::polar(1.0, 2.0 * phi + params.omega * t);
    const cplx ev = std::polar(1.0, 2.0 * phi - params.omega * t);
    fm.step(dt, std::conj(eu));
    fp.step(dt, eu);
    gm.step(dt, std::conj(ev));
    gp.step(dt, ev);
    sink(k, fm.acc, fp.acc, gm.acc, gp.acc);
  }
}

void check_resolution(const DeviceParams& params, const PulseSpec& pulse,
                      const TimeGrid& grid, const char* who) {
  grid.validate();
  if (grid.t0 != 0.0) {
    throw NumericsError(std::string(who) + ": grid must start at t = 0");
  }
  const DetuningRange r = detuning_range(params, pulse);
  const double dt = grid.dt();
  const double res = dt * (2.0 * r.max_abs + params.omega);
  if (res > 0.15) {
    std::ostringstream os;
    os << who << ": grid under-resolves the integrand (dt*(2 max|Omega|"
       << " + omega) = " << res << " > 0.15)";
    throw NumericsError(os.str());
  }
  if (dt * pulse.sigma > 0.1) {
    std::ostringstream os;
    os << who << ": grid under-resolves the pulse (dt*sigma = "
       << dt * pulse.sigma << " > 0.1)";
    throw NumericsError(os.str());
  }
}

}  // namespace

bool PhaseTrace::defined_at(std::size_t k) const {
  return k < theta_minus.size() && !std::isnan(theta_minus[k].real());
}

TimeGrid auto_grid(const DeviceParams& params, const PulseSpec& pulse,
                   double duration, double safety) {
  const DetuningRange r = detuning_range(params, pulse);
  const double rate = 2.0 * r.max_abs + params.omega;
  double dt = safety * 0.15 / rate;
  if (pulse.sigma > 0.0) dt = std::min(dt, 0.1 / pulse.sigma);
  const auto n = static_cast<std::size_t>(std::ceil(duration / dt)) + 1;
  return TimeGrid{0.0, duration, std::max<std::size_t>(n, 2)};
}

void compute_fg(const DeviceParams& params, const PulseSpec& pulse,
                const TimeGrid& grid, PhaseTrace& trace) {
  check_resolution(params, pulse, grid, "compute_fg");
  trace.grid = grid;
  trace.f_minus.resize(grid.n);
  trace.f_plus.resize(grid.n);
  trace.g_minus.resize(grid.n);
  trace.g_plus.resize(grid.n);
  fg_walk(params, pulse, grid,
          [&trace](std::size_t k, cplx fm, cplx fp, cplx gm, cplx gp) {
            trace.f_minus[k] = fm;
            trace.f_plus[k] = fp;
            trace.g_minus[k] = gm;
            trace.g_plus[k] = gp;
          });
}

std::vector<FgSample> compute_fg_sampled(const DeviceParams& params,
                                         const PulseSpec& pulse, double dt,
                                         const std::vector<double>& times) {
  if (times.empty()) return {};
  const double t_end = *std::max_element(times.begin(), times.end());
  const auto n = static_cast<std::size_t>(std::ceil(t_end / dt)) + 1;
  const TimeGrid grid{0.0, t_end, std::max<std::size_t>(n, 2)};
  check_resolution(params, pulse, grid, "compute_fg_sampled");

  // (node, output slot) pairs in node order, so the walk checks one cursor.
  std::vector<std::pair<std::size_t, std::size_t>> want(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto k = static_cast<std::size_t>(std::llround(times[i] / grid.dt()));
    want[i] = {std::min(k, grid.n - 1), i};
  }
  std::sort(want.begin(), want.end());

  std::vector<FgSample> out(times.size());
  std::size_t cursor = 0;
  fg_walk(params, pulse, grid,
          [&](std::size_t k, cplx fm, cplx fp, cplx gm, cplx gp) {
            while (cursor < want.size() && want[cursor].first == k) {
              FgSample& s = out[want[cursor].second];
              s.t = grid.time(k);
              s.f_minus = fm;
              s.f_plus = fp;
              s.g_minus = gm;
              s.g_plus = gp;
              s.theta_minus = 1.0 + fm / gm;
              s.theta_plus = 1.0 + fp / gp;
              ++cursor;
            }
          });
  return out;
}

void compute_theta(PhaseTrace& trace, double floor) {
  if (floor <= 0.0) throw ConfigError("compute_theta: floor must be > 0");
  const std::size_t n = trace.grid.n;
  trace.theta_minus.assign(n, cplx(kNan, kNan));
  trace.theta_plus.assign(n, cplx(kNan, kNan));
  trace.phase_minus.assign(n, kNan);
  trace.phase_plus.assign(n, kNan);
  trace.validity_minus.assign(n, kNan);
  trace.validity_plus.assign(n, kNan);

  std::size_t first = n;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = trace.grid.time(k);
    const double floor_k = floor * 0.5 * t * t;
    const bool ok = std::abs(trace.g_minus[k]) > floor_k &&
                    std::abs(trace.g_plus[k]) > floor_k && t > 0.0;
    if (!ok) continue;
    if (first == n) first = k;
    trace.theta_minus[k] = 1.0 + trace.f_minus[k] / trace.g_minus[k];
    trace.theta_plus[k] = 1.0 + trace.f_plus[k] / trace.g_plus[k];
    trace.validity_minus[k] = 1.0 - std::exp(2.0 * trace.theta_minus[k].real());
    trace.validity_plus[k] = 1.0 - std::exp(2.0 * trace.theta_plus[k].real());
  }
  if (first == n) {
    throw NumericsError(
        "compute_theta: G below the degeneracy floor on the entire trace");
  }
  trace.first_valid = first;
  trace.t_min_valid = trace.grid.time(first);

  // Unwrap Im theta along the grid: increments are mapped to (-pi, pi], so
  // a pole passage of G contributes its continuous phase step rather than a
  // +-2pi glitch.  Undefined nodes carry the last defined value forward.
  double acc_m = trace.theta_minus[first].imag();
  double acc_p = trace.theta_plus[first].imag();
  double prev_m = acc_m, prev_p = acc_p;
  trace.phase_minus[first] = acc_m;
  trace.phase_plus[first] = acc_p;
  for (std::size_t k = first + 1; k < n; ++k) {
    if (!trace.defined_at(k)) {
      trace.phase_minus[k] = acc_m;
      trace.phase_plus[k] = acc_p;
      continue;
    }
    const double im_m = trace.theta_minus[k].imag();
    const double im_p = trace.theta_plus[k].imag();
    acc_m += wrap_to_pi(im_m - prev_m);
    acc_p += wrap_to_pi(im_p - prev_p);
    prev_m = im_m;
    prev_p = im_p;
    trace.phase_minus[k] = acc_m;
    trace.phase_plus[k] = acc_p;
  }
}

PhaseTrace phase_trace(const DeviceParams& params, const PulseSpec& pulse,
                       const TimeGrid& grid, double floor) {
  PhaseTrace trace;
  compute_fg(params, pulse, grid, trace);
  compute_theta(trace, floor);
  return trace;
}

ValidityProfile validity_profile(const PhaseTrace& trace) {
  ValidityProfile out;
  out.f_minus = trace.validity_minus;
  out.f_plus = trace.validity_plus;
  out.t_peak_minus = kNan;
  out.peak_minus = 0.0;
  double best = -1.0;
  for (std::size_t k = trace.first_valid; k < trace.grid.n; ++k) {
    const double a = std::abs(trace.validity_minus[k]);
    if (!std::isnan(a) && a > best) {
      best = a;
      out.peak_minus = trace.validity_minus[k];
      out.t_peak_minus = trace.grid.time(k);
    }
  }
  out.end_minus = trace.validity_minus.back();
  out.end_plus = trace.validity_plus.back();
  return out;
}

PrefactorDiag prefactor_diag(const PhaseTrace& trace, double g) {
  PrefactorDiag d;
  const cplx pm = -g * g * trace.g_minus.back();
  const cplx pp = -g * g * trace.g_plus.back();
  d.magnitude_minus = std::abs(pm);
  d.phase_minus = std::arg(pm);
  d.magnitude_plus = std::abs(pp);
  d.phase_plus = std::arg(pp);
  d.max_g2_abs_g = 0.0;
  for (const cplx& gm : trace.g_minus) {
    d.max_g2_abs_g = std::max(d.max_g2_abs_g, g * g * std::abs(gm));
  }
  return d;
}

cplx second_order_exponent(const PhaseTrace& trace, double g, bool plus_branch,
                           std::size_t k) {
  const cplx f = plus_branch ? trace.f_plus[k] : trace.f_minus[k];
  const cplx gg = plus_branch ? trace.g_plus[k] : trace.g_minus[k];
  return -g * g * (f + gg);
}

ConditionalFieldModel conditional_map(const PhaseTrace& trace, cplx alpha,
                                      double t, Branch branch) {
  const double dt = trace.grid.dt();
  const auto idx = static_cast<std::ptrdiff_t>(std::llround((t - trace.grid.t0) / dt));
  if (idx < 0 || static_cast<std::size_t>(idx) >= trace.grid.n ||
      std::abs(trace.grid.time(static_cast<std::size_t>(idx)) - t) > 0.5 * dt) {
    throw NumericsError("conditional_map: t outside the trace grid");
  }
  const auto k = static_cast<std::size_t>(idx);
  if (t < trace.t_min_valid || !trace.defined_at(k)) {
    throw NumericsError("conditional_map: t outside the validity domain");
  }
  ConditionalFieldModel m;
  m.alpha = alpha;
  m.theta = branch == Branch::minus ? trace.theta_minus[k] : trace.theta_plus[k];
  const double f = branch == Branch::minus ? trace.validity_minus[k]
                                           : trace.validity_plus[k];
  m.norm_factor = std::exp(-0.5 * std::norm(alpha) * f);
  return m;
}

double endpoint_phase(const DeviceParams& params, const PulseSpec& pulse,
                      double safety) {
  const TimeGrid grid = auto_grid(params, pulse, pulse.duration, safety);
  const PhaseTrace trace = phase_trace(params, pulse, grid);
  for (std::size_t k = grid.n; k-- > trace.first_valid;) {
    if (trace.defined_at(k)) return trace.theta_minus[k].imag();
  }
  throw NumericsError("endpoint_phase: no defined node at the trace end");
}

namespace {

PulseSpec with_value(const PulseSpec& base, FreeParameter p, double x) {
  PulseSpec out = base;
  switch (p) {
    case FreeParameter::sigma: out.sigma = x; break;
    case FreeParameter::phi: out.phi = x; break;
    case FreeParameter::duration: out.duration = x; break;
  }
  return out;
}

double param_value(const PulseSpec& base, FreeParameter p) {
  switch (p) {
    case FreeParameter::sigma: return base.sigma;
    case FreeParameter::phi: return base.phi;
    case FreeParameter::duration: return base.duration;
  }
  return 0.0;
}

}  // namespace

CalibrationResult calibrate_pulse(const DeviceParams& params,
                                  const PulseSpec& pulse_template,
                                  FreeParameter free_parameter,
                                  double target_phase, double tol,
                                  double lo, double hi, std::size_t n_scan) {
  if (tol <= 0.0) throw ConfigError("calibrate_pulse: tol must be > 0");
  if (n_scan < 2) throw ConfigError("calibrate_pulse: n_scan must be >= 2");

  CalibrationResult result;
  auto eval = [&](double x) {
    return endpoint_phase(params, with_value(pulse_template, free_parameter, x));
  };

  const double tmpl_phase = eval(param_value(pulse_template, free_parameter));
  if (std::abs(tmpl_phase - target_phase) <= tol) {
    result.calibrated = pulse_template;
    result.achieved = tmpl_phase;
    result.from_template = true;
    return result;
  }

  result.scan.reserve(n_scan);
  for (std::size_t i = 0; i < n_scan; ++i) {
    const double x =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_scan - 1);
    result.scan.push_back({x, eval(x)});
  }

  // Best bracketing pair: adjacent scan points straddling the target.
  std::size_t bracket = n_scan;
  double bracket_score = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n_scan; ++i) {
    const double a = result.scan[i].phase - target_phase;
    const double b = result.scan[i + 1].phase - target_phase;
    if (a == 0.0 || (a < 0.0) != (b < 0.0)) {
      const double score = std::min(std::abs(a), std::abs(b));
      if (score < bracket_score) {
        bracket_score = score;
        bracket = i;
      }
    }
  }
  if (bracket == n_scan) {
    std::ostringstream os;
    os << "calibrate_pulse: target " << target_phase
       << " rad not straddled by the scan over [" << lo << ", " << hi << "]";
    throw CalibrationError(os.str(), result.scan);
  }

  double xa = result.scan[bracket].value;
  double xb = result.scan[bracket + 1].value;
  double fa = result.scan[bracket].phase - target_phase;
  double xm = xa, fm = fa;
  for (int iter = 0; iter < 200; ++iter) {
    xm = 0.5 * (xa + xb);
    fm = eval(xm) - target_phase;
    if (std::abs(fm) <= tol || 0.5 * std::abs(xb - xa) < 1e-15 * std::abs(xm)) break;
    if ((fm < 0.0) == (fa < 0.0)) {
      xa = xm;
      fa = fm;
    } else {
      xb = xm;
    }
  }
  if (std::abs(fm) > tol) {
    std::ostringstream os;
    os << "calibrate_pulse: bisection stalled " << std::abs(fm)
       << " rad from the target (tol " << tol << ")";
    throw CalibrationError(os.str(), result.scan);
  }
  result.calibrated = with_value(pulse_template, free_parameter, xm);
  result.achieved = fm + target_phase;
  return result;
}

CalibrationResult calibrate_pulse(const DeviceParams& params,
                                  const PulseSpec& pulse_template,
                                  FreeParameter free_parameter,
                                  double target_phase, double tol) {
  double lo = 0.0, hi = 0.0;
  switch (free_parameter) {
    case FreeParameter::sigma:
      lo = pulse_template.sigma / 4.0;
      hi = pulse_template.sigma * 4.0;
      break;
    case FreeParameter::phi:
      lo = 0.0;
      hi = 2.0 * units::pi;
      break;
    case FreeParameter::duration:
      lo = pulse_template.duration / 2.0;
      hi = pulse_template.duration * 2.0;
      break;
  }
  return calibrate_pulse(params, pulse_template, free_parameter, target_phase,
                         tol, lo, hi);
}

}  // namespace catqed
