#include "catqed/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "catqed/errors.hpp"
#include "catqed/units.hpp"

namespace catqed {

namespace {

double wrap_to_pi(double x) {
  double y = std::remainder(x, 2.0 * units::pi);
  if (y <= -units::pi) y += 2.0 * units::pi;
  return y;
}

}  // namespace

double JointState::norm() const {
  double s = 0.0;
  for (const cplx& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

double JointState::branch_norm2(Branch b) const {
  const std::size_t off = (b == Branch::minus ? 0 : nmax + 1);
  double s = 0.0;
  for (std::size_t n = 0; n <= nmax; ++n) s += std::norm(amplitudes[off + n]);
  return s;
}

cplx JointState::branch_mean_a(Branch b) const {
  const std::size_t off = (b == Branch::minus ? 0 : nmax + 1);
  cplx acc(0.0, 0.0);
  for (std::size_t n = 0; n + 1 <= nmax; ++n) {
    acc += std::conj(amplitudes[off + n]) * std::sqrt(double(n + 1)) *
           amplitudes[off + n + 1];
  }
  const double p = branch_norm2(b);
  return p > 0.0 ? acc / p : cplx(0.0, 0.0);
}

std::size_t min_nmax(cplx alpha) {
  const double a = std::abs(alpha);
  return static_cast<std::size_t>(std::ceil(a * a + 6.0 * a + 10.0));
}

std::vector<cplx> coherent_state(cplx alpha, std::size_t nmax) {
  if (nmax < min_nmax(alpha)) {
    std::ostringstream os;
    os << "coherent_state: nmax = " << nmax << " below the truncation rule ("
       << min_nmax(alpha) << ") for |alpha| = " << std::abs(alpha);
    throw NumericsError(os.str());
  }
  std::vector<cplx> c(nmax + 1);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (std::size_t n = 0; n < nmax; ++n) {
    c[n + 1] = c[n] * alpha / std::sqrt(double(n + 1));
  }
  double norm2 = 0.0;
  for (const cplx& x : c) norm2 += std::norm(x);
  const double inv = 1.0 / std::sqrt(norm2);
  for (cplx& x : c) x *= inv;
  return c;
}

JointState make_joint_state(cplx qm, cplx qp, cplx alpha, std::size_t nmax,
                            Frame frame) {
  const double qnorm = std::sqrt(std::norm(qm) + std::norm(qp));
  if (qnorm == 0.0) throw ConfigError("make_joint_state: zero qubit amplitude");
  const std::vector<cplx> field = coherent_state(alpha, nmax);
  JointState st;
  st.nmax = nmax;
  st.frame = frame;
  st.alpha0 = alpha;
  st.amplitudes.assign(2 * (nmax + 1), cplx(0.0, 0.0));
  for (std::size_t n = 0; n <= nmax; ++n) {
    st.amplitudes[n] = qm / qnorm * field[n];
    st.amplitudes[nmax + 1 + n] = qp / qnorm * field[n];
  }
  const double a0 = (std::abs(alpha) > 0.0) ? std::arg(alpha) : 0.0;
  st.arg_acc = {a0, a0};
  st.arg_origin = {a0, a0};
  return st;
}

void hamiltonian_apply(const DeviceParams& params, const PulseSpec& pulse,
                       double t, Frame frame, const std::vector<cplx>& psi,
                       std::size_t nmax, std::vector<cplx>& out) {
  const std::size_t nl = nmax + 1;
  out.assign(2 * nl, cplx(0.0, 0.0));
  const double ejt = params.ej * std::cos(units::pi * flux_ratio(pulse, t));
  const double g = params.g;

  if (frame == Frame::lab) {
    for (std::size_t n = 0; n < nl; ++n) {
      const double wn = params.omega * double(n);
      out[n] = (wn + ejt) * psi[n];
      out[nl + n] = (wn - ejt) * psi[nl + n];
      // g sigma_x (a† + a): couples the branches through n±1
      cplx cm(0.0, 0.0), cp(0.0, 0.0);
      if (n > 0) {
        const double s = std::sqrt(double(n));
        cm += s * psi[nl + n - 1];
        cp += s * psi[n - 1];
      }
      if (n + 1 < nl) {
        const double s = std::sqrt(double(n + 1));
        cm += s * psi[nl + n + 1];
        cp += s * psi[n + 1];
      }
      out[n] += g * cm;
      out[nl + n] += g * cp;
    }
    return;
  }

  // Rotating frame: (ejt - w) sigma_z + g (s+ e^{2iwt} + s- e^{-2iwt})
  //                 (a† e^{iwt} + a e^{-iwt}),  with s+ = |-><+|.
  const double wt = params.omega * t;
  const cplx e_p(std::cos(wt), std::sin(wt));    // e^{+iwt}
  const cplx e_m = std::conj(e_p);               // e^{-iwt}
  const cplx e2_p = e_p * e_p;
  const cplx e2_m = e_m * e_m;
  const double dz = ejt - params.omega;
  for (std::size_t n = 0; n < nl; ++n) {
    out[n] = dz * psi[n];
    out[nl + n] = -dz * psi[nl + n];
    cplx fm(0.0, 0.0), fp(0.0, 0.0);  // (a† e^{iwt} + a e^{-iwt}) on each block
    if (n > 0) {
      const double s = std::sqrt(double(n));
      fm += s * e_p * psi[nl + n - 1];
      fp += s * e_p * psi[n - 1];
    }
    if (n + 1 < nl) {
      const double s = std::sqrt(double(n + 1));
      fm += s * e_m * psi[nl + n + 1];
      fp += s * e_m * psi[n + 1];
    }
    out[n] += g * e2_p * fm;
    out[nl + n] += g * e2_m * fp;
  }
}

double step_rate_bound(const DeviceParams& params, const PulseSpec& pulse,
                       std::size_t nmax, Frame frame) {
  const double coupling = 2.0 * params.g * std::sqrt(double(nmax + 1));
  if (frame == Frame::lab) {
    return params.omega * double(nmax) + params.ej + coupling;
  }
  const DetuningRange r = detuning_range(params, pulse);
  return r.max_abs + 3.0 * params.omega + coupling;
}

Propagation propagate(const JointState& state, const DeviceParams& params,
                      const PulseSpec& pulse, double t_end,
                      const PropagatorConfig& cfg) {
  if (t_end < state.time) {
    throw ConfigError("propagate: t_end precedes the state time");
  }
  const double rate = step_rate_bound(params, pulse, state.nmax, cfg.frame);
  if (cfg.dt * rate > 0.05) {
    std::ostringstream os;
    os << "propagate: step rule violated (dt*rate = " << cfg.dt * rate
       << " > 0.05)";
    throw NumericsError(os.str());
  }
  if (cfg.frame != state.frame) {
    throw ConfigError("propagate: config frame differs from the state frame");
  }

  Propagation result;
  result.state = state;
  result.top_occupancy = 0.0;
  JointState& st = result.state;

  const double span = t_end - state.time;
  const std::size_t steps =
      span > 0.0 ? static_cast<std::size_t>(std::ceil(span / cfg.dt)) : 0;
  result.steps = steps;
  const double dt = steps > 0 ? span / double(steps) : 0.0;

  const std::size_t dim = st.dim();
  std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim), h(dim);
  const cplx mi(0.0, -1.0);

  std::array<double, 2> prev_arg{};
  for (int b = 0; b < 2; ++b) {
    const cplx a = st.branch_mean_a(b == 0 ? Branch::minus : Branch::plus);
    prev_arg[b] = (std::abs(a) > 0.0) ? std::arg(a) : st.arg_acc[b];
  }

  for (std::size_t s = 0; s < steps; ++s) {
    const double t = st.time;
    hamiltonian_apply(params, pulse, t, cfg.frame, st.amplitudes, st.nmax, h);
    for (std::size_t i = 0; i < dim; ++i) k1[i] = mi * h[i];
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = st.amplitudes[i] + 0.5 * dt * k1[i];
    hamiltonian_apply(params, pulse, t + 0.5 * dt, cfg.frame, tmp, st.nmax, h);
    for (std::size_t i = 0; i < dim; ++i) k2[i] = mi * h[i];
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = st.amplitudes[i] + 0.5 * dt * k2[i];
    hamiltonian_apply(params, pulse, t + 0.5 * dt, cfg.frame, tmp, st.nmax, h);
    for (std::size_t i = 0; i < dim; ++i) k3[i] = mi * h[i];
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = st.amplitudes[i] + dt * k3[i];
    hamiltonian_apply(params, pulse, t + dt, cfg.frame, tmp, st.nmax, h);
    for (std::size_t i = 0; i < dim; ++i) k4[i] = mi * h[i];
    for (std::size_t i = 0; i < dim; ++i) {
      st.amplitudes[i] +=
          dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    st.time = state.time + double(s + 1) * dt;

    for (int b = 0; b < 2; ++b) {
      const cplx a = st.branch_mean_a(b == 0 ? Branch::minus : Branch::plus);
      if (std::abs(a) > 0.0) {
        const double arg = std::arg(a);
        st.arg_acc[b] += wrap_to_pi(arg - prev_arg[b]);
        prev_arg[b] = arg;
      }
    }
  }

  result.norm_drift = std::abs(st.norm() - 1.0);
  const std::size_t nl = st.nmax + 1;
  double top = 0.0;
  for (std::size_t b = 0; b < 2; ++b) {
    top += std::norm(st.amplitudes[b * nl + nl - 1]);
    if (nl >= 2) top += std::norm(st.amplitudes[b * nl + nl - 2]);
  }
  result.top_occupancy = top;
  if (top > 1e-6) {
    std::ostringstream os;
    os << "propagate: truncation leak, top two Fock levels hold " << top
       << " population";
    throw NumericsError(os.str());
  }
  return result;
}

JointState to_frame(const JointState& state, const DeviceParams& params,
                    Frame target) {
  if (state.frame == target) return state;
  JointState out = state;
  out.frame = target;
  const std::size_t nl = state.nmax + 1;
  const double wt = params.omega * state.time;
  // |psi_rot> = R_f |psi_lab>, R_f = exp[i w t (sigma_z + a†a)]
  const double sign = (target == Frame::rotating) ? 1.0 : -1.0;
  for (std::size_t n = 0; n < nl; ++n) {
    const cplx pm = std::exp(cplx(0.0, sign * wt * (1.0 + double(n))));
    const cplx pp = std::exp(cplx(0.0, sign * wt * (-1.0 + double(n))));
    out.amplitudes[n] *= pm;
    out.amplitudes[nl + n] *= pp;
  }
  for (int b = 0; b < 2; ++b) {
    const cplx a = out.branch_mean_a(b == 0 ? Branch::minus : Branch::plus);
    if (std::abs(a) > 0.0) out.arg_acc[b] = std::arg(a);
  }
  return out;
}

BranchPhaseInfo conditional_phase_exact(const JointState& final_state,
                                        Branch branch) {
  const int b = (branch == Branch::minus) ? 0 : 1;
  const double p = final_state.branch_norm2(branch);
  if (p < 1e-12) throw NumericsError("conditional_phase_exact: empty branch");

  BranchPhaseInfo info;
  info.branch_norm = std::sqrt(p);
  info.phase = final_state.arg_acc[b] - final_state.arg_origin[b];

  // sup over chi of |<alpha0 e^{i chi}|field_b>|^2 / p.  The overlap is a
  // Fourier series in chi; a dense scan plus parabolic refinement is ample.
  const std::size_t nl = final_state.nmax + 1;
  const double amag = std::abs(final_state.alpha0);
  std::vector<cplx> coeff(nl);  // conj coherent coefficients, phase stripped
  {
    std::vector<cplx> ref = coherent_state(amag, final_state.nmax);
    for (std::size_t n = 0; n < nl; ++n) {
      coeff[n] = std::conj(ref[n]) * final_state.amplitudes[b * nl + n];
    }
  }
  auto overlap2 = [&](double chi) {
    cplx s(0.0, 0.0);
    for (std::size_t n = 0; n < nl; ++n) {
      s += coeff[n] * std::exp(cplx(0.0, -double(n) * chi));
    }
    return std::norm(s);
  };
  const std::size_t scan = 1024;
  double best_chi = 0.0, best = -1.0;
  for (std::size_t i = 0; i < scan; ++i) {
    const double chi = 2.0 * units::pi * double(i) / double(scan);
    const double o = overlap2(chi);
    if (o > best) {
      best = o;
      best_chi = chi;
    }
  }
  const double h = 2.0 * units::pi / double(scan);
  for (int iter = 0; iter < 40; ++iter) {
    const double step = h / std::pow(2.0, iter);
    const double om = overlap2(best_chi - step);
    const double op = overlap2(best_chi + step);
    if (om > best) {
      best = om;
      best_chi -= step;
    } else if (op > best) {
      best = op;
      best_chi += step;
    }
    if (step < 1e-12) break;
  }
  info.coherent_fidelity = best / p;
  return info;
}

}  // namespace catqed
