#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "catqed/model.hpp"
#include "catqed/perturbation.hpp"  // cplx, Branch

namespace catqed {

enum class Frame { lab, rotating };

// State on (qubit ⊗ truncated Fock) space.  Basis convention: the qubit
// block index is the sigma_z eigenbasis {|->, |+>} with
// |0> = (|-> + |+>)/sqrt(2); amplitudes are branch-major,
// amp[b*(nmax+1) + n].  arg_acc tracks the unwrapped phase of <a> per
// branch along the propagation; arg_origin is its value at creation.
struct JointState {
  std::size_t nmax = 0;
  std::vector<cplx> amplitudes;
  double time = 0.0;
  Frame frame = Frame::lab;
  cplx alpha0{0.0, 0.0};  // coherent amplitude the field block started from
  std::array<double, 2> arg_acc{0.0, 0.0};
  std::array<double, 2> arg_origin{0.0, 0.0};

  std::size_t dim() const { return 2 * (nmax + 1); }
  double norm() const;
  // <a> restricted to one branch, normalized by the branch population.
  cplx branch_mean_a(Branch b) const;
  double branch_norm2(Branch b) const;
};

// Fixed-step classical 4th-order integrator configuration.  dt must satisfy
// dt * step_rate_bound(...) <= 0.05.
struct PropagatorConfig {
  double dt;
  Frame frame = Frame::rotating;
};

// Smallest Fock cutoff the truncation rule admits for a coherent amplitude.
std::size_t min_nmax(cplx alpha);

// Fock expansion of |alpha>, truncated at nmax and renormalized.
// Throws NumericsError when nmax violates the truncation rule.
std::vector<cplx> coherent_state(cplx alpha, std::size_t nmax);

// (qm |-> + qp |+>) ⊗ |alpha>, normalized.
JointState make_joint_state(cplx qm, cplx qp, cplx alpha, std::size_t nmax,
                            Frame frame);

// H(t) ψ / hbar in rad/s.  Lab frame:
//   ω a†a + ej cos(π Φx/Φ0) σz + g σx (a† + a)
// Rotating frame (counter-rotating terms kept):
//   (ej cos(π Φx/Φ0) − ω) σz + g (σ+ e^{2iωt} + σ- e^{-2iωt})(a† e^{iωt} + a e^{-iωt})
void hamiltonian_apply(const DeviceParams& params, const PulseSpec& pulse,
                       double t, Frame frame, const std::vector<cplx>& psi,
                       std::size_t nmax, std::vector<cplx>& out);

// Rate bound used by the step-size rule: conservative max of the
// instantaneous H/hbar norm plus, in the rotating frame, the e^{3iωt}
// modulation rate.
double step_rate_bound(const DeviceParams& params, const PulseSpec& pulse,
                       std::size_t nmax, Frame frame);

struct Propagation {
  JointState state;
  double norm_drift;      // | ||psi|| - 1 | over the run
  double top_occupancy;   // max population of the two highest Fock levels
  std::size_t steps;
};

// RK4 propagation to t_end.  Throws NumericsError when the step rule is
// violated or the top two Fock levels accumulate > 1e-6 population.
Propagation propagate(const JointState& state, const DeviceParams& params,
                      const PulseSpec& pulse, double t_end,
                      const PropagatorConfig& cfg);

// Map a state between frames at its current time via
// R_f = exp[i w t (sigma_z + a†a)].
JointState to_frame(const JointState& state, const DeviceParams& params,
                    Frame target);

struct BranchPhaseInfo {
  double phase;              // unwrapped arg<a> relative to arg(alpha0)
  double branch_norm;        // sqrt of branch population
  double coherent_fidelity;  // sup_chi |<alpha0 e^{i chi}|field_b>|^2
};

// Conditional field diagnostics for one qubit branch.  Throws NumericsError
// when the branch population is below 1e-12 (empty branch).
BranchPhaseInfo conditional_phase_exact(const JointState& final_state,
                                        Branch branch);

}  // namespace catqed
