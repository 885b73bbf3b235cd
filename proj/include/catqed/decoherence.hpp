#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "catqed/field_density.hpp"
#include "catqed/model.hpp"
#include "catqed/perturbation.hpp"  // cplx

namespace catqed {

// Ohmic-bath parameters for the after-pulse qubit dephasing.
//
// scale is an artificial divisor applied to delta_e wherever it enters the
// dynamics (oscillation phase, relaxation prefactor) to stretch the
// oscillatory profile for figure work.  The thermal ratio Lambda keeps the
// physical delta_e unless scale_lambda is set; see timescales().
struct BathParams {
  double beta;          // dimensionless dissipation strength
  double temperature;   // K
  double delta_e;       // qubit splitting over hbar [rad/s], physical value
  double scale = 1.0;   // artificial delta_e divisor (>= 1)
  bool pt_halved = false;   // halve the transition amplitude P_T
  bool simplified = false;  // use the tanh(Lambda) -> 1 closed forms
  bool scale_lambda = false;  // insert the scaled delta_e into Lambda too

  double delta_e_scaled() const { return delta_e / scale; }
  void validate() const;
};

// Qubit splitting sqrt((2 EJ)^2 + 16 EC^2 (1-2ng)^2) over hbar.
double delta_e(const DeviceParams& params);

struct Timescales {
  double lambda;   // Delta_E / (2 kB T), dimensionless
  double tau_r;    // relaxation time [s]
  double tau_phi;  // dephasing time [s]
};

// Lambda = delta_e/(2 kB T); tau_r = [pi beta dE coth(Lambda)]^-1;
// tau_phi = [tau_r^-1/2 + 2 pi beta kB T/hbar]^-1, with dE the scaled
// splitting and Lambda per the scale_lambda flag.
Timescales timescales(const BathParams& bath);

struct DetectionProbabilities {
  double p0;
  double p1;
  cplx pt;  // transition amplitude
};

// P0/P1(t) = (1/2){ tanh(L) + [1 - tanh(L)] e^{-t/tau_r}
//                   +- cos(dE t) e^{-t/tau_phi} },
// P_T(t) = -i sin(dE t) e^{-t/tau_phi}  (times 1/2 when pt_halved).
// The simplified flag replaces the first two terms by 1.
DetectionProbabilities probabilities(const BathParams& bath, double t);

// cos(dE_scaled t) e^{-t/tau_phi}: the off-diagonal coherence factor.
double coherence_factor(const BathParams& bath, double t);

// Joint qubit-field state on the {|0>|0_L>, |1>|1_L>} sector, with the
// logical cat states normalized and the trace renormalized to one.
struct JointDensity {
  Eigen::Matrix2cd rho;
  double min_eigenvalue;
};
JointDensity joint_state(const BathParams& bath, cplx alpha, double t);

// Preselected field state: ( |a><a| + |-a><-a| + c(t)(|a><-a| + h.c.) )/N,
// N = 2[1 + c(t) e^{-2|a|^2}], assembled from closed-form coherent-state
// matrix elements and trace-renormalized after truncation.
FieldDensity preselected_field(const BathParams& bath, cplx alpha, double t,
                               std::size_t nmax);

// (P00, P01) for two consecutive detections separated by t.
struct SequentialProbs {
  double p00;
  double p01;
};
SequentialProbs sequential_probs(const BathParams& bath, double t);

struct DetectionRecord {
  std::uint64_t seed;
  double interval;             // time between pulse-and-measure cycles [s]
  std::vector<int> outcomes;   // 0 / 1 per cycle
};

// n_cycles i.i.d. Bernoulli(P1(interval)) detections from a seeded RNG.
// Outcome 0 is drawn with probability P0(interval); bit-stable across runs.
DetectionRecord sample_sequence(const BathParams& bath, std::uint64_t seed,
                                std::size_t n_cycles, double interval);

// 2 P0(t) - 1 on the grid: the decoherence profile of the preselected state.
std::vector<double> coherence_profile(const BathParams& bath,
                                      const TimeGrid& grid);

}  // namespace catqed
