#include "catqed/decoherence.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "catqed/errors.hpp"
#include "catqed/fock.hpp"
#include "catqed/units.hpp"

namespace catqed {

void BathParams::validate() const {
  if (!(beta > 0.0)) throw ConfigError("bath.beta must be > 0");
  if (!(temperature > 0.0)) throw ConfigError("bath.temperature must be > 0");
  if (!(delta_e > 0.0)) throw ConfigError("bath.delta_e must be > 0");
  if (!(scale >= 1.0)) throw ConfigError("bath.scale must be >= 1");
}

double delta_e(const DeviceParams& params) {
  const double bx = 2.0 * params.ej;
  const double bz = 4.0 * params.ec * (1.0 - 2.0 * params.ng);
  return std::sqrt(bx * bx + bz * bz);
}

Timescales timescales(const BathParams& bath) {
  bath.validate();
  const double kbt = bath.temperature * units::kelvin_over_hbar;  // rad/s
  const double de_dyn = bath.delta_e_scaled();
  const double de_thermal = bath.scale_lambda ? de_dyn : bath.delta_e;
  Timescales ts;
  ts.lambda = de_thermal / (2.0 * kbt);
  ts.tau_r = 1.0 / (units::pi * bath.beta * de_dyn / std::tanh(ts.lambda));
  ts.tau_phi = 1.0 / (0.5 / ts.tau_r + 2.0 * units::pi * bath.beta * kbt);
  return ts;
}

DetectionProbabilities probabilities(const BathParams& bath, double t) {
  if (t < 0.0) throw ConfigError("probabilities: t must be >= 0");
  const Timescales ts = timescales(bath);
  const double de = bath.delta_e_scaled();
  const double osc = std::cos(de * t) * std::exp(-t / ts.tau_phi);
  DetectionProbabilities p;
  if (bath.simplified) {
    p.p0 = 0.5 * (1.0 + osc);
    p.p1 = 0.5 * (1.0 - osc);
  } else {
    const double th = std::tanh(ts.lambda);
    const double relax = th + (1.0 - th) * std::exp(-t / ts.tau_r);
    p.p0 = 0.5 * (relax + osc);
    p.p1 = 0.5 * (relax - osc);
  }
  const double amp = bath.pt_halved ? 0.5 : 1.0;
  p.pt = cplx(0.0, -amp * std::sin(de * t) * std::exp(-t / ts.tau_phi));
  return p;
}

double coherence_factor(const BathParams& bath, double t) {
  const Timescales ts = timescales(bath);
  return std::cos(bath.delta_e_scaled() * t) * std::exp(-t / ts.tau_phi);
}

JointDensity joint_state(const BathParams& bath, cplx /*alpha*/, double t) {
  const DetectionProbabilities p = probabilities(bath, t);
  JointDensity jd;
  const double tr = p.p0 + p.p1;
  jd.rho << p.p0 / tr, std::conj(p.pt) / tr, p.pt / tr, p.p1 / tr;
  // eigenvalues of [[p0, pt*], [pt, p1]]
  const double mid = 0.5 * (p.p0 + p.p1) / tr;
  const double rad = std::sqrt(0.25 * (p.p0 - p.p1) * (p.p0 - p.p1) / (tr * tr) +
                               std::norm(p.pt) / (tr * tr));
  jd.min_eigenvalue = mid - rad;
  return jd;
}

FieldDensity preselected_field(const BathParams& bath, cplx alpha, double t,
                               std::size_t nmax) {
  if (nmax < min_nmax(alpha)) {
    std::ostringstream os;
    os << "preselected_field: nmax = " << nmax
       << " below the truncation rule (" << min_nmax(alpha) << ")";
    throw NumericsError(os.str());
  }
  const double c = coherence_factor(bath, t);

  // Closed-form coherent coefficients, no truncation renormalization here:
  // the dyad elements keep their analytic values and the full matrix gets
  // one trace renormalization at the end.
  const std::size_t nl = nmax + 1;
  std::vector<cplx> cp(nl), cm(nl);
  cp[0] = cm[0] = std::exp(-0.5 * std::norm(alpha));
  for (std::size_t n = 0; n + 1 < nl; ++n) {
    cp[n + 1] = cp[n] * alpha / std::sqrt(double(n + 1));
    cm[n + 1] = cm[n] * (-alpha) / std::sqrt(double(n + 1));
  }

  FieldDensity rho;
  rho.nmax = nmax;
  rho.matrix.resize(nl, nl);
  for (std::size_t m = 0; m < nl; ++m) {
    for (std::size_t n = 0; n < nl; ++n) {
      const cplx v = cp[m] * std::conj(cp[n]) + cm[m] * std::conj(cm[n]) +
                     c * (cp[m] * std::conj(cm[n]) + cm[m] * std::conj(cp[n]));
      rho.matrix(m, n) = v;
    }
  }
  // Hermitize against rounding asymmetry, then renormalize the trace.
  rho.matrix = 0.5 * (rho.matrix + rho.matrix.adjoint()).eval();
  const double tr = rho.matrix.trace().real();
  if (!(tr > 0.0)) throw NumericsError("preselected_field: nonpositive trace");
  rho.matrix /= tr;
  return rho;
}

SequentialProbs sequential_probs(const BathParams& bath, double t) {
  const DetectionProbabilities p = probabilities(bath, t);
  return SequentialProbs{p.p0, p.p1};
}

DetectionRecord sample_sequence(const BathParams& bath, std::uint64_t seed,
                                std::size_t n_cycles, double interval) {
  if (n_cycles < 1) throw ConfigError("sample_sequence: n_cycles must be >= 1");
  if (interval < 0.0) throw ConfigError("sample_sequence: interval must be >= 0");
  const double p0 = probabilities(bath, interval).p0;
  DetectionRecord rec;
  rec.seed = seed;
  rec.interval = interval;
  rec.outcomes.resize(n_cycles);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n_cycles; ++i) {
    // 53-bit uniform in [0, 1); explicit so the stream is stdlib-independent
    const double u = double(rng() >> 11) * 0x1.0p-53;
    rec.outcomes[i] = u < p0 ? 0 : 1;
  }
  return rec;
}

std::vector<double> coherence_profile(const BathParams& bath,
                                      const TimeGrid& grid) {
  grid.validate();
  std::vector<double> out(grid.n);
  for (std::size_t k = 0; k < grid.n; ++k) {
    out[k] = 2.0 * probabilities(bath, grid.time(k)).p0 - 1.0;
  }
  return out;
}

}  // namespace catqed
