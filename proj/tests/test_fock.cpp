#include "catqed/fock.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "catqed/errors.hpp"
#include "catqed/units.hpp"
#include "doctest.h"

using namespace catqed;

namespace {

DeviceParams small_device() {
  DeviceParams d;
  d.omega = 9e11;
  d.ej = 4.5e11;
  d.ec = 250.0 * units::microev_over_hbar;
  d.gap = 458.3 * units::microev_over_hbar;
  d.g = 2.0 * units::pi * 50e6;
  d.temperature = 0.030;
  d.ng = 0.5;
  return d;
}

PulseSpec test_pulse() {
  return PulseSpec{0.7, units::pi / 7.5e-9, 0.3, 7.5e-9};
}

std::vector<cplx> random_state(std::size_t dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<cplx> v(dim);
  double norm2 = 0.0;
  for (auto& x : v) {
    x = cplx(n(rng), n(rng));
    norm2 += std::norm(x);
  }
  for (auto& x : v) x /= std::sqrt(norm2);
  return v;
}

}  // namespace

TEST_CASE("coherent state basics") {
  SUBCASE("vacuum") {
    const auto v = coherent_state(cplx(0.0, 0.0), 16);
    CHECK(std::abs(v[0] - 1.0) < 1e-12);
    for (std::size_t n = 1; n < v.size(); ++n) CHECK(std::abs(v[n]) == 0.0);
  }

  SUBCASE("mean photon number") {
    const auto v = coherent_state(cplx(1.0, 0.0), 32);
    double nbar = 0.0, norm = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) {
      nbar += double(n) * std::norm(v[n]);
      norm += std::norm(v[n]);
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nbar == doctest::Approx(1.0).epsilon(1e-8));
  }

  SUBCASE("overlap <alpha|-alpha> = exp(-2|alpha|^2)") {
    for (double a : {0.5, 1.0, 1.5}) {
      const auto vp = coherent_state(cplx(a, 0.0), 40);
      const auto vm = coherent_state(cplx(-a, 0.0), 40);
      cplx ov(0.0, 0.0);
      for (std::size_t n = 0; n < vp.size(); ++n) ov += std::conj(vp[n]) * vm[n];
      CHECK(std::abs(ov - std::exp(-2.0 * a * a)) < 1e-8);
    }
  }

  SUBCASE("truncation rule enforced") {
    CHECK_THROWS_AS(coherent_state(cplx(1.0, 0.0), 8), NumericsError);
  }
}

TEST_CASE("hamiltonian apply: hermiticity and eigenvector") {
  const DeviceParams d = small_device();
  const PulseSpec p = test_pulse();
  const std::size_t nmax = 12;
  const std::size_t dim = 2 * (nmax + 1);

  // g = 0, lab frame: |-,n> is an eigenvector with eigenvalue n w + ej cos
  DeviceParams d0 = d;
  d0.g = 0.0;
  std::vector<cplx> v(dim, cplx(0.0, 0.0)), hv;
  const std::size_t n = 5;
  v[n] = 1.0;
  hamiltonian_apply(d0, p, 1e-9, Frame::lab, v, nmax, hv);
  const double expected =
      d.omega * double(n) + d.ej * std::cos(units::pi * flux_ratio(p, 1e-9));
  CHECK(hv[n].real() == doctest::Approx(expected).epsilon(1e-14));
  for (std::size_t i = 0; i < dim; ++i) {
    if (i != n) CHECK(std::abs(hv[i]) == 0.0);
  }

  // hermiticity: <psi|H phi> == conj(<phi|H psi>) on random vectors
  for (Frame fr : {Frame::lab, Frame::rotating}) {
    const auto psi = random_state(dim, 41);
    const auto phi = random_state(dim, 42);
    std::vector<cplx> hphi, hpsi;
    hamiltonian_apply(d, p, 2e-9, fr, phi, nmax, hphi);
    hamiltonian_apply(d, p, 2e-9, fr, psi, nmax, hpsi);
    cplx a(0.0, 0.0), b(0.0, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      a += std::conj(psi[i]) * hphi[i];
      b += std::conj(phi[i]) * hpsi[i];
    }
    CHECK(std::abs(a - std::conj(b)) < 1e-12 * d.omega);
  }
}

TEST_CASE("propagate: identity, decoupled field, norm") {
  const DeviceParams d = small_device();
  const PulseSpec p = test_pulse();
  const std::size_t nmax = 20;
  const JointState init =
      make_joint_state(1.0, 1.0, cplx(0.5, 0.0), nmax, Frame::lab);

  SUBCASE("zero-duration propagation is the identity") {
    PropagatorConfig cfg{1e-15, Frame::lab};
    const auto out = propagate(init, d, p, 0.0, cfg);
    CHECK(out.steps == 0);
    for (std::size_t i = 0; i < init.dim(); ++i) {
      CHECK(out.state.amplitudes[i] == init.amplitudes[i]);
    }
  }

  SUBCASE("g = 0: analytic free evolution") {
    DeviceParams d0 = d;
    d0.g = 0.0;
    const double t_end = 0.5e-9;
    PropagatorConfig cfg{0.01 / step_rate_bound(d0, p, nmax, Frame::lab),
                         Frame::lab};
    const auto out = propagate(init, d0, p, t_end, cfg);
    CHECK(out.norm_drift < 1e-9);

    // analytic phases: field e^{-i n w t}, qubit e^{-(+/-) i int ej cos}
    const TimeGrid grid{0.0, t_end, 20001};
    double ej_int = 0.0;
    for (std::size_t k = 0; k + 1 < grid.n; ++k) {
      const auto e = [&](double t) {
        return d.ej * std::cos(units::pi * flux_ratio(p, t));
      };
      ej_int += 0.5 * grid.dt() * (e(grid.time(k)) + e(grid.time(k + 1)));
    }
    cplx fid(0.0, 0.0);
    const std::size_t nl = nmax + 1;
    for (std::size_t b = 0; b < 2; ++b) {
      const double sz = b == 0 ? 1.0 : -1.0;
      for (std::size_t n = 0; n < nl; ++n) {
        const cplx ph =
            std::exp(cplx(0.0, -(d.omega * double(n) * t_end + sz * ej_int)));
        fid += std::conj(ph * init.amplitudes[b * nl + n]) *
               out.state.amplitudes[b * nl + n];
      }
    }
    CHECK(std::abs(fid) == doctest::Approx(1.0).epsilon(1e-8));
  }

  SUBCASE("step rule violation is rejected") {
    PropagatorConfig cfg{1.0 / step_rate_bound(d, p, nmax, Frame::lab),
                         Frame::lab};
    CHECK_THROWS_AS(propagate(init, d, p, 1e-9, cfg), NumericsError);
  }
}

TEST_CASE("propagate: fourth-order step refinement") {
  const DeviceParams d = small_device();
  const PulseSpec p = test_pulse();
  const std::size_t nmax = 16;
  const JointState init =
      make_joint_state(1.0, 1.0, cplx(0.5, 0.0), nmax, Frame::rotating);
  const double t_end = 0.2e-9;

  auto overlap_defect = [&](double dt) {
    PropagatorConfig cfg{dt, Frame::rotating};
    PropagatorConfig fine{dt / 8.0, Frame::rotating};
    const auto a = propagate(init, d, p, t_end, cfg);
    const auto b = propagate(init, d, p, t_end, fine);
    cplx ov(0.0, 0.0);
    for (std::size_t i = 0; i < init.dim(); ++i) {
      ov += std::conj(a.state.amplitudes[i]) * b.state.amplitudes[i];
    }
    return 1.0 - std::abs(ov);
  };

  const double base = 0.04 / step_rate_bound(d, p, nmax, Frame::rotating);
  const double e1 = overlap_defect(base);
  const double e2 = overlap_defect(base / 2.0);
  CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("frame equivalence: lab and rotating propagation agree") {
  const DeviceParams d = small_device();
  const PulseSpec p = test_pulse();
  const std::size_t nmax = 16;
  const double t_end = 0.3e-9;

  const JointState lab0 =
      make_joint_state(1.0, 1.0, cplx(0.5, 0.0), nmax, Frame::lab);
  JointState rot0 = lab0;
  rot0.frame = Frame::rotating;  // at t = 0 the frames coincide

  const double rate_lab = step_rate_bound(d, p, nmax, Frame::lab);
  const double rate_rot = step_rate_bound(d, p, nmax, Frame::rotating);
  const auto lab_out =
      propagate(lab0, d, p, t_end, PropagatorConfig{0.005 / rate_lab, Frame::lab});
  const auto rot_out = propagate(
      rot0, d, p, t_end, PropagatorConfig{0.005 / rate_rot, Frame::rotating});

  const JointState mapped = to_frame(lab_out.state, d, Frame::rotating);
  double worst = 0.0;
  for (std::size_t i = 0; i < lab0.dim(); ++i) {
    worst = std::max(worst,
                     std::abs(mapped.amplitudes[i] - rot_out.state.amplitudes[i]));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("propagate: linearity") {
  const DeviceParams d = small_device();
  const PulseSpec p = test_pulse();
  const std::size_t nmax = 14;
  const double t_end = 0.1e-9;
  const PropagatorConfig cfg{
      0.01 / step_rate_bound(d, p, nmax, Frame::rotating), Frame::rotating};

  JointState a = make_joint_state(1.0, 0.5, cplx(0.4, 0.1), nmax, Frame::rotating);
  JointState b = make_joint_state(0.2, 1.0, cplx(0.4, 0.1), nmax, Frame::rotating);
  JointState mix = a;
  for (std::size_t i = 0; i < mix.dim(); ++i) {
    mix.amplitudes[i] = 0.6 * a.amplitudes[i] + 0.8 * b.amplitudes[i];
  }
  const double mix_norm = mix.norm();
  for (auto& x : mix.amplitudes) x /= mix_norm;

  const auto ua = propagate(a, d, p, t_end, cfg);
  const auto ub = propagate(b, d, p, t_end, cfg);
  const auto umix = propagate(mix, d, p, t_end, cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < mix.dim(); ++i) {
    const cplx expect =
        (0.6 * ua.state.amplitudes[i] + 0.8 * ub.state.amplitudes[i]) / mix_norm;
    worst = std::max(worst, std::abs(expect - umix.state.amplitudes[i]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("conditional_phase_exact on fresh and trivial states") {
  const JointState st =
      make_joint_state(1.0, 1.0, cplx(0.7, 0.0), 24, Frame::rotating);
  const auto info = conditional_phase_exact(st, Branch::minus);
  CHECK(info.phase == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(info.branch_norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(info.coherent_fidelity == doctest::Approx(1.0).epsilon(1e-10));

  // g = 0 in the rotating frame leaves the field untouched
  DeviceParams d = small_device();
  d.g = 0.0;
  const PulseSpec p = test_pulse();
  const PropagatorConfig cfg{
      0.01 / step_rate_bound(d, p, 24, Frame::rotating), Frame::rotating};
  const auto out = propagate(st, d, p, 0.4e-9, cfg);
  const auto after = conditional_phase_exact(out.state, Branch::plus);
  CHECK(std::abs(after.phase) < 1e-9);
  CHECK(after.coherent_fidelity == doctest::Approx(1.0).epsilon(1e-9));

  // empty branch
  const JointState empty =
      make_joint_state(1.0, 0.0, cplx(0.5, 0.0), 24, Frame::rotating);
  CHECK_THROWS_AS(conditional_phase_exact(empty, Branch::plus), NumericsError);
}

TEST_CASE("truncation convergence: nmax 16 vs 32 for |alpha| <= 1") {
  DeviceParams d = small_device();
  d.g = 2.0 * units::pi * 20e6;
  const PulseSpec p = test_pulse();
  const double t_end = 1.0e-9;

  auto run = [&](std::size_t nmax) {
    const JointState init =
        make_joint_state(1.0, 1.0, cplx(0.5, 0.0), nmax, Frame::rotating);
    const PropagatorConfig cfg{
        0.02 / step_rate_bound(d, p, 32, Frame::rotating), Frame::rotating};
    const auto out = propagate(init, d, p, t_end, cfg);
    return conditional_phase_exact(out.state, Branch::minus);
  };
  const auto a = run(16);
  const auto b = run(32);
  CHECK(std::abs(a.phase - b.phase) < 1e-8);
  CHECK(std::abs(a.coherent_fidelity - b.coherent_fidelity) < 1e-8);
}
