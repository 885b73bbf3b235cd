#include "catqed/analysis.hpp"

#include <cmath>
#include <sstream>

#include "catqed/errors.hpp"
#include "catqed/fock.hpp"
#include "catqed/units.hpp"

namespace catqed {

void FieldDensity::validate() const {
  if (matrix.rows() != matrix.cols() ||
      matrix.rows() != static_cast<Eigen::Index>(nmax + 1)) {
    throw NumericsError("FieldDensity: matrix shape does not match nmax");
  }
  const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) {
    std::ostringstream os;
    os << "FieldDensity: hermiticity residual " << herm;
    throw NumericsError(os.str());
  }
  const double tr = matrix.trace().real();
  if (std::abs(tr - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "FieldDensity: trace " << tr;
    throw NumericsError(os.str());
  }
}

std::vector<cplx> cat_state(cplx alpha, CatParity parity, std::size_t nmax) {
  if (nmax < min_nmax(alpha)) {
    throw NumericsError("cat_state: nmax below the truncation rule");
  }
  const double sign = parity == CatParity::even ? 1.0 : -1.0;
  std::vector<cplx> v(nmax + 1);
  cplx cp = std::exp(cplx(-0.5 * std::norm(alpha), 0.0));
  cplx cm = cp;
  double norm2 = 0.0;
  for (std::size_t n = 0; n <= nmax; ++n) {
    v[n] = cp + sign * cm;
    norm2 += std::norm(v[n]);
    cp *= alpha / std::sqrt(double(n + 1));
    cm *= -alpha / std::sqrt(double(n + 1));
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (cplx& x : v) x *= inv;
  return v;
}

namespace {

// Columns of D(beta) on the truncated space: col k = D(beta)|k>, built from
// |beta; 0> = |beta> by  D|k+1> = (a† - conj(beta)) D|k> / sqrt(k+1).
Eigen::MatrixXcd displacement_columns(cplx beta, std::size_t nmax) {
  const auto nl = static_cast<Eigen::Index>(nmax + 1);
  Eigen::MatrixXcd d(nl, nl);
  d.setZero();
  cplx c = std::exp(cplx(-0.5 * std::norm(beta), 0.0));
  for (Eigen::Index m = 0; m < nl; ++m) {
    d(m, 0) = c;
    c *= beta / std::sqrt(double(m + 1));
  }
  for (Eigen::Index k = 0; k + 1 < nl; ++k) {
    const double inv = 1.0 / std::sqrt(double(k + 1));
    d(0, k + 1) = -std::conj(beta) * d(0, k) * inv;
    for (Eigen::Index m = 1; m < nl; ++m) {
      d(m, k + 1) =
          (std::sqrt(double(m)) * d(m - 1, k) - std::conj(beta) * d(m, k)) * inv;
    }
  }
  return d;
}

struct SpectralForm {
  std::vector<double> weights;
  std::vector<Eigen::VectorXcd> vectors;  // padded to the evaluation cutoff
  std::size_t nmax_eval;
};

// Rank decomposition of rho padded into a cutoff large enough for the grid
// extent, so displaced components are not clipped by the truncation.
SpectralForm spectral_form(const FieldDensity& rho, double max_radius) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix);
  SpectralForm sf;
  const double r = max_radius;
  const auto needed =
      static_cast<std::size_t>(std::ceil(r * r + 6.0 * r + 10.0));
  sf.nmax_eval = std::max(rho.nmax, needed);
  const auto nl = static_cast<Eigen::Index>(sf.nmax_eval + 1);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double w = es.eigenvalues()(i);
    if (std::abs(w) < 1e-14) continue;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(nl);
    v.head(es.eigenvectors().rows()) = es.eigenvectors().col(i);
    sf.weights.push_back(w);
    sf.vectors.push_back(std::move(v));
  }
  return sf;
}

double wigner_point_spectral(const SpectralForm& sf, cplx beta) {
  const Eigen::MatrixXcd d = displacement_columns(beta, sf.nmax_eval);
  double w = 0.0;
  for (std::size_t r = 0; r < sf.weights.size(); ++r) {
    // <psi| D P D† |psi> = sum_k (-1)^k |<psi|D|k>|^2
    const Eigen::VectorXcd proj = d.adjoint() * sf.vectors[r];
    double s = 0.0;
    for (Eigen::Index k = 0; k < proj.size(); ++k) {
      const double term = std::norm(proj(k));
      s += (k % 2 == 0) ? term : -term;
    }
    w += sf.weights[r] * s;
  }
  return 2.0 / units::pi * w;
}

}  // namespace

double wigner_point(const FieldDensity& rho, cplx beta) {
  const SpectralForm sf = spectral_form(rho, std::abs(beta));
  return wigner_point_spectral(sf, beta);
}

WignerGrid wigner(const FieldDensity& rho, double x_half, double p_half,
                  std::size_t resolution_per_unit) {
  rho.validate();
  if (resolution_per_unit < 8) {
    throw NumericsError(
        "wigner: grid too coarse, need >= 8 points per phase-space unit");
  }
  WignerGrid grid;
  const auto fill_axis = [&](double half, std::vector<double>& axis) {
    const auto n =
        static_cast<std::size_t>(std::ceil(2.0 * half * double(resolution_per_unit))) + 1;
    axis.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      axis[i] = -half + 2.0 * half * double(i) / double(n - 1);
    }
  };
  fill_axis(x_half, grid.x);
  fill_axis(p_half, grid.p);

  const double rmax = std::hypot(x_half, p_half);
  const SpectralForm sf = spectral_form(rho, rmax);

  grid.values.resize(static_cast<Eigen::Index>(grid.x.size()),
                     static_cast<Eigen::Index>(grid.p.size()));
  for (std::size_t i = 0; i < grid.x.size(); ++i) {
    for (std::size_t j = 0; j < grid.p.size(); ++j) {
      grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          wigner_point_spectral(sf, cplx(grid.x[i], grid.p[j]));
    }
  }
  return grid;
}

double wigner_integral(const WignerGrid& grid) {
  const double dx = grid.x[1] - grid.x[0];
  const double dp = grid.p[1] - grid.p[0];
  double sum = 0.0;
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
    const double wx = (i == 0 || i + 1 == grid.values.rows()) ? 0.5 : 1.0;
    for (Eigen::Index j = 0; j < grid.values.cols(); ++j) {
      const double wp = (j == 0 || j + 1 == grid.values.cols()) ? 0.5 : 1.0;
      sum += wx * wp * grid.values(i, j);
    }
  }
  return sum * dx * dp;
}

double parity(const FieldDensity& rho) {
  double s = 0.0;
  for (Eigen::Index n = 0; n < rho.matrix.rows(); ++n) {
    const double d = rho.matrix(n, n).real();
    s += (n % 2 == 0) ? d : -d;
  }
  return s;
}

double cat_fidelity(const FieldDensity& rho, cplx alpha, CatParity parity) {
  const std::vector<cplx> cat = cat_state(alpha, parity, rho.nmax);
  const Eigen::Map<const Eigen::VectorXcd> v(cat.data(),
                                             static_cast<Eigen::Index>(cat.size()));
  return (v.adjoint() * rho.matrix * v)(0, 0).real();
}

double purity(const FieldDensity& rho) {
  return (rho.matrix * rho.matrix).trace().real();
}

double min_eigenvalue(const FieldDensity& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix,
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace catqed
