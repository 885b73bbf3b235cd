#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "catqed/field_density.hpp"
#include "catqed/perturbation.hpp"  // cplx

namespace catqed {

enum class CatParity { even, odd };

// Normalized (|alpha> ± |-alpha>) in the truncated Fock basis.
std::vector<cplx> cat_state(cplx alpha, CatParity parity, std::size_t nmax);

// W(x + i p) on a uniform grid; convention W(b) = (2/pi) Tr[rho D(b) P D†(b)]
// with measure dx dp, so a valid state integrates to 1 and |W| <= 2/pi.
struct WignerGrid {
  std::vector<double> x;
  std::vector<double> p;
  Eigen::MatrixXd values;  // values(i, j) = W(x[i] + i p[j])
};

// Displaced-parity evaluation at one phase-space point.
double wigner_point(const FieldDensity& rho, cplx beta);

// Grid over [-x_half, x_half] x [-p_half, p_half] with resolution_per_unit
// points per phase-space unit (>= 8, else NumericsError).
WignerGrid wigner(const FieldDensity& rho, double x_half, double p_half,
                  std::size_t resolution_per_unit);

// 2-D trapezoid of the grid values (should be 1 within ~1e-3 when the grid
// covers the state).
double wigner_integral(const WignerGrid& grid);

// Tr[rho (-1)^{a†a}]
double parity(const FieldDensity& rho);

// <cat| rho |cat> with the normalized reference cat.
double cat_fidelity(const FieldDensity& rho, cplx alpha, CatParity parity);

double purity(const FieldDensity& rho);
double min_eigenvalue(const FieldDensity& rho);

}  // namespace catqed
