#pragma once

#include <Eigen/Dense>
#include <cstddef>

namespace catqed {

// Field density operator in the Fock basis, truncated at nmax.
// Contract: hermitian (residual < 1e-12), trace 1 +- 1e-12,
// min eigenvalue >= -1e-10.
struct FieldDensity {
  std::size_t nmax = 0;
  Eigen::MatrixXcd matrix;  // (nmax+1) x (nmax+1)

  // Throws NumericsError when the contract is violated.
  void validate() const;
};

}  // namespace catqed
