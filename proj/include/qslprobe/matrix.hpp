#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qslprobe {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

// max |A_ij - conj(A_ji)| over all entries
double hermiticity_defect(const ComplexMatrix& a);

// Frobenius norm of U^dag U - I
double unitarity_defect(const ComplexMatrix& u);

bool is_hermitian(const ComplexMatrix& a, double rel_tol = 1e-12);
bool is_unitary(const ComplexMatrix& u, double tol = 1e-10);
bool all_finite(const ComplexMatrix& a);

// throw InvalidMatrix / DimensionError when the contract is not met
void require_hermitian(const ComplexMatrix& a, const char* who);
void require_unitary(const ComplexMatrix& u, const char* who, double tol = 1e-10);
void require_square(const ComplexMatrix& a, const char* who);
void require_normalized(const StateVector& psi, const char* who, double tol = 1e-10);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

StateVector basis_state(int dim, int index);

}  // namespace qslprobe
