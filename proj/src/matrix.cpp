#include "qslprobe/matrix.hpp"

#include <cmath>

#include "qslprobe/errors.hpp"

namespace qslprobe {

double hermiticity_defect(const ComplexMatrix& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& u) {
    return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
    if (a.rows() != a.cols() || a.rows() == 0) return false;
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) return true;
    return hermiticity_defect(a) <= rel_tol * scale;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
    return u.rows() == u.cols() && u.rows() > 0 && unitarity_defect(u) <= tol;
}

bool all_finite(const ComplexMatrix& a) {
    return a.array().isFinite().all();
}

void require_square(const ComplexMatrix& a, const char* who) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw DimensionError(std::string(who) + ": matrix must be square and nonempty");
}

void require_hermitian(const ComplexMatrix& a, const char* who) {
    require_square(a, who);
    if (!all_finite(a)) throw InvalidMatrix(std::string(who) + ": non-finite entries");
    if (!is_hermitian(a)) throw InvalidMatrix(std::string(who) + ": matrix is not Hermitian");
}

void require_unitary(const ComplexMatrix& u, const char* who, double tol) {
    require_square(u, who);
    if (!all_finite(u)) throw InvalidMatrix(std::string(who) + ": non-finite entries");
    if (unitarity_defect(u) > tol)
        throw InvalidMatrix(std::string(who) + ": matrix is not unitary");
}

void require_normalized(const StateVector& psi, const char* who, double tol) {
    if (psi.size() == 0) throw DimensionError(std::string(who) + ": empty state");
    if (std::abs(psi.squaredNorm() - 1.0) > tol)
        throw InvalidMatrix(std::string(who) + ": state is not normalized");
}

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

StateVector basis_state(int dim, int index) {
    StateVector v = StateVector::Zero(dim);
    v(index) = 1.0;
    return v;
}

}  // namespace qslprobe
