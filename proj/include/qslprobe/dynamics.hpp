#pragma once

#include <vector>

#include "qslprobe/matrix.hpp"
#include "qslprobe/trajectory.hpp"

namespace qslprobe {

// exp(i * scale * H) for Hermitian H, via eigendecomposition. Unitary by
// construction (phases on an orthonormal eigenbasis).
ComplexMatrix expm_hermitian(const ComplexMatrix& h, double scale);

// Hermitian H_eff with U = exp(-i * tau * H_eff), branch chosen so every
// eigenvalue of H_eff lies in [0, 2*pi/tau): an eigenvalue e^{i*theta} of U
// maps to energy ((-theta) mod 2*pi) / tau. Eigenphases within 1e-12 of the
// cut (theta = 0) are taken as exactly zero energy; phases between 1e-12 and
// 1e-9 from the cut are ambiguous at this precision and raise BranchAmbiguity
// instead of being silently resolved.
ComplexMatrix logm_principal_nonneg(const ComplexMatrix& u, double tau);

struct Propagation {
    std::vector<double> times;             // steps + 1 grid points, 0 .. T
    std::vector<StateVector> states;       // psi(t_k)
    std::vector<ComplexMatrix> unitaries;  // U(t_k), U(0) = I
};

// Midpoint-exponential integrator:
//   U(t + dt) = exp(-i * dt * H(t + dt/2)) * U(t).
// Unitary by construction; O(dt^2) for smooth H, exact for piecewise-constant
// H whose switching points lie on the grid.
Propagation propagate(const HamiltonianTrajectory& h, const StateVector& psi0, int steps);

// <psi|A|psi> for Hermitian A and normalized psi.
double expectation(const StateVector& psi, const ComplexMatrix& a);

// <A^2> - <A>^2, clamped to 0 when the roundoff-negative result is within
// -1e-12 of zero relative to the magnitude of <A^2>.
double variance(const StateVector& psi, const ComplexMatrix& a);

Complex overlap(const StateVector& psi, const StateVector& phi);

}  // namespace qslprobe
