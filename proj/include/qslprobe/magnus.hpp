#pragma once

#include <vector>

#include "qslprobe/dynamics.hpp"

namespace qslprobe {

struct ExpansionReport {
    double e_eff_exact = 0.0;                  // J, at lambda = 1
    double e_avg_exact = 0.0;                  // J, at lambda = 1
    double first_order_term = 0.0;             // J, <psi0| (1/tau) int H dt |psi0>
    double second_order_commutator_term = 0.0; // J, the double-integral formula
    double lambda_scaling_exponent = 0.0;      // fitted slope of log|E_eff - E| vs log lambda
    double residual_scaling_exponent = 0.0;    // fitted slope after subtracting the formula
    bool difference_saturated = false;         // differences below the precision floor
    bool residual_saturated = false;
    std::vector<double> lambdas;
    std::vector<double> differences;  // J
    std::vector<double> residuals;    // J
};

// Second-order Magnus truncation of the effective Hamiltonian (rad/s):
//   (1/tau) int_0^tau H dt
//   + (1/(2i tau)) int_{0<t2<t1<tau} [H(t1), H(t2)] dt1 dt2.
// Ordered double integral by a double sum restricted to the triangle, on the
// same midpoint grid the propagator samples.
ComplexMatrix magnus_h_eff_second_order(const HamiltonianTrajectory& h, int steps);

// Second-order Dyson truncation of U(t):
//   I - i int_0^t H dt - int_{0<t2<t1<t} H(t1) H(t2) dt1 dt2.
// Generally non-unitary; the defect is O(H^3) (see unitarity_defect).
ComplexMatrix dyson_unitary_second_order(const HamiltonianTrajectory& h, double t, int steps);

// |E_eff - E| second-order formula (J):
//   (1/(2 tau)) | int_{0<t2<t1<tau} <psi0|[H(t1), H(t2)]|psi0> dt1 dt2 |.
double energy_difference_formula(const HamiltonianTrajectory& h, const StateVector& psi0,
                                 int steps);

// For each lambda (decreasing, all <= 1): scale H -> lambda*H, compute the
// exact E_eff (propagation + nonnegative-branch log) and the exact
// time-averaged E, then fit log|E_eff - E| and log|difference - formula|
// against log lambda. Differences below 1e-14 of the energy scale mark the
// fit as saturated by precision.
ExpansionReport verify_second_order_scaling(const HamiltonianTrajectory& h,
                                            const StateVector& psi0,
                                            const std::vector<double>& lambdas,
                                            int steps = 4096);

}  // namespace qslprobe
