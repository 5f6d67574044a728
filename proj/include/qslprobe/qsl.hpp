#pragma once

#include <optional>

#include "qslprobe/dynamics.hpp"

namespace qslprobe {

// Reported in SI units: energies in joules, times in seconds.
struct EnergyStats {
    double mean_energy = 0.0;       // J, time average of <psi(t)|H(t)|psi(t)>
    double energy_stddev = 0.0;     // J, time average of the instantaneous stddev
    double effective_energy = 0.0;  // J, <psi0| H_eff(U(T), T) |psi0>
    double duration = 0.0;          // s
};

struct QslBounds {
    double t_mt = 0.0;             // s
    std::optional<double> t_ml;    // s; only for time-independent H with ground energy 0
    double t_effective = 0.0;      // max of the bounds present
};

struct EnergyLowerBounds {
    double e_lower = 0.0;        // J
    double delta_e_lower = 0.0;  // J
};

// Time averages of the instantaneous energy expectation and stddev over
// [0, T], sampled at the same step midpoints the propagator evaluates H at,
// plus the effective energy from the nonnegative-branch log of U(T).
// With shift_ground_to_zero, the minimum instantaneous eigenvalue of H(t)
// is subtracted before the mean-energy average (the stddev is shift
// invariant; the effective energy keeps its own [0, 2pi/T) convention).
EnergyStats time_averaged_stats(const HamiltonianTrajectory& h, const StateVector& psi0,
                                int steps, bool shift_ground_to_zero = false);

// Mandelstam-Tamm: pi*hbar / (2 * delta_e). delta_e in joules.
double mt_bound(double delta_e);

// Margolus-Levitin: pi*hbar / (2 * e), valid for a time-independent
// Hamiltonian whose ground energy is zero. e in joules.
double ml_bound(double e);

// The caller asserts time-independence with ground energy zero by passing a
// mean energy; the effective bound is the greater of the two.
QslBounds combined_bounds(double delta_e, std::optional<double> e_ground_zero = std::nullopt);

// Inverse reading of the bounds: a state orthogonalized in time tau implies
// E >= pi*hbar/(2 tau) and Delta E >= pi*hbar/(2 tau).
EnergyLowerBounds invert_qsl(double tau);

// First t in (0, T] with |<psi0|psi(t)>| <= tol, located by scanning the
// propagation grid and refining (ternary search on the local minimum, then
// bisection on the tol crossing) to 1e-12 * T time resolution. nullopt when
// the overlap magnitude never reaches tol.
std::optional<double> orthogonalization_time(const HamiltonianTrajectory& h,
                                             const StateVector& psi0, double tol = 1e-6,
                                             int steps = 2048);

// MT bound generalized to a non-orthogonal target with infidelity epsilon:
// hbar * arccos(sqrt(epsilon)) / delta_e (exact Bures-angle form).
double corrected_mt_bound(double delta_e, double epsilon);

}  // namespace qslprobe
