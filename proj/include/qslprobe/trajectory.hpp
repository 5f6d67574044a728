#pragma once

#include <functional>

#include "qslprobe/matrix.hpp"

namespace qslprobe {

enum class Smoothness { PiecewiseConstant, Smooth };

// Time-dependent Hamiltonian on [0, duration]. The evaluator must return a
// Hermitian dim x dim matrix in angular-frequency units (rad/s) for every
// sampled t in range.
struct HamiltonianTrajectory {
    int dim = 0;
    double duration = 0.0;  // seconds, > 0
    std::function<ComplexMatrix(double)> evaluator;
    Smoothness smoothness = Smoothness::Smooth;

    // Validated sample: clamps t into [0, duration], checks shape and hermiticity.
    ComplexMatrix at(double t) const;
};

HamiltonianTrajectory constant_hamiltonian(const ComplexMatrix& h, double duration);

// Same evaluator, coupling scaled by lambda.
HamiltonianTrajectory scaled(const HamiltonianTrajectory& traj, double lambda);

// Same evaluator restricted to [0, new_duration] (new_duration <= duration).
HamiltonianTrajectory restricted(const HamiltonianTrajectory& traj, double new_duration);

}  // namespace qslprobe
