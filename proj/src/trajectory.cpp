#include "qslprobe/trajectory.hpp"

#include <algorithm>

#include "qslprobe/errors.hpp"

namespace qslprobe {

ComplexMatrix HamiltonianTrajectory::at(double t) const {
    if (!evaluator) throw InvalidMatrix("HamiltonianTrajectory: missing evaluator");
    if (duration <= 0.0) throw InvalidDuration("HamiltonianTrajectory: duration must be > 0");
    t = std::clamp(t, 0.0, duration);
    ComplexMatrix h = evaluator(t);
    if (h.rows() != dim || h.cols() != dim)
        throw DimensionError("HamiltonianTrajectory: evaluator dimension mismatch");
    if (!is_hermitian(h))
        throw InvalidMatrix("HamiltonianTrajectory: evaluator returned a non-Hermitian sample");
    return h;
}

HamiltonianTrajectory constant_hamiltonian(const ComplexMatrix& h, double duration) {
    require_hermitian(h, "constant_hamiltonian");
    if (duration <= 0.0) throw InvalidDuration("constant_hamiltonian: duration must be > 0");
    HamiltonianTrajectory traj;
    traj.dim = static_cast<int>(h.rows());
    traj.duration = duration;
    traj.evaluator = [h](double) { return h; };
    traj.smoothness = Smoothness::PiecewiseConstant;
    return traj;
}

HamiltonianTrajectory scaled(const HamiltonianTrajectory& traj, double lambda) {
    HamiltonianTrajectory out = traj;
    auto inner = traj.evaluator;
    out.evaluator = [inner, lambda](double t) { return ComplexMatrix(lambda * inner(t)); };
    return out;
}

HamiltonianTrajectory restricted(const HamiltonianTrajectory& traj, double new_duration) {
    if (new_duration <= 0.0 || new_duration > traj.duration)
        throw InvalidDuration("restricted: new duration must be in (0, duration]");
    HamiltonianTrajectory out = traj;
    out.duration = new_duration;
    return out;
}

}  // namespace qslprobe
