#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qslprobe/qsl.hpp"

namespace qslprobe {

struct SuiteResult {
    std::string name;
    int trials = 0;
    int violations = 0;
    double worst_margin = 0.0;  // most negative = worst; > 0 everywhere when passing
    std::string worst_case;
    std::vector<std::string> lines;

    bool passed() const { return violations == 0; }
};

// Randomized-instance suites behind `verify`. Margins are relative slack
// against the inequality under test; any negative margin is a violation.

// MT inequality on constructed-orthogonalization trajectories (dims 2/4/8)
// and ML inequality on ground-zero time-independent instances, plus the
// diag(0, 2E0) saturation witness.
SuiteResult verify_qsl(int trials, std::uint64_t seed);

// Lambda-scaling exponents of |E_eff - E| (expect 2.0 +- 0.1) and of the
// residual after subtracting the second-order formula (expect 3.0 +- 0.2),
// plus exactness on commuting families and the Hermiticity/defect checks.
SuiteResult verify_magnus(int trials, std::uint64_t seed);

// Bures-angle correction: small-epsilon expansion agreement and
// monotonicity of the corrected bound over a dense epsilon grid.
SuiteResult verify_error_correction(int trials, std::uint64_t seed);

namespace testgen {

// Random Hermitian with unit spectral norm.
ComplexMatrix random_hermitian(int dim, std::mt19937_64& gen);

// Smooth random trajectory H(t) = base * (C0 + C1 cos(2pi t/T) + C2 sin(4pi t/T))
// shifted to be positive definite at all sampled times; total action
// ~ `action` radians.
HamiltonianTrajectory random_smooth_psd(int dim, double duration, double action,
                                        std::mt19937_64& gen);

struct OrthoInstance {
    HamiltonianTrajectory traj;
    StateVector psi0;
    double t_perp_expected;  // where the constructed path crosses orthogonality
};

// Transport construction: a smooth path psi(t) from psi0 to an orthogonal
// state (Bures angle phi(t), phi(t_perp) = pi/2), driven by
// H = i(dpsi psi^dag - psi dpsi^dag) plus random Hermitian noise supported on
// the orthogonal complement of psi(t). Guaranteed to orthogonalize; the MT
// product is >= pi/2 by construction of the inequality, not of the instance.
OrthoInstance random_orthogonalizing(int dim, double duration, std::mt19937_64& gen);

// Time-independent ground-zero instance: psi0 an equal superposition of the
// ground state and one excited eigenvector (or an equally weighted
// eigen-triple with spectrum {0, e, 2e}), which reaches orthogonality.
OrthoInstance random_ml_instance(int dim, std::mt19937_64& gen);

struct NoncommutingInstance {
    HamiltonianTrajectory traj;
    StateVector psi0;
};

// Random PSD smooth trajectory plus state, resampled until the second-order
// commutator signal at psi0 is healthy and the third-to-second-order ratio
// is moderate, so the lambda-scaling exponents are identifiable on a
// two-decade window. Instances with a vanishing commutator expectation are
// effectively commuting at psi0 and carry no second-order signal to fit.
NoncommutingInstance random_noncommuting_smooth(int dim, double duration,
                                                std::mt19937_64& gen);

}  // namespace testgen

}  // namespace qslprobe
