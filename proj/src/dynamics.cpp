#include "qslprobe/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "qslprobe/errors.hpp"

namespace qslprobe {

namespace {

constexpr double kBranchSnap = 1e-12;       // phases this close to 1 are taken as exact
constexpr double kBranchAmbiguity = 1e-9;   // phases this close to the cut are refused

}  // namespace

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double scale) {
    require_hermitian(h, "expm_hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (es.info() != Eigen::Success)
        throw InvalidMatrix("expm_hermitian: eigendecomposition failed");
    const auto& w = es.eigenvalues();
    Eigen::VectorXcd phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k)
        phases(k) = std::polar(1.0, scale * w(k));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix logm_principal_nonneg(const ComplexMatrix& u, double tau) {
    require_unitary(u, "logm_principal_nonneg");
    if (tau <= 0.0) throw InvalidDuration("logm_principal_nonneg: tau must be > 0");

    // Schur of a normal matrix: Q unitary, T numerically diagonal. Using the
    // Schur basis keeps the reconstructed H_eff Hermitian even under
    // degenerate eigenphases.
    Eigen::ComplexSchur<ComplexMatrix> schur(u);
    if (schur.info() != Eigen::Success)
        throw InvalidMatrix("logm_principal_nonneg: Schur decomposition failed");
    const ComplexMatrix& q = schur.matrixU();
    const auto diag = schur.matrixT().diagonal();

    const double two_pi = 2.0 * std::numbers::pi;
    Eigen::VectorXd energies(diag.size());
    for (Eigen::Index k = 0; k < diag.size(); ++k) {
        const double theta = std::arg(diag(k));  // in (-pi, pi]; cut sits at 0
        const double dist_to_cut = std::abs(theta);
        if (dist_to_cut <= kBranchSnap) {
            energies(k) = 0.0;
        } else if (dist_to_cut < kBranchAmbiguity) {
            throw BranchAmbiguity(
                "logm_principal_nonneg: eigenphase within 1e-9 of the branch cut");
        } else {
            double phase = std::fmod(-theta, two_pi);
            if (phase < 0.0) phase += two_pi;
            energies(k) = phase / tau;
        }
    }
    ComplexMatrix h = q * energies.asDiagonal() * q.adjoint();
    // symmetrize away Schur roundoff
    return 0.5 * (h + h.adjoint());
}

Propagation propagate(const HamiltonianTrajectory& h, const StateVector& psi0, int steps) {
    if (steps < 16) throw InvalidDuration("propagate: steps must be >= 16");
    require_normalized(psi0, "propagate");
    if (psi0.size() != h.dim) throw DimensionError("propagate: state/Hamiltonian dimension mismatch");
    if (h.duration <= 0.0) throw InvalidDuration("propagate: trajectory duration must be > 0");

    const double dt = h.duration / steps;
    Propagation out;
    out.times.reserve(steps + 1);
    out.states.reserve(steps + 1);
    out.unitaries.reserve(steps + 1);

    ComplexMatrix u = ComplexMatrix::Identity(h.dim, h.dim);
    out.times.push_back(0.0);
    out.states.push_back(psi0);
    out.unitaries.push_back(u);

    for (int k = 0; k < steps; ++k) {
        const double t_mid = (k + 0.5) * dt;
        const ComplexMatrix step = expm_hermitian(h.at(t_mid), -dt);
        u = step * u;
        out.times.push_back((k + 1 == steps) ? h.duration : (k + 1) * dt);
        out.states.push_back(u * psi0);
        out.unitaries.push_back(u);
    }
    return out;
}

double expectation(const StateVector& psi, const ComplexMatrix& a) {
    require_hermitian(a, "expectation");
    require_normalized(psi, "expectation");
    if (psi.size() != a.rows()) throw DimensionError("expectation: dimension mismatch");
    return (psi.adjoint() * a * psi)(0).real();
}

double variance(const StateVector& psi, const ComplexMatrix& a) {
    require_hermitian(a, "variance");
    require_normalized(psi, "variance");
    if (psi.size() != a.rows()) throw DimensionError("variance: dimension mismatch");
    const StateVector apsi = a * psi;
    const double second_moment = apsi.squaredNorm();  // <A^2> exactly, nonnegative
    const double mean = psi.dot(apsi).real();
    double var = second_moment - mean * mean;
    if (var < 0.0) {
        // roundoff only; anything past the tolerance indicates corrupt input
        const double floor = -1e-12 * std::max(1.0, second_moment);
        if (var < floor) throw InvalidMatrix("variance: negative beyond roundoff tolerance");
        var = 0.0;
    }
    return var;
}

Complex overlap(const StateVector& psi, const StateVector& phi) {
    if (psi.size() != phi.size() || psi.size() == 0)
        throw DimensionError("overlap: dimension mismatch");
    return psi.dot(phi);  // Eigen dot conjugates the left argument
}

}  // namespace qslprobe
