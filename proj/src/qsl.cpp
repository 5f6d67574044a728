#include "qslprobe/qsl.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "qslprobe/errors.hpp"
#include "qslprobe/units.hpp"

namespace qslprobe {

// The averages sample the instantaneous values at the step midpoints, the
// same points the midpoint-exponential propagator evaluates H at. This keeps
// the discretizations of E, E_eff and the second-order formula consistent
// order by order: on commuting families E and E_eff then agree to machine
// precision, and the lambda-scaling residuals are not polluted by an
// O(lambda dt^2) quadrature mismatch between integration rules.
EnergyStats time_averaged_stats(const HamiltonianTrajectory& h, const StateVector& psi0,
                                int steps, bool shift_ground_to_zero) {
    require_normalized(psi0, "time_averaged_stats");
    if (steps < 16) throw InvalidDuration("time_averaged_stats: steps must be >= 16");
    if (psi0.size() != h.dim)
        throw DimensionError("time_averaged_stats: state/Hamiltonian dimension mismatch");

    const double dt = h.duration / steps;
    const int dim = h.dim;
    ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
    StateVector psi = psi0;
    double mean_acc = 0.0, stddev_acc = 0.0;

    for (int k = 0; k < steps; ++k) {
        const ComplexMatrix hk = h.at((k + 0.5) * dt);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hk);
        if (es.info() != Eigen::Success)
            throw InvalidMatrix("time_averaged_stats: eigendecomposition failed");
        const auto& w = es.eigenvalues();
        const ComplexMatrix& v = es.eigenvectors();

        Eigen::VectorXcd half_phases(dim), full_phases(dim);
        for (int i = 0; i < dim; ++i) {
            half_phases(i) = std::polar(1.0, -0.5 * dt * w(i));
            full_phases(i) = std::polar(1.0, -dt * w(i));
        }
        const StateVector mid = v * (half_phases.asDiagonal() * (v.adjoint() * psi));
        const StateVector hmid = hk * mid;
        double mean = mid.dot(hmid).real();
        const double second = hmid.squaredNorm();
        stddev_acc += std::sqrt(std::max(0.0, second - mean * mean));
        if (shift_ground_to_zero) mean -= w(0);
        mean_acc += mean;

        const ComplexMatrix step = v * full_phases.asDiagonal() * v.adjoint();
        psi = step * psi;
        u = step * u;
    }

    EnergyStats stats;
    stats.duration = h.duration;
    stats.mean_energy = units::joules_from_angular(mean_acc / steps);
    stats.energy_stddev = units::joules_from_angular(stddev_acc / steps);
    const ComplexMatrix h_eff = logm_principal_nonneg(u, h.duration);
    stats.effective_energy = units::joules_from_angular(psi0.dot(h_eff * psi0).real());
    return stats;
}

double mt_bound(double delta_e) {
    if (delta_e <= 0.0) throw InvalidEnergy("mt_bound: delta_e must be > 0");
    return std::numbers::pi * units::hbar / (2.0 * delta_e);
}

double ml_bound(double e) {
    if (e <= 0.0) throw InvalidEnergy("ml_bound: mean energy must be > 0");
    return std::numbers::pi * units::hbar / (2.0 * e);
}

QslBounds combined_bounds(double delta_e, std::optional<double> e_ground_zero) {
    QslBounds bounds;
    bounds.t_mt = mt_bound(delta_e);
    bounds.t_effective = bounds.t_mt;
    if (e_ground_zero) {
        bounds.t_ml = ml_bound(*e_ground_zero);
        bounds.t_effective = std::max(bounds.t_mt, *bounds.t_ml);
    }
    return bounds;
}

EnergyLowerBounds invert_qsl(double tau) {
    if (tau <= 0.0) throw InvalidDuration("invert_qsl: tau must be > 0");
    const double bound = std::numbers::pi * units::hbar / (2.0 * tau);
    return EnergyLowerBounds{bound, bound};
}

namespace {

// |<psi0|psi(t)>| off the grid: one midpoint-exponential step from the
// nearest grid state at or before t.
class OverlapProbe {
  public:
    OverlapProbe(const HamiltonianTrajectory& h, const StateVector& psi0, const Propagation& prop)
        : h_(h), psi0_(psi0), prop_(prop), dt_(h.duration / (prop.times.size() - 1)) {}

    double operator()(double t) const {
        t = std::clamp(t, 0.0, h_.duration);
        auto idx = static_cast<std::size_t>(t / dt_);
        idx = std::min(idx, prop_.times.size() - 1);
        const double t_grid = prop_.times[idx];
        StateVector psi = prop_.states[idx];
        const double rest = t - t_grid;
        if (rest > 0.0) {
            const ComplexMatrix step = expm_hermitian(h_.at(t_grid + 0.5 * rest), -rest);
            psi = step * psi;
        }
        return std::abs(psi0_.dot(psi));
    }

  private:
    const HamiltonianTrajectory& h_;
    const StateVector& psi0_;
    const Propagation& prop_;
    double dt_;
};

}  // namespace

std::optional<double> orthogonalization_time(const HamiltonianTrajectory& h,
                                             const StateVector& psi0, double tol, int steps) {
    if (!(tol > 0.0) || tol > 1e-3)
        throw InvalidFidelity("orthogonalization_time: tol must be in (0, 1e-3]");
    require_normalized(psi0, "orthogonalization_time");

    const Propagation prop = propagate(h, psi0, steps);
    const std::size_t n = prop.times.size();
    std::vector<double> ov(n);
    for (std::size_t k = 0; k < n; ++k) ov[k] = std::abs(psi0.dot(prop.states[k]));

    const OverlapProbe probe(h, psi0, prop);
    const double t_res = 1e-12 * h.duration;

    for (std::size_t k = 1; k < n; ++k) {
        const bool grid_hit = ov[k] <= 2.0 * tol;
        const bool local_min =
            ov[k] <= ov[k - 1] && (k + 1 >= n || ov[k] <= ov[k + 1]);
        if (!grid_hit && !local_min) continue;

        // refine the dip around t_k
        double lo = prop.times[k - 1];
        double hi = prop.times[std::min(k + 1, n - 1)];
        while (hi - lo > t_res) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (probe(m1) <= probe(m2))
                hi = m2;
            else
                lo = m1;
        }
        const double t_min = 0.5 * (lo + hi);
        if (probe(t_min) > tol) continue;

        // bisect the first tol crossing before the dip
        double a = prop.times[k - 1];
        std::size_t back = k - 1;
        while (back > 0 && probe(a) <= tol) a = prop.times[--back];
        double b = t_min;
        while (b - a > t_res) {
            const double mid = 0.5 * (a + b);
            if (probe(mid) <= tol)
                b = mid;
            else
                a = mid;
        }
        return b;
    }
    return std::nullopt;
}

double corrected_mt_bound(double delta_e, double epsilon) {
    if (delta_e <= 0.0) throw InvalidEnergy("corrected_mt_bound: delta_e must be > 0");
    if (!(epsilon >= 0.0) || epsilon >= 1.0)
        throw InvalidFidelity("corrected_mt_bound: epsilon must be in [0, 1)");
    return units::hbar * std::acos(std::sqrt(epsilon)) / delta_e;
}

}  // namespace qslprobe
