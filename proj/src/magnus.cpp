#include "qslprobe/magnus.hpp"

#include <cmath>
#include <limits>

#include "qslprobe/errors.hpp"
#include "qslprobe/qsl.hpp"
#include "qslprobe/units.hpp"

namespace qslprobe {

namespace {

// Midpoint grid shared with the propagator: H is sampled where the
// midpoint-exponential integrator samples it, so the truncated expansions
// here are exactly the low orders of the numerically propagated U, and the
// second-order formula cancels against |E_eff - E| at machine precision.
struct Grid {
    std::vector<double> times;
    double weight;  // uniform midpoint weight dt
};

Grid make_grid(double duration, int steps) {
    Grid g;
    const double dt = duration / steps;
    g.weight = dt;
    g.times.resize(steps);
    for (int k = 0; k < steps; ++k) g.times[k] = (k + 0.5) * dt;
    return g;
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

ComplexMatrix magnus_h_eff_second_order(const HamiltonianTrajectory& h, int steps) {
    if (steps < 32) throw InvalidDuration("magnus_h_eff_second_order: steps must be >= 32");
    const Grid g = make_grid(h.duration, steps);
    const int dim = h.dim;

    ComplexMatrix first = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix comm = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix prefix = ComplexMatrix::Zero(dim, dim);  // sum_{j<i} w H_j

    for (std::size_t i = 0; i < g.times.size(); ++i) {
        const ComplexMatrix hi = h.at(g.times[i]);
        // triangle sum: the diagonal commutator [H_i, H_i] vanishes
        comm += g.weight * (hi * prefix - prefix * hi);
        first += g.weight * hi;
        prefix += g.weight * hi;
    }

    const Complex half_over_i(0.0, -0.5);  // 1/(2i)
    ComplexMatrix out = first / h.duration + (half_over_i / h.duration) * comm;
    return 0.5 * (out + out.adjoint());  // roundoff; structurally Hermitian
}

ComplexMatrix dyson_unitary_second_order(const HamiltonianTrajectory& h, double t, int steps) {
    if (!(t > 0.0) || t > h.duration)
        throw InvalidDuration("dyson_unitary_second_order: t must be in (0, duration]");
    if (steps < 32) throw InvalidDuration("dyson_unitary_second_order: steps must be >= 32");
    const Grid g = make_grid(t, steps);
    const int dim = h.dim;

    ComplexMatrix first = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix second = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix prefix = ComplexMatrix::Zero(dim, dim);

    for (std::size_t i = 0; i < g.times.size(); ++i) {
        const ComplexMatrix hi = h.at(g.times[i]);
        // ordered product integral; half weight on the diagonal cell
        second += g.weight * (hi * prefix) + (0.5 * g.weight * g.weight) * (hi * hi);
        first += g.weight * hi;
        prefix += g.weight * hi;
    }

    return ComplexMatrix::Identity(dim, dim) - Complex(0.0, 1.0) * first - second;
}

double energy_difference_formula(const HamiltonianTrajectory& h, const StateVector& psi0,
                                 int steps) {
    require_normalized(psi0, "energy_difference_formula");
    if (psi0.size() != h.dim)
        throw DimensionError("energy_difference_formula: dimension mismatch");
    const Grid g = make_grid(h.duration, steps);

    // <psi0|[H(t1), H(t2)]|psi0> = 2i Im <H(t1) psi0 | H(t2) psi0>, so the
    // ordered integral is purely imaginary with magnitude |acc|.
    StateVector prefix = StateVector::Zero(h.dim);  // sum_{j<i} w H_j psi0
    double acc = 0.0;
    for (std::size_t i = 0; i < g.times.size(); ++i) {
        const StateVector hpsi = h.at(g.times[i]) * psi0;
        acc += g.weight * 2.0 * hpsi.dot(prefix).imag();
        prefix += g.weight * hpsi;
    }
    return units::joules_from_angular(std::abs(acc) / (2.0 * h.duration));
}

ExpansionReport verify_second_order_scaling(const HamiltonianTrajectory& h,
                                            const StateVector& psi0,
                                            const std::vector<double>& lambdas, int steps) {
    if (lambdas.size() < 2)
        throw InvalidDuration("verify_second_order_scaling: need at least 2 lambdas");
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        if (lambdas[k] > 1.0 || lambdas[k] <= 0.0)
            throw InvalidDuration("verify_second_order_scaling: lambdas must be in (0, 1]");
        if (k > 0 && lambdas[k] >= lambdas[k - 1])
            throw InvalidDuration("verify_second_order_scaling: lambdas must be decreasing");
    }

    ExpansionReport report;
    report.lambdas = lambdas;
    const double formula_base = energy_difference_formula(h, psi0, steps);
    report.second_order_commutator_term = formula_base;

    // exact values of the unscaled trajectory
    {
        const EnergyStats base = time_averaged_stats(h, psi0, steps);
        report.e_eff_exact = base.effective_energy;
        report.e_avg_exact = base.mean_energy;
    }

    // first-order term: <psi0| (1/tau) int H dt |psi0>
    {
        const Grid g = make_grid(h.duration, steps);
        double acc = 0.0;
        for (std::size_t i = 0; i < g.times.size(); ++i)
            acc += g.weight * psi0.dot(h.at(g.times[i]) * psi0).real();
        report.first_order_term = units::joules_from_angular(acc / h.duration);
    }

    std::vector<double> x_diff, y_diff, x_resid, y_resid;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        const double lam = lambdas[k];
        const EnergyStats stats = time_averaged_stats(scaled(h, lam), psi0, steps);
        const double diff = std::abs(stats.effective_energy - stats.mean_energy);
        const double resid = std::abs(diff - lam * lam * formula_base);
        report.differences.push_back(diff);
        report.residuals.push_back(resid);

        // points below the precision floor cannot inform the fit; they are
        // dropped, and the exponent reports as saturated when fewer than
        // three informative points remain (e.g. commuting trajectories).
        // Roundoff accumulates linearly in the step count, so the floor
        // tracks it.
        const double floor_rel = std::max(1e-14, 5e-16 * steps);
        const double scale =
            std::max({std::abs(stats.effective_energy), std::abs(stats.mean_energy),
                      std::numeric_limits<double>::min()});
        if (diff >= floor_rel * scale) {
            x_diff.push_back(std::log(lam));
            y_diff.push_back(std::log(diff));
        }
        if (resid >= floor_rel * scale) {
            x_resid.push_back(std::log(lam));
            y_resid.push_back(std::log(resid));
        }
    }

    report.difference_saturated = x_diff.size() < 3;
    report.residual_saturated = x_resid.size() < 3;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    report.lambda_scaling_exponent =
        report.difference_saturated ? nan : fit_slope(x_diff, y_diff);
    report.residual_scaling_exponent =
        report.residual_saturated ? nan : fit_slope(x_resid, y_resid);
    return report;
}

}  // namespace qslprobe
