// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 1-2 drive the CLI end to end; the rest run the library.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "qslprobe/backend.hpp"
#include "qslprobe/errors.hpp"
#include "qslprobe/estimator.hpp"
#include "qslprobe/magnus.hpp"
#include "qslprobe/units.hpp"
#include "qslprobe/verify.hpp"

namespace fs = std::filesystem;
using namespace qslprobe;

namespace {

const double kPi = std::numbers::pi;
int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  criterion-%d  %-34s %s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

double round_sig(double value, int digits) {
    if (value == 0.0) return 0.0;
    const double mag = std::pow(10.0, digits - 1 - std::floor(std::log10(std::fabs(value))));
    return std::round(value * mag) / mag;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("missing " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!cells.empty()) rows.push_back(std::move(cells));
    }
    return rows;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QSLPROBE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "qslprobe-acceptance";
    fs::create_directories(dir);
    return dir;
}

// ---------------------------------------------------------------- criterion 1
void criterion_1_table() {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = work_dir() / "estimate";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "device.cfg";

    bool ok = run_cli("device-init " + cfg.string()) == 0;
    ok = ok && run_cli("estimate --device " + cfg.string() + " --out " + (dir / "out").string() +
                       " --seed 4242 --jitter 0 --resolution 0") == 0;

    std::string detail;
    if (ok) {
        const std::map<std::string, double> expected = {
            {"X", 32e-9},      {"Y", 32e-9},        {"CZ", 70e-9},
            {"CNOT", 140e-9},  {"ISWAP", 220e-9},   {"TOFFOLI", 1500e-9},
            {"ITOFFOLI", 500e-9}, {"CCZ", 1600e-9}};
        std::map<std::string, double> best;
        bool z_virtual = false;
        for (const auto& row : read_csv(dir / "out" / "estimates.csv")) {
            if (row[0] == "gate") continue;
            const std::string& gate = row[0];
            const double t_gate = std::strtod(row[3].c_str(), nullptr);
            const bool is_virtual = row[5] == "1";
            if (gate == "Z" && is_virtual) z_virtual = true;
            if (is_virtual) continue;
            if (!best.count(gate) || t_gate < best[gate]) best[gate] = t_gate;
        }
        for (const auto& [gate, t_expected] : expected) {
            if (!best.count(gate) || std::abs(best[gate] - t_expected) / t_expected > 1e-9) {
                ok = false;
                detail += gate + " time off; ";
            }
        }
        if (!z_virtual) {
            ok = false;
            detail += "Z not virtual; ";
        }

        const std::map<int, std::pair<double, int>> energy_expected = {
            {1, {5.2e-27, 2}}, {2, {2.4e-27, 2}}, {3, {3e-28, 1}}};
        for (const auto& row : read_csv(dir / "out" / "energies.csv")) {
            if (row[0] == "arity") continue;
            const int arity = std::atoi(row[0].c_str());
            const double e = std::strtod(row[2].c_str(), nullptr);
            const double de = std::strtod(row[3].c_str(), nullptr);
            const auto [value, digits] = energy_expected.at(arity);
            if (std::abs(round_sig(e, digits) - value) > 1e-6 * value ||
                std::abs(round_sig(de, digits) - value) > 1e-6 * value) {
                ok = false;
                detail += "arity-" + std::to_string(arity) + " energy off; ";
            }
        }
    } else {
        detail = "cli run failed";
    }

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (seconds >= 10.0) {
        ok = false;
        detail += "runtime " + std::to_string(seconds) + " s >= 10 s";
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "table values reproduced, %.1f s", seconds);
    report(1, "table-reproduction", ok, ok ? buf : detail);
}

// ---------------------------------------------------------------- criterion 2
void criterion_2_fig2_protocol() {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = work_dir() / "amplify";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "device.cfg";

    bool ok = run_cli("device-init " + cfg.string()) == 0;
    ok = ok && run_cli("amplify --device " + cfg.string() + " --out " + (dir / "out").string() +
                       " --gate X --seed 1 --jitter 0.5 --resolution 1") == 0;
    int data_rows = 0;
    if (ok) {
        const auto rows = read_csv(dir / "out" / "amplify_X_q0.csv");
        data_rows = static_cast<int>(rows.size()) - 1;
        ok = data_rows == 6 && rows[1][0] == "0";
    }

    // Monte Carlo over 100 seeds through the same protocol
    DeviceModel device = load_device(default_device_config());
    device.overhead.jitter_stddev = 0.5;
    device.overhead.time_resolution = 1.0;
    SimBackend backend(device);
    std::vector<double> errors;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        ExperimentStore store;
        const AmplificationData data =
            run_amplification(backend, default_amplification_plan("X", {0}, seed), store);
        const GateTimeEstimate est =
            fit_gate_time(data.surviving(), data.n_shots, 100000, "X", {0});
        errors.push_back(std::abs(est.t_gate - 32e-9) / 32e-9);
    }
    std::sort(errors.begin(), errors.end());
    const double p95 = errors[94];
    const double mean =
        std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
    const double median = errors[49];
    const bool p95_ok = p95 <= 0.05;
    ok = ok && p95_ok;

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (seconds >= 60.0) ok = false;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "p95 error %.1f%% (need <= 5%%), mean %.1f%%, median %.1f%%, %d csv rows, %.1f s",
                  100.0 * p95, 100.0 * mean, 100.0 * median, data_rows, seconds);
    report(2, "fig2-gate-time-amplification", ok, buf);
}

// ---------------------------------------------------------------- criterion 3
void criterion_3_qsl_soundness() {
    std::mt19937_64 gen(314159);
    int mt_checked = 0, ml_checked = 0, violations = 0;
    double worst = 1e9;
    const int dims[] = {2, 4, 8};

    while (mt_checked < 102) {
        const int dim = dims[mt_checked % 3];
        const auto inst = testgen::random_orthogonalizing(dim, 1.0, gen);
        const auto t_perp = orthogonalization_time(inst.traj, inst.psi0, 1e-6, 4096);
        if (!t_perp) continue;  // criterion counts trajectories reaching orthogonality
        ++mt_checked;
        const EnergyStats stats =
            time_averaged_stats(restricted(inst.traj, *t_perp), inst.psi0, 4096);
        const double product = *t_perp * units::angular_from_joules(stats.energy_stddev);
        worst = std::min(worst, product / (kPi / 2.0));
        if (product < (kPi / 2.0) * (1.0 - 1e-6)) ++violations;
    }
    while (ml_checked < 60) {
        const int dim = 2 + (ml_checked % 7);
        const auto inst = testgen::random_ml_instance(dim, gen);
        const auto t_perp = orthogonalization_time(inst.traj, inst.psi0, 1e-6, 2048);
        if (!t_perp) continue;
        ++ml_checked;
        const EnergyStats stats =
            time_averaged_stats(restricted(inst.traj, *t_perp), inst.psi0, 2048, true);
        const double product = *t_perp * units::angular_from_joules(stats.mean_energy);
        worst = std::min(worst, product / (kPi / 2.0));
        if (product < (kPi / 2.0) * (1.0 - 1e-6)) ++violations;
    }

    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d MT + %d ML trials, %d violations, worst product %.9f pi/2",
                  mt_checked, ml_checked, violations, worst);
    report(3, "qsl-soundness", violations == 0, buf);
}

// ---------------------------------------------------------------- criterion 4
void criterion_4_saturation_witness() {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(1, 1) = 2.0;  // E0 = 1 rad/s
    StateVector plus(2);
    plus << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
    const auto traj = constant_hamiltonian(h, 2.0);

    const auto t_perp = orthogonalization_time(traj, plus, 1e-9, 1024);
    bool ok = t_perp.has_value();
    double t_err = 1.0, mt_gap = 1.0, ml_gap = 1.0;
    if (ok) {
        const double expected = kPi / 2.0;
        t_err = std::abs(*t_perp - expected) / expected;
        const EnergyStats stats = time_averaged_stats(restricted(traj, *t_perp), plus, 1024, true);
        mt_gap = std::abs(*t_perp * units::angular_from_joules(stats.energy_stddev) / expected - 1.0);
        ml_gap = std::abs(*t_perp * units::angular_from_joules(stats.mean_energy) / expected - 1.0);
        ok = t_err <= 1e-9 && mt_gap <= 1e-8 && ml_gap <= 1e-8;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "t_perp error %.2e, MT gap %.2e, ML gap %.2e", t_err, mt_gap,
                  ml_gap);
    report(4, "saturation-witness", ok, buf);
}

// ---------------------------------------------------------------- criterion 5
void criterion_5_magnus_scaling() {
    const SuiteResult result = verify_magnus(20, 271828);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d checks over 20 trajectories, %d violations, margin %.3f",
                  result.trials, result.violations, result.worst_margin);
    report(5, "appendix-a-scaling", result.passed(), buf);
}

// ---------------------------------------------------------------- criterion 6
void criterion_6_bures_correction() {
    const double de = 5e-27;
    const double mt = mt_bound(de);
    bool ok = true;
    double worst = 0.0;
    for (double eps = 1e-8; eps <= 1e-3 * (1 + 1e-12); eps *= 1.2589254117941673) {
        const double ratio = corrected_mt_bound(de, eps) / mt;
        const double err = std::abs(ratio - (1.0 - 2.0 * std::sqrt(eps) / kPi));
        worst = std::max(worst, err / eps);
        if (err > eps) ok = false;
    }
    double prev = corrected_mt_bound(de, 0.0);
    for (int k = 1; k < 1000; ++k) {
        const double value = corrected_mt_bound(de, 0.5 * k / 999.0);
        if (value >= prev) ok = false;
        prev = value;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max |err|/eps = %.3f, monotone over 1000-point grid", worst);
    report(6, "appendix-b-correction", ok, buf);
}

// ---------------------------------------------------------------- criterion 7
void criterion_7_fleet_soundness() {
    struct FleetEntry {
        std::string gate;
        double duration_ns;
        std::string pulse;
    };
    const std::vector<FleetEntry> fleet = {
        {"X", 20, "square"},   {"X", 35, "gaussian"}, {"X", 60, "two-segment"},
        {"X", 90, "square"},   {"Y", 150, "gaussian"}, {"Y", 250, "two-segment"},
        {"X", 400, "gaussian"}, {"X", 700, "square"},  {"Y", 1200, "two-segment"},
        {"X", 2000, "gaussian"}, {"CZ", 70, "square"},  {"CZ", 200, "gaussian"}};

    int checked = 0, violations = 0;
    std::string detail;
    for (const auto& entry : fleet) {
        std::ostringstream cfg;
        cfg << "qubits 2\nconnectivity 0-1\n"
            << "t_init 100e-6\nt_meas 300e-6\nper_circuit_overhead 0.1\nper_job_overhead 5.0\n"
            << "jitter_stddev 0\ntime_resolution 0\nvalidation_steps 2048\n"
            << "gate " << entry.gate << " physical duration " << entry.duration_ns
            << "e-9 pulse " << entry.pulse << " omega auto\n";
        const DeviceModel device = load_device(cfg.str());
        SimBackend backend(device);

        std::vector<int> qubits = entry.gate == "CZ" ? std::vector<int>{0, 1}
                                                     : std::vector<int>{0};
        ExperimentStore store;
        const AmplificationData data = run_amplification(
            backend, default_amplification_plan(entry.gate, qubits, 97), store);
        const GateTimeEstimate est =
            fit_gate_time(data.surviving(), data.n_shots, 100000, entry.gate, qubits);
        const EnergyEstimate energy = estimate_energy(est.t_gate, est.arity);

        // hidden truth from the drive, at a state the gate orthogonalizes
        const GateSpec& spec = device.gate(entry.gate);
        StateVector psi0;
        if (entry.gate == "CZ") {
            psi0 = StateVector::Zero(4);
            psi0(0) = psi0(3) = 1.0 / std::numbers::sqrt2;
        } else {
            psi0 = basis_state(2, 0);
        }
        const EnergyStats stats = time_averaged_stats(spec.drive, psi0, 4096);
        ++checked;
        if (energy.e_lower > stats.effective_energy * 1.01 ||
            energy.delta_e_lower > stats.energy_stddev * 1.01) {
            ++violations;
            detail += entry.gate + "@" + std::to_string(entry.duration_ns) + "ns ";
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d configs checked, %d bound violations %s", checked,
                  violations, detail.c_str());
    report(7, "fleet-lower-bound-soundness", violations == 0, buf);
}

// ---------------------------------------------------------------- criterion 8
void criterion_8_discussion_range() {
    bool ok = true;
    std::string detail;
    for (const double mhz : {10.0, 100.0}) {
        const double omega = 2.0 * kPi * mhz * 1e6;
        const auto traj = constant_hamiltonian(0.5 * omega * pauli_x(), kPi / omega);
        const EnergyStats stats = time_averaged_stats(traj, basis_state(2, 0), 512, true);
        const double expected = mhz == 10.0 ? 3.3e-27 : 3.3e-26;
        if (std::abs(round_sig(stats.mean_energy, 2) - expected) > 1e-6 * expected ||
            std::abs(round_sig(stats.energy_stddev, 2) - expected) > 1e-6 * expected) {
            ok = false;
            detail += std::to_string(mhz) + " MHz off; ";
        } else {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "%g MHz -> %.2g J; ", mhz, stats.mean_energy);
            detail += buf;
        }
    }
    report(8, "discussion-range", ok, detail);
}

}  // namespace

int main() {
    std::printf("qslprobe acceptance suite\n");
    criterion_1_table();
    criterion_2_fig2_protocol();
    criterion_3_qsl_soundness();
    criterion_4_saturation_witness();
    criterion_5_magnus_scaling();
    criterion_6_bures_correction();
    criterion_7_fleet_soundness();
    criterion_8_discussion_range();
    if (g_failures > 0) std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
