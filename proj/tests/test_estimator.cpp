#include "qslprobe/estimator.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "qslprobe/backend.hpp"
#include "qslprobe/errors.hpp"
#include "qslprobe/units.hpp"
#include "test_helpers.hpp"

using namespace qslprobe;

namespace {

std::string quiet_config() {
    return "name quiet\nqubits 5\nconnectivity 0-1 1-2 2-3 3-4\n"
           "t_init 100e-6\nt_meas 300e-6\nper_circuit_overhead 0.1\nper_job_overhead 5.0\n"
           "jitter_stddev 0\ntime_resolution 0\n"
           "gate X physical duration 32e-9 pulse square omega auto\n"
           "gate Y physical duration 32e-9 pulse square omega auto\n"
           "gate Z virtual\n"
           "gate CZ physical duration 70e-9\n";
}

GateTimeEstimate synthetic_estimate(const std::string& gate, int arity, double t_gate,
                                    bool is_virtual = false) {
    GateTimeEstimate est;
    est.gate = gate;
    est.arity = arity;
    est.t_gate = t_gate;
    est.is_virtual = is_virtual;
    return est;
}

}  // namespace

TEST_CASE("plan defaults and validation") {
    const AmplificationPlan plan = default_amplification_plan("X", {0}, 7);
    CHECK(plan.n_gate_values == std::vector<long long>{0, 100000, 200000, 300000, 400000, 500000});
    CHECK(plan.n_shots == 1000);
    CHECK(default_threshold(plan.n_gate_values) == 200000);
    CHECK_NOTHROW(validate_plan(plan));

    AmplificationPlan bad = plan;
    bad.n_gate_values = {0, 100, 50, 200};
    CHECK_THROWS_AS(validate_plan(bad), ConfigError);
    bad.n_gate_values = {0, 100, 200};
    CHECK_THROWS_AS(validate_plan(bad), InsufficientData);
}

TEST_CASE("amplification circuit text") {
    CHECK(amplification_circuit_text("X", {0}, 3) == "qubits 1\nrepeat 3 { X q0 }\n");
    CHECK(amplification_circuit_text("CZ", {1, 2}, 10) == "qubits 3\nrepeat 10 { CZ q1 q2 }\n");
    CHECK(amplification_circuit_text("X", {0}, 0) == "qubits 1\n");
}

TEST_CASE("zero-jitter amplification is exactly affine with slope shots * duration") {
    SimBackend backend(load_device(quiet_config()));
    ExperimentStore store;
    const AmplificationPlan plan = default_amplification_plan("X", {0}, 3);
    const AmplificationData data = run_amplification(backend, plan, store);

    REQUIRE(data.points.size() == 6);
    for (const auto& p : data.points) CHECK(p.ok);
    const auto pts = data.surviving();
    // slope 3.2e-5 s per gate at 1000 shots
    const double slope = (pts[5].second - pts[1].second) / (pts[5].first - pts[1].first);
    CHECK(slope == doctest::Approx(3.2e-5).epsilon(1e-9));
    // intercept at n_gate = 0: per_job + per_circuit + shots*(t_init + t_meas)
    CHECK(pts[0].second == doctest::Approx(5.0 + 0.1 + 1000 * 400e-6).epsilon(1e-9));
    CHECK(store.rows().size() == 6);
}

TEST_CASE("fit recovers the hidden duration to 1e-12 relative with zero noise") {
    SimBackend backend(load_device(quiet_config()));
    ExperimentStore store;
    const AmplificationData data =
        run_amplification(backend, default_amplification_plan("X", {0}, 3), store);
    const GateTimeEstimate est =
        fit_gate_time(data.surviving(), data.n_shots, 100000, "X", {0});
    CHECK(!est.is_virtual);
    CHECK(std::abs(est.t_gate - 32e-9) / 32e-9 < 1e-12);
    CHECK(est.fit.points_used == 5);
    CHECK(est.fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("virtual Z gate: slope statistically zero, flagged virtual") {
    SimBackend backend(load_device(quiet_config()));
    ExperimentStore store;
    const AmplificationData data =
        run_amplification(backend, default_amplification_plan("Z", {0}, 3), store);
    const GateTimeEstimate est =
        fit_gate_time(data.surviving(), data.n_shots, 100000, "Z", {0});
    CHECK(est.is_virtual);
    CHECK(std::abs(est.t_gate) < 1e-15);
}

TEST_CASE("jittered fit stays within a few percent (fixed seeds)") {
    std::string cfg = quiet_config();
    cfg.replace(cfg.find("jitter_stddev 0"), 15, "jitter_stddev .5");
    cfg.replace(cfg.find("time_resolution 0"), 17, "time_resolution 1");
    SimBackend backend(load_device(cfg));
    ExperimentStore store;
    // median over a handful of seeds keeps this deterministic and tight
    std::vector<double> estimates;
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const AmplificationData data =
            run_amplification(backend, default_amplification_plan("X", {0}, seed), store);
        estimates.push_back(
            fit_gate_time(data.surviving(), data.n_shots, 100000, "X", {0}).t_gate);
    }
    std::sort(estimates.begin(), estimates.end());
    CHECK(estimates[7] == doctest::Approx(32e-9).epsilon(0.10));
}

TEST_CASE("backend failures are recorded per point and the run continues") {
    // CZ on a non-adjacent pair fails at submit for every point that
    // actually applies the gate; the n_gate = 0 intercept point is empty
    // and goes through
    SimBackend backend(load_device(quiet_config()));
    ExperimentStore store;
    const AmplificationData data =
        run_amplification(backend, default_amplification_plan("CZ", {0, 3}, 3), store);
    REQUIRE(data.points.size() == 6);
    CHECK(data.points[0].ok);
    for (std::size_t k = 1; k < data.points.size(); ++k) {
        CHECK(!data.points[k].ok);
        CHECK(!data.points[k].error.empty());
    }
    CHECK_THROWS_AS(fit_gate_time(data.surviving(), data.n_shots, 100000, "CZ", {0, 3}),
                    InsufficientData);
}

TEST_CASE("fit rejects a significantly negative slope") {
    std::vector<std::pair<long long, double>> data;
    for (long long n = 0; n <= 5; ++n) data.emplace_back(n * 100000, 10.0 - 1e-4 * n);
    CHECK_THROWS_AS(fit_gate_time(data, 1000, 0), NegativeSlope);
}

TEST_CASE("estimate_tau_n follows the published minima") {
    const std::vector<GateTimeEstimate> singles = {
        synthetic_estimate("X", 1, 32e-9), synthetic_estimate("Y", 1, 32e-9),
        synthetic_estimate("Z", 1, 0.0, true)};
    CHECK(estimate_tau_n(singles, 1) == doctest::Approx(32e-9));

    const std::vector<GateTimeEstimate> doubles = {synthetic_estimate("CZ", 2, 70e-9),
                                                   synthetic_estimate("CNOT", 2, 140e-9),
                                                   synthetic_estimate("ISWAP", 2, 220e-9)};
    CHECK(estimate_tau_n(doubles, 2) == doctest::Approx(70e-9));

    const std::vector<GateTimeEstimate> triples = {synthetic_estimate("TOFFOLI", 3, 1500e-9),
                                                   synthetic_estimate("ITOFFOLI", 3, 500e-9),
                                                   synthetic_estimate("CCZ", 3, 1600e-9)};
    CHECK(estimate_tau_n(triples, 3) == doctest::Approx(500e-9));

    CHECK_THROWS_AS(estimate_tau_n(singles, 2), NoPhysicalGate);
    CHECK_THROWS_AS(
        estimate_tau_n({synthetic_estimate("Z", 1, 0.0, true)}, 1), NoPhysicalGate);
}

TEST_CASE("monotonicity: adding a slower gate never lowers tau_n") {
    std::vector<GateTimeEstimate> set = {synthetic_estimate("CZ", 2, 70e-9)};
    const double before = estimate_tau_n(set, 2);
    set.push_back(synthetic_estimate("CNOT", 2, 140e-9));
    CHECK(estimate_tau_n(set, 2) == doctest::Approx(before));
    set.push_back(synthetic_estimate("ISWAP", 2, 50e-9));  // new minimum
    CHECK(estimate_tau_n(set, 2) == doctest::Approx(50e-9));
}

TEST_CASE("estimate_energy reproduces the published values") {
    const EnergyEstimate e1 = estimate_energy(32e-9, 1);
    CHECK(e1.e_lower == e1.delta_e_lower);
    CHECK(test::round_sig(e1.e_lower, 2) == doctest::Approx(5.2e-27).epsilon(1e-9));
    CHECK(test::round_sig(estimate_energy(70e-9, 2).e_lower, 2) ==
          doctest::Approx(2.4e-27).epsilon(1e-9));
    CHECK(test::round_sig(estimate_energy(500e-9, 3).e_lower, 1) ==
          doctest::Approx(3e-28).epsilon(1e-9));
    CHECK_THROWS_AS(estimate_energy(0.0, 1), InvalidDuration);
}

TEST_CASE("blindness: a replay backend reproduces the estimate exactly") {
    SimBackend backend(load_device(quiet_config()));
    ExperimentStore store;
    const AmplificationPlan plan = default_amplification_plan("X", {0}, 21);

    // record the live run, then replay it through the interface
    std::vector<JobResult> recorded;
    for (std::size_t k = 0; k < plan.n_gate_values.size(); ++k) {
        Job job;
        job.circuits.push_back(parse_circuit(
            amplification_circuit_text(plan.gate, plan.qubits, plan.n_gate_values[k])));
        job.shots = static_cast<std::uint64_t>(plan.n_shots);
        job.seed = plan.seed ^ (0x9e3779b97f4a7c15ull * (k + 1));
        recorded.push_back(backend.submit(job));
    }
    ReplayBackend replay(recorded);

    const AmplificationData live = run_amplification(backend, plan, store);
    const AmplificationData replayed = run_amplification(replay, plan, store);
    CHECK(live.surviving() == replayed.surviving());
    const auto fit_live = fit_gate_time(live.surviving(), plan.n_shots, 100000, "X", {0});
    const auto fit_replay = fit_gate_time(replayed.surviving(), plan.n_shots, 100000, "X", {0});
    CHECK(fit_live.t_gate == doctest::Approx(fit_replay.t_gate).epsilon(1e-15));
}

TEST_CASE("experiment store: append-only CSV with the documented header") {
    const std::string path =
        (std::filesystem::temp_directory_path() / "qslprobe_store_test.csv").string();
    std::filesystem::remove(path);
    {
        ExperimentStore store(path);
        store.append("X", 100000, 1000, 8.7);
        store.append("X", 200000, 1000, 11.9);
    }
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "timestamp,gate,n_gate,n_shots,t_exec_seconds");
    std::getline(in, line);
    CHECK(line.find(",X,100000,1000,8.700") != std::string::npos);
    std::getline(in, line);
    CHECK(line.find(",X,200000,1000,11.900") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("report: table plus machine-readable CSVs") {
    const std::vector<GateTimeEstimate> estimates = {
        synthetic_estimate("X", 1, 32e-9), synthetic_estimate("Z", 1, 0.0, true)};
    const std::vector<EnergyEstimate> energies = {estimate_energy(32e-9, 1)};
    const std::map<std::string, std::vector<std::pair<long long, double>>> raw = {
        {"X_q0", {{0, 5.5}, {100000, 8.7}}}};

    const Report rep = make_report(estimates, energies, raw);
    CHECK(rep.table_text.find("X") != std::string::npos);
    CHECK(rep.table_text.find("5.2e-27") != std::string::npos);
    CHECK(rep.estimates_csv.find("gate,qubits,arity,") == 0);
    CHECK(rep.energies_csv.find("arity,tau_n_seconds,") == 0);
    REQUIRE(rep.raw_csv.count("X_q0"));
    CHECK(rep.raw_csv.at("X_q0").find("n_gate,t_exec_seconds\n0,5.500\n100000,8.700\n") !=
          std::string::npos);

    const Report empty = make_report({}, {});
    CHECK(empty.table_text.find("gate") != std::string::npos);
}
