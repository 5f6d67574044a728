#include "qslprobe/device.hpp"

#include <numbers>

#include "doctest.h"
#include "qslprobe/errors.hpp"

using namespace qslprobe;

TEST_CASE("default device loads and matches the published timings") {
    const DeviceModel device = load_device(default_device_config());
    CHECK(device.name == "ibm-torino-like");
    CHECK(device.n_qubits == 5);
    CHECK(device.levels == 2);
    CHECK(device.gate("X").duration == doctest::Approx(32e-9));
    CHECK(device.gate("Y").duration == doctest::Approx(32e-9));
    CHECK(device.gate("Z").kind == GateKind::Virtual);
    CHECK(device.gate("Z").duration == 0.0);
    CHECK(device.gate("CZ").duration == doctest::Approx(70e-9));
    CHECK(device.gate("CNOT").duration == doctest::Approx(140e-9));
    CHECK(device.gate("ISWAP").duration == doctest::Approx(220e-9));
    CHECK(device.gate("TOFFOLI").duration == doctest::Approx(1500e-9));
    CHECK(device.gate("ITOFFOLI").duration == doctest::Approx(500e-9));
    CHECK(device.gate("CCZ").duration == doctest::Approx(1600e-9));
    CHECK(device.overhead.per_job_overhead == doctest::Approx(5.0));
    CHECK(device.overhead.jitter_stddev == doctest::Approx(0.5));
}

TEST_CASE("X square drive carries the advertised Rabi rate") {
    const DeviceModel device = load_device(default_device_config());
    const GateSpec& x = device.gate("X");
    REQUIRE(x.kind == GateKind::Physical);
    // H(0) = (Omega/2) sigma_x with Omega = pi / 32 ns
    const ComplexMatrix h0 = x.drive.at(1e-9);
    const double omega = 2.0 * h0(0, 1).real();
    CHECK(omega == doctest::Approx(std::numbers::pi / 32e-9).epsilon(1e-12));
}

TEST_CASE("default drive frequencies sit in realistic transmon ranges") {
    // single-qubit Rabi rates ~10-100 MHz, two-qubit couplings ~1-20 MHz
    const DeviceModel device = load_device(default_device_config());
    const double two_pi = 2.0 * std::numbers::pi;

    const double x_rabi = 2.0 * device.gate("X").drive.at(1e-9)(0, 1).real() / two_pi;
    CHECK(x_rabi >= 10e6);
    CHECK(x_rabi <= 100e6);

    const double cz_coupling = device.gate("CZ").drive.at(1e-9)(3, 3).real() / two_pi;
    CHECK(cz_coupling >= 1e6);
    CHECK(cz_coupling <= 20e6);
}

TEST_CASE("wrong Rabi rate is rejected with the achieved fidelity") {
    std::string cfg =
        "qubits 1\n"
        "gate X physical duration 32e-9 pulse square omega " +
        std::to_string(std::numbers::pi / 64e-9) + "\n";
    try {
        load_device(cfg);
        FAIL("expected GateRealizationMismatch");
    } catch (const GateRealizationMismatch& err) {
        // half rotation: |tr(X^dag Rx(pi/2))| / 2 = sin(pi/4)
        CHECK(err.achieved_fidelity == doctest::Approx(std::sin(std::numbers::pi / 4.0))
                                           .epsilon(1e-6));
    }
}

TEST_CASE("empty gate set is a valid (useless) device") {
    const DeviceModel device = load_device("qubits 2\nconnectivity 0-1\n");
    CHECK(device.gates.empty());
}

TEST_CASE("gaussian and two-segment pulses realize their gates") {
    const DeviceModel device = load_device(
        "qubits 2\n"
        "connectivity 0-1\n"
        "validation_steps 2048\n"
        "gate X physical duration 50e-9 pulse gaussian omega auto\n"
        "gate Y physical duration 64e-9 pulse two-segment omega auto\n"
        "gate CZ physical duration 100e-9 pulse gaussian omega auto\n"
        "gate ISWAP physical duration 200e-9 pulse two-segment omega auto\n");
    CHECK(device.gate("X").pulse == PulseShape::Gaussian);
    CHECK(device.gate("Y").pulse == PulseShape::TwoSegment);
    // loading already validated realization to 1e-6; spot-check one drive
    const GateSpec& y = device.gate("Y");
    const ComplexMatrix early = y.drive.at(1e-9);
    const ComplexMatrix late = y.drive.at(60e-9);
    CHECK((early * late - late * early).cwiseAbs().maxCoeff() > 1e-3);  // noncommuting segments
}

TEST_CASE("virtual gates must have zero duration") {
    CHECK_THROWS_AS(load_device("qubits 1\ngate Z virtual duration 1e-9\n"), ConfigError);
}

TEST_CASE("decomposition sums must match the variant duration") {
    CHECK_THROWS_AS(load_device("qubits 3\n"
                                "connectivity 0-1 1-2\n"
                                "gate CZ physical duration 70e-9\n"
                                "gate TOFFOLI decomposed variant any duration 500e-9 decomp CZ:6\n"),
                    ConfigError);
    // 6 * 70 ns = 420 ns works
    const DeviceModel ok = load_device(
        "qubits 3\nconnectivity 0-1 1-2\n"
        "gate CZ physical duration 70e-9\n"
        "gate TOFFOLI decomposed variant any duration 420e-9 decomp CZ:6\n");
    CHECK(ok.gate("TOFFOLI").duration == doctest::Approx(420e-9));
}

TEST_CASE("adjacency patterns on a linear chain") {
    const DeviceModel device = load_device(default_device_config());
    CHECK(device.adjacency_pattern({2}) == "any");
    CHECK(device.adjacency_pattern({1, 2}) == "pair");
    CHECK_THROWS_AS(device.adjacency_pattern({0, 2}), BackendError);
    // (0,1,2): middle qubit 1 is a control -> line-end
    CHECK(device.adjacency_pattern({0, 1, 2}) == "line-end");
    // (0,2,1): middle qubit 1 is the target -> line-mid
    CHECK(device.adjacency_pattern({0, 2, 1}) == "line-mid");
    CHECK_THROWS_AS(device.adjacency_pattern({0, 1, 4}), BackendError);
}

TEST_CASE("variant-resolved durations") {
    const DeviceModel device = load_device(default_device_config());
    CHECK(device.duration_for({"TOFFOLI", {0, 1, 2}}) == doctest::Approx(1500e-9));
    CHECK(device.duration_for({"TOFFOLI", {0, 2, 1}}) == doctest::Approx(1756e-9));
    CHECK(device.duration_for({"ITOFFOLI", {0, 1, 2}}) == doctest::Approx(500e-9));
    CHECK(device.duration_for({"Z", {3}}) == 0.0);
    CHECK(device.duration_for({"X", {3}}) == doctest::Approx(32e-9));
    CHECK_THROWS_AS(device.duration_for({"CZ", {0, 3}}), BackendError);
}

TEST_CASE("config rejects malformed input") {
    CHECK_THROWS_AS(load_device("qubits 0\n"), ConfigError);
    CHECK_THROWS_AS(load_device("qubits 1\nlevels 4\n"), ConfigError);
    CHECK_THROWS_AS(load_device("qubits 2\nconnectivity 0-5\n"), ConfigError);
    CHECK_THROWS_AS(load_device("qubits 1\njitter_stddev -1\n"), ConfigError);
    CHECK_THROWS_AS(load_device("qubits 1\ngate W physical duration 1e-9\n"), UnknownGate);
    CHECK_THROWS_AS(load_device("qubits 1\ngate X bogus\n"), ConfigError);
    CHECK_THROWS_AS(load_device("qubits 1\nbogus 1\n"), ConfigError);
    CHECK_THROWS_AS(load_device("qubits 1\ngate X physical duration 1e-9\ngate X virtual\n"),
                    ConfigError);
}

TEST_CASE("three-level device loads with gates embedded in the computational subspace") {
    const DeviceModel device = load_device(
        "qubits 2\nlevels 3\nconnectivity 0-1\n"
        "gate X physical duration 32e-9 pulse square omega auto\n"
        "gate CZ physical duration 70e-9\n");
    CHECK(device.levels == 3);
}
