#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qslprobe/circuit.hpp"
#include "qslprobe/trajectory.hpp"

namespace qslprobe {

enum class PulseShape { Square, Gaussian, TwoSegment };
enum class GateKind { Physical, Virtual, Decomposed };

struct Decomposition {
    std::vector<std::pair<std::string, int>> parts;  // native gate -> count
};

struct GateVariant {
    std::string pattern;  // "any", "pair", "full", "line-end", "line-mid"
    double duration = 0.0;
    Decomposition decomp;
};

struct GateSpec {
    std::string name;
    int arity = 1;
    GateKind kind = GateKind::Physical;
    double duration = 0.0;      // physical gates; virtual gates have exactly 0
    PulseShape pulse = PulseShape::Square;
    double omega = 0.0;         // envelope peak, rad/s; 0 = derived from duration
    std::vector<GateVariant> variants;  // decomposed gates
    ComplexMatrix unitary;              // from the gate library
    HamiltonianTrajectory drive;        // physical gates, built at load
};

struct OverheadModel {
    double t_init = 0.0;
    double t_meas = 0.0;
    double per_circuit_overhead = 0.0;
    double per_job_overhead = 0.0;
    double jitter_stddev = 0.0;     // one Gaussian draw per job
    double time_resolution = 0.0;   // reporting granularity; 0 = exact
};

// The hidden ground truth. Immutable after load; the job interface never
// exposes it.
struct DeviceModel {
    std::string name;
    int n_qubits = 0;
    int levels = 2;  // local dimension; 3 enables an (inert) third level
    std::vector<std::pair<int, int>> edges;
    std::map<std::string, GateSpec> gates;
    OverheadModel overhead;
    int validation_steps = 1024;

    bool connected(int a, int b) const;
    const GateSpec& gate(const std::string& name) const;  // throws UnknownGate

    // Adjacency pattern of an ordered qubit tuple ("any" for arity 1, "pair"
    // for an adjacent pair, "full"/"line-end"/"line-mid" for triples; the
    // last qubit of a triple is the target). Throws BackendError when the
    // tuple is not connected on the device graph.
    std::string adjacency_pattern(const std::vector<int>& qubits) const;

    // Physical duration of one application, variant-resolved.
    double duration_for(const GateApp& app) const;
};

// Parse and validate a device config. Every physical gate's drive is built
// and propagated once against its declared unitary (global-phase-insensitive
// fidelity within 1e-6); decomposed variants must sum their native durations
// exactly to the declared duration.
DeviceModel load_device(const std::string& config_text);
DeviceModel load_device_file(const std::string& path);

// The shipped default config (ibm-torino-like.cfg contents).
std::string default_device_config();

}  // namespace qslprobe
