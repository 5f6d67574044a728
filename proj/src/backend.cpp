#include "qslprobe/backend.hpp"

#include <cmath>
#include <random>

#include "qslprobe/errors.hpp"
#include "qslprobe/gates.hpp"
#include "qslprobe/rng.hpp"

namespace qslprobe {

namespace {

// Statevector over n qudits of local dimension L (2, or 3 when the inert
// third level is enabled). Qubit 0 owns the most significant digit.

long long int_pow(long long base, int exp) {
    long long out = 1;
    for (int k = 0; k < exp; ++k) out *= base;
    return out;
}

// Unitary of one gate application on the joint space of `touched` qudits
// (given in ascending order). Basis states with any participating digit
// outside {0,1} are left alone.
ComplexMatrix gate_on_touched(const GateApp& app, const std::vector<int>& touched, int levels) {
    const int k = static_cast<int>(touched.size());
    const long long dim = int_pow(levels, k);
    const ComplexMatrix gate = gate_unitary_library(app.gate, static_cast<int>(app.qubits.size()));
    const int g_arity = static_cast<int>(app.qubits.size());

    // position of each gate operand inside the touched list
    std::vector<int> pos(g_arity);
    for (int a = 0; a < g_arity; ++a) {
        const auto it = std::find(touched.begin(), touched.end(), app.qubits[a]);
        pos[a] = static_cast<int>(it - touched.begin());
    }

    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    std::vector<int> digits(k);
    for (long long in = 0; in < dim; ++in) {
        long long rest = in;
        for (int d = k - 1; d >= 0; --d) {
            digits[d] = static_cast<int>(rest % levels);
            rest /= levels;
        }
        bool computational = true;
        int g_in = 0;
        for (int a = 0; a < g_arity; ++a) {
            if (digits[pos[a]] > 1) computational = false;
            g_in = (g_in << 1) | (digits[pos[a]] & 1);
        }
        if (!computational) {
            out(in, in) = 1.0;
            continue;
        }
        for (int g_out = 0; g_out < (1 << g_arity); ++g_out) {
            const Complex amp = gate(g_out, g_in);
            if (amp == Complex(0.0, 0.0)) continue;
            std::vector<int> od = digits;
            for (int a = 0; a < g_arity; ++a)
                od[pos[a]] = (g_out >> (g_arity - 1 - a)) & 1;
            long long out_index = 0;
            for (int d = 0; d < k; ++d) out_index = out_index * levels + od[d];
            out(out_index, in) = amp;
        }
    }
    return out;
}

ComplexMatrix matrix_power(ComplexMatrix base, long long exponent) {
    ComplexMatrix result = ComplexMatrix::Identity(base.rows(), base.cols());
    while (exponent > 0) {
        if (exponent & 1) result = base * result;
        base = base * base;
        exponent >>= 1;
    }
    return result;
}

void apply_on_touched(StateVector& state, const ComplexMatrix& u, const std::vector<int>& touched,
                      int n_qubits, int levels) {
    const int k = static_cast<int>(touched.size());
    const long long sub = int_pow(levels, k);
    std::vector<long long> stride(k);
    for (int d = 0; d < k; ++d) stride[d] = int_pow(levels, n_qubits - 1 - touched[d]);

    // enumerate base indices with all touched digits zero
    const long long total = state.size();
    std::vector<Complex> gathered(sub);
    for (long long base = 0; base < total; ++base) {
        bool is_base = true;
        for (int d = 0; d < k && is_base; ++d)
            if ((base / stride[d]) % levels != 0) is_base = false;
        if (!is_base) continue;
        for (long long j = 0; j < sub; ++j) {
            long long idx = base, rest = j;
            for (int d = k - 1; d >= 0; --d) {
                idx += (rest % levels) * stride[d];
                rest /= levels;
            }
            gathered[j] = state(idx);
        }
        for (long long i = 0; i < sub; ++i) {
            Complex acc(0.0, 0.0);
            for (long long j = 0; j < sub; ++j) acc += u(i, j) * gathered[j];
            long long idx = base, rest = i;
            for (int d = k - 1; d >= 0; --d) {
                idx += (rest % levels) * stride[d];
                rest /= levels;
            }
            state(idx) = acc;
        }
    }
}

StateVector final_state(const Circuit& circuit, int levels) {
    const long long dim = int_pow(levels, circuit.n_qubits);
    StateVector state = StateVector::Zero(dim);
    state(0) = 1.0;

    for (const auto& ins : circuit.instructions) {
        std::vector<int> touched;
        for (const auto& app : ins.body)
            for (int q : app.qubits)
                if (std::find(touched.begin(), touched.end(), q) == touched.end())
                    touched.push_back(q);
        std::sort(touched.begin(), touched.end());

        ComplexMatrix block =
            ComplexMatrix::Identity(int_pow(levels, touched.size()), int_pow(levels, touched.size()));
        for (const auto& app : ins.body) block = gate_on_touched(app, touched, levels) * block;
        if (ins.repeat > 1) block = matrix_power(std::move(block), ins.repeat);
        apply_on_touched(state, block, touched, circuit.n_qubits, levels);
    }
    return state;
}

std::string outcome_label(long long index, int n_qubits, int levels) {
    std::string label(n_qubits, '0');
    for (int q = n_qubits - 1; q >= 0; --q) {
        label[q] = static_cast<char>('0' + index % levels);
        index /= levels;
    }
    return label;
}

double circuit_duration(const DeviceModel& device, const Circuit& circuit) {
    double total = 0.0;
    for (const auto& ins : circuit.instructions) {
        double body = 0.0;
        for (const auto& app : ins.body) body += device.duration_for(app);
        total += static_cast<double>(ins.repeat) * body;
    }
    return total;
}

void validate_circuit(const DeviceModel& device, const Circuit& circuit) {
    if (circuit.n_qubits > device.n_qubits)
        throw BackendError("circuit uses " + std::to_string(circuit.n_qubits) +
                           " qubits, device has " + std::to_string(device.n_qubits));
    for (const auto& ins : circuit.instructions)
        for (const auto& app : ins.body)
            if (!device.gates.count(app.gate))
                throw UnknownGate("device has no gate '" + app.gate + "'");
}

}  // namespace

JobResult submit_job(const DeviceModel& device, const Job& job) {
    if (job.shots == 0) throw EmptyJob("job has zero shots");
    if (job.circuits.empty()) throw EmptyJob("job has no circuits");

    // validate everything (and price the timing model) before any sampling
    double t_raw = device.overhead.per_job_overhead;
    for (const auto& circuit : job.circuits) {
        validate_circuit(device, circuit);
        const double gates = circuit_duration(device, circuit);
        t_raw += static_cast<double>(job.shots) *
                     (device.overhead.t_init + gates + device.overhead.t_meas) +
                 device.overhead.per_circuit_overhead;
    }

    std::mt19937_64 gen(job.seed ? *job.seed : std::random_device{}());
    if (device.overhead.jitter_stddev > 0.0)
        t_raw += device.overhead.jitter_stddev * rng::gaussian(gen);
    if (device.overhead.time_resolution > 0.0)
        t_raw = std::round(t_raw / device.overhead.time_resolution) *
                device.overhead.time_resolution;

    JobResult result;
    result.t_exec_seconds = std::max(0.0, t_raw);
    for (const auto& circuit : job.circuits) {
        const StateVector state = final_state(circuit, device.levels);
        std::vector<double> probs(state.size());
        for (Eigen::Index i = 0; i < state.size(); ++i) probs[i] = std::norm(state(i));
        const auto counts = rng::multinomial(gen, probs, job.shots);
        std::map<std::string, std::uint64_t> histogram;
        for (std::size_t i = 0; i < counts.size(); ++i)
            if (counts[i] > 0)
                histogram[outcome_label(static_cast<long long>(i), circuit.n_qubits,
                                        device.levels)] = counts[i];
        result.counts.push_back(std::move(histogram));
    }
    return result;
}

JobResult ReplayBackend::submit(const Job&) {
    if (next_ >= results_.size()) throw BackendError("replay backend exhausted");
    return results_[next_++];
}

}  // namespace qslprobe
