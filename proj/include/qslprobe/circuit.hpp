#pragma once

#include <string>
#include <vector>

namespace qslprobe {

struct GateApp {
    std::string gate;
    std::vector<int> qubits;
};

// One instruction: the body applied in order, the whole body repeated
// `repeat` times. Plain gates parse to a single-element body with repeat 1.
struct Instruction {
    std::vector<GateApp> body;
    long long repeat = 1;
};

struct Circuit {
    int n_qubits = 0;
    std::vector<Instruction> instructions;

    long long total_gate_count() const;
};

// Line-based grammar:
//   qubits <n>
//   <GATE> q<i> [q<j> [q<k>]]
//   repeat <m> { ... }        (non-nested; body may share the line)
//   # comment
// Whitespace-insensitive. Gate names are validated against the gate library;
// indices against the declared qubit count. Errors carry 1-based line numbers.
Circuit parse_circuit(const std::string& text);

}  // namespace qslprobe
