#pragma once

#include <string>
#include <vector>

#include "qslprobe/matrix.hpp"

namespace qslprobe {

// Standard gate unitaries on the computational basis, qubit 0 = most
// significant bit of the basis index. ITOFFOLI is a controlled-controlled-iX
// (Toffoli with an i phase on the flipped transition).
ComplexMatrix gate_unitary_library(const std::string& name, int arity);

bool is_known_gate(const std::string& name);
int gate_arity(const std::string& name);  // throws UnknownGate
const std::vector<std::string>& known_gates();

}  // namespace qslprobe
