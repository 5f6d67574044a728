#include "qslprobe/gates.hpp"

#include <numbers>
#include <unordered_map>

#include "qslprobe/errors.hpp"

namespace qslprobe {

namespace {

const Complex kI(0.0, 1.0);

// Qubit 0 is the most significant bit of the basis index.
std::unordered_map<std::string, ComplexMatrix> build_library() {
    std::unordered_map<std::string, ComplexMatrix> lib;
    const double s = 1.0 / std::numbers::sqrt2;

    lib["X"] = pauli_x();
    lib["Y"] = pauli_y();
    lib["Z"] = pauli_z();
    {
        ComplexMatrix h(2, 2);
        h << s, s, s, -s;
        lib["H"] = h;
    }
    lib["S"] = ComplexMatrix(Eigen::Vector2cd(1.0, kI).asDiagonal());
    lib["SDG"] = ComplexMatrix(Eigen::Vector2cd(1.0, -kI).asDiagonal());

    {
        ComplexMatrix cz = ComplexMatrix::Identity(4, 4);
        cz(3, 3) = -1.0;
        lib["CZ"] = cz;
    }
    {
        ComplexMatrix cx = ComplexMatrix::Identity(4, 4);
        cx(2, 2) = cx(3, 3) = 0.0;
        cx(2, 3) = cx(3, 2) = 1.0;
        lib["CNOT"] = cx;
    }
    {
        ComplexMatrix sw = ComplexMatrix::Identity(4, 4);
        sw(1, 1) = sw(2, 2) = 0.0;
        sw(1, 2) = sw(2, 1) = kI;
        lib["ISWAP"] = sw;
    }
    {
        ComplexMatrix t = ComplexMatrix::Identity(8, 8);
        t(6, 6) = t(7, 7) = 0.0;
        t(6, 7) = t(7, 6) = 1.0;
        lib["TOFFOLI"] = t;
    }
    {
        // controlled-controlled-iX
        ComplexMatrix t = ComplexMatrix::Identity(8, 8);
        t(6, 6) = t(7, 7) = 0.0;
        t(6, 7) = t(7, 6) = kI;
        lib["ITOFFOLI"] = t;
    }
    {
        ComplexMatrix t = ComplexMatrix::Identity(8, 8);
        t(7, 7) = -1.0;
        lib["CCZ"] = t;
    }
    return lib;
}

const std::unordered_map<std::string, ComplexMatrix>& library() {
    static const auto lib = build_library();
    return lib;
}

}  // namespace

ComplexMatrix gate_unitary_library(const std::string& name, int arity) {
    const auto it = library().find(name);
    if (it == library().end()) throw UnknownGate("unknown gate: " + name);
    const auto dim = it->second.rows();
    if ((Eigen::Index{1} << arity) != dim)
        throw UnknownGate("gate " + name + " does not have arity " + std::to_string(arity));
    return it->second;
}

bool is_known_gate(const std::string& name) { return library().count(name) > 0; }

int gate_arity(const std::string& name) {
    const auto it = library().find(name);
    if (it == library().end()) throw UnknownGate("unknown gate: " + name);
    int arity = 0;
    for (auto dim = it->second.rows(); dim > 1; dim >>= 1) ++arity;
    return arity;
}

const std::vector<std::string>& known_gates() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, _] : library()) v.push_back(name);
        return v;
    }();
    return names;
}

}  // namespace qslprobe
