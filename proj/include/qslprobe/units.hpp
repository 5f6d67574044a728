#pragma once

namespace qslprobe::units {

// Reduced Planck constant, J*s (2019 SI exact value of h / 2pi).
inline constexpr double hbar = 1.054571817e-34;

// Hamiltonian matrices inside the library carry angular-frequency units
// (rad/s, i.e. H_SI / hbar); reported energies are joules.
inline constexpr double joules_from_angular(double omega) { return hbar * omega; }
inline constexpr double angular_from_joules(double energy) { return energy / hbar; }

}  // namespace qslprobe::units
