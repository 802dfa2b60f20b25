#pragma once

#include "latt/lattice.hpp"

namespace latt {

// Standard models used by tests, fixtures and the CLI.
Lattice integer_lattice(std::size_t n);   // Z^n
Lattice root_lattice_a(std::size_t n);    // A_n inside Z^(n+1)
Lattice root_lattice_d(std::size_t n);    // D_n inside Z^n, n >= 2
Lattice root_lattice_e8();                // D8 + (1/2)^8
Lattice d16_plus();                       // D16 + (1/2)^16
Lattice leech_lattice();                  // Golay construction, form I/8

// 24-bit words spanning the extended binary Golay code (cyclic QR code of length 23 plus parity).
std::vector<std::vector<int>> golay_basis();

}  // namespace latt
