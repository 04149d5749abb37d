#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "surfsim/qubit.hpp"

namespace surfsim {

// One stabilizer with its ancilla and C-Z slot assignment. slots[k] is the
// data qubit index interacting in C-Z time slot k (or -1 when idle there).
struct Stabilizer {
    QubitId ancilla;
    bool x_type = false;
    int anchor_r = 0, anchor_c = 0;
    std::array<int, 4> slots = {-1, -1, -1, -1};
    std::vector<int> support;  // data indices, ascending
    uint32_t mask = 0;         // support as bitmask over data indices
};

// Rotated surface code of odd distance d: d^2 data qubits on a grid
// (row r, column c) with index r*d + c, weight-two X checks on the top and
// bottom rows and weight-two Z checks on the left and right columns.
struct Layout {
    int distance = 3;
    std::vector<QubitId> data;          // D0..D(d^2-1)
    std::vector<Stabilizer> x_stabs;    // ancillas X0..; listed in simulation step order
    std::vector<Stabilizer> z_stabs;    // ancillas Z0..; listed in simulation step order
    uint32_t logical_z_mask = 0;        // bottom data row
    uint32_t logical_x_mask = 0;        // left data column

    int num_data() const { return static_cast<int>(data.size()); }
    int num_qubits() const { return num_data() + static_cast<int>(x_stabs.size() + z_stabs.size()); }
    int data_index(int r, int c) const { return r * distance + c; }

    const Stabilizer* stab_for_ancilla(QubitId a) const;
    // Z parities of a data bitstring, one bit per Z stabilizer.
    uint32_t z_syndrome(uint32_t data_bits) const;
    // Parity of all data bits = logical Z value for in-code strings.
    static int total_parity(uint32_t bits) { return __builtin_parity(bits); }

    static Layout surface(int d);
    // Distance-n repetition code fragment (Z checks only); used by tests.
    static Layout repetition(int n_data);

    // Throws unless all stabilizers pairwise commute and the logical
    // operators commute with every stabilizer and anticommute mutually.
    void verify() const;
};

}  // namespace surfsim
