#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace surfsim {

// Physical qubit identifier. Data qubits are D0..D8 (or D0..D24 for distance
// 5), ancillas X0.. / Z0.. in layout order. Ordering is Data < AncX < AncZ,
// then by index; density matrices keep their qubits sorted in this order.
enum class QubitKind : uint8_t { Data = 0, AncX = 1, AncZ = 2 };

struct QubitId {
    QubitKind kind = QubitKind::Data;
    uint8_t index = 0;

    friend auto operator<=>(const QubitId&, const QubitId&) = default;

    std::string str() const {
        static const char prefix[3] = {'D', 'X', 'Z'};
        return std::string(1, prefix[static_cast<int>(kind)]) + std::to_string(index);
    }

    static QubitId data(int i) { return {QubitKind::Data, static_cast<uint8_t>(i)}; }
    static QubitId anc_x(int i) { return {QubitKind::AncX, static_cast<uint8_t>(i)}; }
    static QubitId anc_z(int i) { return {QubitKind::AncZ, static_cast<uint8_t>(i)}; }

    static QubitId parse(const std::string& s) {
        if (s.size() < 2) throw std::invalid_argument("bad qubit id: " + s);
        QubitKind k;
        switch (s[0]) {
            case 'D': k = QubitKind::Data; break;
            case 'X': k = QubitKind::AncX; break;
            case 'Z': k = QubitKind::AncZ; break;
            default: throw std::invalid_argument("bad qubit id: " + s);
        }
        return {k, static_cast<uint8_t>(std::stoi(s.substr(1)))};
    }
};

}  // namespace surfsim
