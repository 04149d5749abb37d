#include "surfsim/layout.hpp"

#include <algorithm>
#include <stdexcept>

namespace surfsim {

namespace {

// Plaquette cells relative to anchor (r,c): SW=(r,c), SE=(r,c+1),
// NW=(r+1,c), NE=(r+1,c+1). X ancillas interact NE,NW,SE,SW; Z ancillas
// NE,SE,NW,SW, which makes the two pipelined phases conflict-free.
struct Cell { int r, c; };
const std::array<Cell, 4> kXOrder = {{{1, 1}, {1, 0}, {0, 1}, {0, 0}}};
const std::array<Cell, 4> kZOrder = {{{1, 1}, {0, 1}, {1, 0}, {0, 0}}};

}  // namespace

const Stabilizer* Layout::stab_for_ancilla(QubitId a) const {
    const auto& list = (a.kind == QubitKind::AncX) ? x_stabs : z_stabs;
    for (const auto& s : list)
        if (s.ancilla == a) return &s;
    return nullptr;
}

uint32_t Layout::z_syndrome(uint32_t data_bits) const {
    uint32_t out = 0;
    for (size_t i = 0; i < z_stabs.size(); ++i)
        if (__builtin_parity(data_bits & z_stabs[i].mask)) out |= (1u << i);
    return out;
}

Layout Layout::surface(int d) {
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("distance must be odd and >= 3");
    Layout L;
    L.distance = d;
    for (int i = 0; i < d * d; ++i) L.data.push_back(QubitId::data(i));

    struct Anchor { int r, c; bool x_type; };
    std::vector<Anchor> anchors;
    for (int r = -1; r < d; ++r)
        for (int c = -1; c < d; ++c) {
            const bool x_type = ((r + c) % 2 + 2) % 2 == 0;
            const bool interior = (r >= 0 && r < d - 1 && c >= 0 && c < d - 1);
            if (interior) {
                anchors.push_back({r, c, x_type});
                continue;
            }
            // Boundary checks: weight-two X on top/bottom, Z on left/right.
            const bool bottom = (r == -1 && c >= 0 && c < d - 1);
            const bool top = (r == d - 1 && c >= 0 && c < d - 1);
            const bool left = (c == -1 && r >= 0 && r < d - 1);
            const bool right = (c == d - 1 && r >= 0 && r < d - 1);
            if ((bottom || top) && x_type) anchors.push_back({r, c, true});
            if ((left || right) && !x_type) anchors.push_back({r, c, false});
        }

    // Simulation step order: X by (r+c, then r); Z by (r+c, then -r). This is
    // the unique order compatible with per-data-qubit C-Z slot ordering.
    std::stable_sort(anchors.begin(), anchors.end(), [](const Anchor& a, const Anchor& b) {
        if (a.x_type != b.x_type) return a.x_type;
        if (a.r + a.c != b.r + b.c) return a.r + a.c < b.r + b.c;
        return a.x_type ? (a.r < b.r) : (a.r > b.r);
    });

    int nx = 0, nz = 0;
    for (const auto& an : anchors) {
        Stabilizer s;
        s.x_type = an.x_type;
        s.anchor_r = an.r;
        s.anchor_c = an.c;
        s.ancilla = an.x_type ? QubitId::anc_x(nx++) : QubitId::anc_z(nz++);
        const auto& order = an.x_type ? kXOrder : kZOrder;
        for (int k = 0; k < 4; ++k) {
            const int r = an.r + order[k].r, c = an.c + order[k].c;
            if (r < 0 || r >= d || c < 0 || c >= d) continue;
            s.slots[k] = L.data_index(r, c);
        }
        for (int k = 0; k < 4; ++k)
            if (s.slots[k] >= 0) s.support.push_back(s.slots[k]);
        std::sort(s.support.begin(), s.support.end());
        for (int q : s.support) s.mask |= (1u << q);
        (an.x_type ? L.x_stabs : L.z_stabs).push_back(s);
    }

    for (int c = 0; c < d; ++c) L.logical_z_mask |= (1u << L.data_index(0, c));
    for (int r = 0; r < d; ++r) L.logical_x_mask |= (1u << L.data_index(r, 0));
    L.verify();
    return L;
}

Layout Layout::repetition(int n_data) {
    Layout L;
    L.distance = n_data;
    for (int i = 0; i < n_data; ++i) L.data.push_back(QubitId::data(i));
    for (int i = 0; i + 1 < n_data; ++i) {
        Stabilizer s;
        s.x_type = false;
        s.ancilla = QubitId::anc_z(i);
        s.anchor_r = 0;
        s.anchor_c = i;
        s.slots = {i + 1, i, -1, -1};
        s.support = {i, i + 1};
        s.mask = (1u << i) | (1u << (i + 1));
        L.z_stabs.push_back(s);
    }
    for (int i = 0; i < n_data; ++i) L.logical_z_mask |= (1u << i);
    L.logical_x_mask = 1u;
    return L;
}

void Layout::verify() const {
    std::vector<const Stabilizer*> all;
    for (const auto& s : x_stabs) all.push_back(&s);
    for (const auto& s : z_stabs) all.push_back(&s);
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i + 1; j < all.size(); ++j) {
            if (all[i]->x_type == all[j]->x_type) continue;
            if (__builtin_parity(all[i]->mask & all[j]->mask))
                throw std::logic_error("stabilizers do not commute");
        }
    for (const auto& s : x_stabs)
        if (__builtin_parity(s.mask & logical_z_mask))
            throw std::logic_error("logical Z does not commute with X stabilizers");
    for (const auto& s : z_stabs)
        if (__builtin_parity(s.mask & logical_x_mask))
            throw std::logic_error("logical X does not commute with Z stabilizers");
    if (!__builtin_parity(logical_x_mask & logical_z_mask))
        throw std::logic_error("logical operators must anticommute");

    // No data qubit may see two C-Z gates in the same slot of the same phase.
    for (int phase = 0; phase < 2; ++phase) {
        const auto& list = phase == 0 ? x_stabs : z_stabs;
        for (int k = 0; k < 4; ++k) {
            uint32_t seen = 0;
            for (const auto& s : list) {
                if (s.slots[k] < 0) continue;
                const uint32_t bit = 1u << s.slots[k];
                if (seen & bit) throw std::logic_error("C-Z slot conflict");
                seen |= bit;
            }
        }
    }
}

}  // namespace surfsim
