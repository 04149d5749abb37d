#include "support/stabilizer_sim.hpp"

#include <algorithm>

namespace oracle {

using surfsim::Layout;

std::vector<uint32_t> x_stabilizer_orbit(const Layout& L, uint32_t base) {
    std::vector<uint32_t> orbit = {base};
    for (const auto& s : L.x_stabs) {
        const size_t sz = orbit.size();
        for (size_t i = 0; i < sz; ++i) orbit.push_back(orbit[i] ^ s.mask);
    }
    std::sort(orbit.begin(), orbit.end());
    orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
    return orbit;
}

uint32_t syndrome_of_x_error(const Layout& L, uint32_t x_mask) {
    return L.z_syndrome(x_mask);
}

CodewordSets codeword_sets(const Layout& L) {
    CodewordSets out;
    auto plus = x_stabilizer_orbit(L, 0u);
    for (uint32_t w : plus) out.logical_plus.push_back(w);
    for (uint32_t w : plus) out.logical_minus.push_back(w ^ L.logical_x_mask);
    return out;
}

int majority_declare(const CodewordSets& sets, uint32_t bits) {
    auto best = [&](const std::vector<uint32_t>& set) {
        int d = 64;
        for (uint32_t w : set) d = std::min(d, __builtin_popcount(bits ^ w));
        return d;
    };
    const int dp = best(sets.logical_plus);
    const int dm = best(sets.logical_minus);
    return dp <= dm ? 0 : 1;  // ties toward +1
}

}  // namespace oracle
