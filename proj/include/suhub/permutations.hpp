#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace suhub {

/// Cycle decomposition of a permutation given as perm[j] = tau(j), 0-based.
/// Cycles are listed by ascending smallest member; each cycle starts at its
/// smallest member.
inline std::vector<std::vector<int>> permutation_cycles(std::span<const int> perm) {
    const int n = static_cast<int>(perm.size());
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<std::vector<int>> cycles;
    for (int start = 0; start < n; ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        std::vector<int> cyc;
        int j = start;
        while (!seen[static_cast<std::size_t>(j)]) {
            seen[static_cast<std::size_t>(j)] = true;
            cyc.push_back(j);
            j = perm[static_cast<std::size_t>(j)];
            if (j < 0 || j >= n)
                throw std::invalid_argument("permutation_cycles: not a permutation");
        }
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

/// sgn(tau): +1 for even, -1 for odd.
inline int permutation_sign(std::span<const int> perm) {
    int sign = 1;
    for (const auto& cyc : permutation_cycles(perm))
        if (cyc.size() % 2 == 0) sign = -sign;
    return sign;
}

inline bool is_identity(std::span<const int> perm) {
    for (std::size_t j = 0; j < perm.size(); ++j)
        if (perm[j] != static_cast<int>(j)) return false;
    return true;
}

}  // namespace suhub
