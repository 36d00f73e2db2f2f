#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "suhub/ctmc/multi.hpp"
#include "suhub/partitions.hpp"
#include "suhub/permutations.hpp"
#include "suhub/weights.hpp"

namespace suhub {

/// Signals data that a correct sampler can never produce; reaching it means
/// a bug upstream, not bad input.
struct IntegrityError : std::logic_error {
    using std::logic_error::logic_error;
};

/// One flavored loop: the worldlines of `member_particles` concatenate under
/// time-periodicity into a single closed curve of winding number
/// `winding` = |member_particles|, all carrying `flavor`.
struct FlavoredLoop {
    int flavor = 1;
    int winding = 1;
    std::vector<int> member_particles;
};

/// Loop content of one accepted path: loops are the cycles of the endpoint
/// permutation, and the winding numbers form a partition of N.
struct LoopDecomposition {
    std::vector<FlavoredLoop> loops;       // ordered by smallest member index
    std::vector<int> source_permutation;   // tau, 0-based
    NPartition partition;                  // winding numbers, canonical form
};

/// Builds the loop decomposition from a path and its endpoint permutation.
/// Loops are combinatorial objects (cycles + flavor + winding); the geometric
/// space-time curves stay recoverable from the serialized path stream.
inline LoopDecomposition extract_loops(const MultiTrajectory& path,
                                       const std::vector<int>& perm) {
    if (perm.size() != path.particles.size())
        throw std::invalid_argument("extract_loops: permutation size mismatch");

    const auto cycles = permutation_cycles(perm);
    std::vector<FlavoredLoop> loops;
    std::vector<int> windings;
    loops.reserve(cycles.size());
    for (const auto& cyc : cycles) {
        FlavoredLoop loop;
        loop.member_particles = cyc;
        loop.winding = static_cast<int>(cyc.size());
        loop.flavor =
            path.particles[static_cast<std::size_t>(cyc.front())].start.flavor;
        for (int j : cyc)
            if (path.particles[static_cast<std::size_t>(j)].start.flavor !=
                loop.flavor)
                throw IntegrityError(
                    "extract_loops: permutation mixes flavors within a cycle");
        windings.push_back(loop.winding);
        loops.push_back(std::move(loop));
    }

    return {std::move(loops), perm, NPartition(std::move(windings))};
}

/// Closed-form weight of one loop: exp(beta * winding * f(flavor)).
inline double loop_weight(const FlavoredLoop& loop, double beta,
                          const FieldVector& b) {
    return std::exp(beta * loop.winding * b.flavor_shift(loop.flavor));
}

/// Compares, in log space, the sojourn-sum field integral of the path against
/// the per-loop closed form sum_gamma beta * w_gamma * f(sigma_gamma).
/// Returns |difference|; the loop representation says it is zero.
inline double verify_weight_identity(const MultiTrajectory& path,
                                     const LoopDecomposition& decomposition,
                                     double beta, const FieldVector& b) {
    double lhs = 0.0;
    for (const auto& tr : path.particles)
        lhs += field_coupling_integral(b, tr);

    double rhs = 0.0;
    for (const auto& loop : decomposition.loops)
        rhs += beta * loop.winding * b.flavor_shift(loop.flavor);

    return std::abs(lhs - rhs);
}

}  // namespace suhub
