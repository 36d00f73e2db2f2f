#pragma once

#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "suhub/caps.hpp"
#include "suhub/model.hpp"
#include "suhub/permutations.hpp"

namespace suhub {

/// Result of the configuration-graph search for dynamically allowed endpoint
/// permutations of a base configuration.
struct AllowedPermutationReport {
    std::vector<SiteFlavor> base_config;
    std::vector<std::vector<int>> allowed;  // each perm 0-based, sorted lexicographically
    std::string method;                     // "bfs" or "mc-observed"
    bool all_even = true;
};

/// BFS over labeled hole arrangements: a node assigns each particle a site
/// (the hole is the one empty site), an edge is a single hole hop. A
/// permutation tau is allowed iff some reached node has the hole back at its
/// start with particle j sitting on the initial site of tau(j) and matching
/// flavor. Flavor labels ride along with the particles, so the allowed set is
/// computed per configuration, flavors and all.
inline AllowedPermutationReport allowed_permutations_bfs(
    const ModelSpec& spec, const std::vector<SiteFlavor>& config,
    long cap = -1) {
    const int V = spec.lattice().num_sites();
    const auto N = config.size();
    if (static_cast<int>(N) != spec.num_particles())
        throw std::invalid_argument("allowed_permutations_bfs: bad configuration");
    if (cap < 0) cap = dimension_cap();

    // site -> particle index (+1), 0 = hole; doubles as the BFS node key.
    std::vector<int> initial_arrangement(static_cast<std::size_t>(V), 0);
    for (std::size_t j = 0; j < N; ++j) {
        const int s = config[j].site;
        if (initial_arrangement[static_cast<std::size_t>(s)] != 0)
            throw std::domain_error("allowed_permutations_bfs: duplicate sites");
        initial_arrangement[static_cast<std::size_t>(s)] = static_cast<int>(j) + 1;
    }
    const int initial_hole = [&] {
        for (int s = 0; s < V; ++s)
            if (initial_arrangement[static_cast<std::size_t>(s)] == 0) return s;
        throw std::logic_error("allowed_permutations_bfs: no hole");
    }();

    auto key_of = [](const std::vector<int>& arr) {
        return std::string(arr.begin(), arr.end());
    };

    std::unordered_set<std::string> visited;
    std::deque<std::vector<int>> frontier;
    visited.insert(key_of(initial_arrangement));
    frontier.push_back(initial_arrangement);

    AllowedPermutationReport report;
    report.base_config = config;
    report.method = "bfs";

    while (!frontier.empty()) {
        const std::vector<int> arr = std::move(frontier.front());
        frontier.pop_front();

        int hole = -1;
        for (int s = 0; s < V; ++s)
            if (arr[static_cast<std::size_t>(s)] == 0) hole = s;

        if (hole == initial_hole) {
            // Candidate tau: particle j now sits on the initial site of tau(j).
            std::vector<int> tau(N);
            bool flavors_ok = true;
            std::vector<int> site_of(N);
            for (int s = 0; s < V; ++s)
                if (arr[static_cast<std::size_t>(s)] != 0)
                    site_of[static_cast<std::size_t>(
                        arr[static_cast<std::size_t>(s)] - 1)] = s;
            for (std::size_t j = 0; j < N && flavors_ok; ++j) {
                const int target =
                    initial_arrangement[static_cast<std::size_t>(site_of[j])] - 1;
                tau[j] = target;
                flavors_ok = config[static_cast<std::size_t>(target)].flavor ==
                             config[j].flavor;
            }
            if (flavors_ok) report.allowed.push_back(std::move(tau));
        }

        for (int y : spec.lattice().neighbors(hole)) {
            std::vector<int> next = arr;
            next[static_cast<std::size_t>(hole)] =
                next[static_cast<std::size_t>(y)];
            next[static_cast<std::size_t>(y)] = 0;
            auto [it, inserted] = visited.insert(key_of(next));
            if (inserted) {
                if (static_cast<long>(visited.size()) > cap)
                    throw CapExceeded(
                        "allowed_permutations_bfs: configuration graph exceeds cap");
                frontier.push_back(std::move(next));
            }
        }
    }

    std::sort(report.allowed.begin(), report.allowed.end());
    for (const auto& tau : report.allowed)
        if (permutation_sign(tau) != 1) report.all_even = false;
    return report;
}

}  // namespace suhub
