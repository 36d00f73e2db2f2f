#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "suhub/ctmc/estimators.hpp"
#include "suhub/ctmc/multi.hpp"

namespace suhub {

/// Serializable record of one accepted path: initial configuration, the jump
/// list of every particle, the endpoint permutation and the field-free
/// weight. Flavors are constant along worldlines, so this reconstructs the
/// full path.
struct AcceptedPath {
    std::vector<SiteFlavor> initial;
    std::vector<std::vector<std::pair<double, int>>> jumps;  // (time, target site)
    std::vector<int> permutation;
    double weight = 1.0;  // exp(-int W_{infinity, b=0})
};

inline AcceptedPath make_accepted_path(const AcceptedRecord& rec) {
    AcceptedPath p;
    p.initial = rec.path.initial_config();
    p.jumps.reserve(rec.path.particles.size());
    for (const auto& tr : rec.path.particles) {
        std::vector<std::pair<double, int>> js;
        js.reserve(tr.jump_times.size());
        for (std::size_t k = 0; k < tr.jump_times.size(); ++k)
            js.emplace_back(tr.jump_times[k], tr.states[k + 1].site);
        p.jumps.push_back(std::move(js));
    }
    p.permutation = rec.permutation;
    p.weight = rec.weight_b0;
    return p;
}

inline MultiTrajectory to_multi_trajectory(const AcceptedPath& p, double horizon) {
    MultiTrajectory path;
    path.horizon = horizon;
    path.particles.resize(p.initial.size());
    for (std::size_t j = 0; j < p.initial.size(); ++j) {
        Trajectory& tr = path.particles[j];
        tr.start = p.initial[j];
        tr.horizon = horizon;
        tr.states.push_back(tr.start);
        for (const auto& [t, site] : p.jumps[j]) {
            tr.jump_times.push_back(t);
            tr.states.push_back({site, tr.start.flavor});
        }
    }
    return path;
}

/// A batch of accepted paths together with the sampling context needed to
/// normalize estimators built on it.
struct PathStream {
    double beta = 0.0;
    std::uint64_t total_samples = 0;
    std::vector<AcceptedPath> paths;
};

}  // namespace suhub
