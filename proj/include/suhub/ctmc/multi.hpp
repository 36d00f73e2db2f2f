#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "suhub/ctmc/trajectory.hpp"
#include "suhub/model.hpp"

namespace suhub {

/// N independent worldlines sharing one horizon.
struct MultiTrajectory {
    double horizon = 0.0;
    std::vector<Trajectory> particles;

    std::vector<SiteFlavor> initial_config() const {
        std::vector<SiteFlavor> c;
        c.reserve(particles.size());
        for (const auto& tr : particles) c.push_back(tr.start);
        return c;
    }

    std::vector<SiteFlavor> final_config() const {
        std::vector<SiteFlavor> c;
        c.reserve(particles.size());
        for (const auto& tr : particles) c.push_back(tr.final_state());
        return c;
    }
};

/// Outcome of the hard-core / periodicity classification of one path.
///
/// survives_hardcore: spatial positions pairwise distinct on all of [0, beta].
/// periodic_permutation: tau with final^(j) = initial^(tau(j)) for all j,
/// flavors included, when it exists. in_L_beta = both.
struct PathClassification {
    bool survives_hardcore = false;
    std::optional<std::vector<int>> periodic_permutation;
    bool in_L_beta = false;
};

namespace detail {

/// Merged jump event: (time, particle). Sorting by time sweeps the whole
/// path; ties have probability zero and any fixed order keeps this
/// deterministic.
struct JumpEvent {
    double time;
    int particle;
    int target_site;
};

inline void collect_events(const MultiTrajectory& path,
                           std::vector<JumpEvent>& events) {
    events.clear();
    for (std::size_t j = 0; j < path.particles.size(); ++j) {
        const auto& tr = path.particles[j];
        for (std::size_t k = 0; k < tr.jump_times.size(); ++k)
            events.push_back({tr.jump_times[k], static_cast<int>(j),
                              tr.states[k + 1].site});
    }
    std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
        return a.time < b.time || (a.time == b.time && a.particle < b.particle);
    });
}

}  // namespace detail

/// Classifies a path by sweeping the merged, time-sorted jump sequence and
/// checking site collisions at each jump. With early_exit the sweep stops at
/// the first collision, which is enough for indicator estimators; diagnostics
/// ask for the full sweep.
inline PathClassification classify_path(const ModelSpec& spec,
                                        const MultiTrajectory& path,
                                        bool early_exit = false) {
    const int V = spec.lattice().num_sites();
    const auto N = path.particles.size();

    std::vector<int> site_of(N);
    std::vector<int> occupant(static_cast<std::size_t>(V), -1);
    for (std::size_t j = 0; j < N; ++j) {
        const int s = path.particles[j].start.site;
        if (occupant[static_cast<std::size_t>(s)] != -1)
            throw std::domain_error("classify_path: initial sites must be distinct");
        occupant[static_cast<std::size_t>(s)] = static_cast<int>(j);
        site_of[j] = s;
    }

    PathClassification out;
    out.survives_hardcore = true;

    std::vector<detail::JumpEvent> events;
    detail::collect_events(path, events);
    for (const auto& ev : events) {
        const auto j = static_cast<std::size_t>(ev.particle);
        if (occupant[static_cast<std::size_t>(ev.target_site)] != -1) {
            out.survives_hardcore = false;
            if (early_exit) return out;
        }
        occupant[static_cast<std::size_t>(site_of[j])] = -1;
        if (occupant[static_cast<std::size_t>(ev.target_site)] == -1)
            occupant[static_cast<std::size_t>(ev.target_site)] = ev.particle;
        site_of[j] = ev.target_site;
    }

    // Endpoint permutation: initial sites are distinct, so tau(j) is pinned
    // by the initial particle sitting where j ended; flavors must agree.
    // Computed also for collided paths (it is a pure endpoint property);
    // dynamical allowedness of tau holds when combined with survival.
    std::vector<int> initial_at(static_cast<std::size_t>(V), -1);
    for (std::size_t j = 0; j < N; ++j)
        initial_at[static_cast<std::size_t>(path.particles[j].start.site)] =
            static_cast<int>(j);

    std::vector<int> tau(N);
    bool matched = true;
    for (std::size_t j = 0; j < N; ++j) {
        const SiteFlavor fin = path.particles[j].final_state();
        const int target = initial_at[static_cast<std::size_t>(fin.site)];
        if (target < 0 ||
            path.particles[static_cast<std::size_t>(target)].start.flavor !=
                fin.flavor) {
            matched = false;
            break;
        }
        tau[j] = target;
    }
    if (matched) out.periodic_permutation = std::move(tau);
    out.in_L_beta = out.survives_hardcore && out.periodic_permutation.has_value();
    return out;
}

/// Samples N independent single-particle worldlines from `initial` and
/// classifies the resulting path.
inline std::pair<MultiTrajectory, PathClassification> sample_multi_trajectory(
    const ModelSpec& spec, const std::vector<SiteFlavor>& initial,
    double horizon, RngStream& rng) {
    if (static_cast<int>(initial.size()) != spec.num_particles())
        throw std::invalid_argument(
            "sample_multi_trajectory: expected N = |lattice| - 1 particles");
    MultiTrajectory path;
    path.horizon = horizon;
    path.particles.resize(initial.size());
    for (std::size_t j = 0; j < initial.size(); ++j)
        sample_single_trajectory_into(spec, initial[j], horizon, rng,
                                      path.particles[j]);
    PathClassification cls = classify_path(spec, path);
    return {std::move(path), std::move(cls)};
}

/// Exact integral of the off-site Coulomb V_o along the path (merged sweep).
inline double interaction_integral(const ModelSpec& spec,
                                   const MultiTrajectory& path) {
    if (!spec.has_offsite()) return 0.0;

    std::vector<int> sites;
    sites.reserve(path.particles.size());
    for (const auto& tr : path.particles) sites.push_back(tr.start.site);

    auto vo = [&]() { return spec.offsite_energy(sites); };

    std::vector<detail::JumpEvent> events;
    detail::collect_events(path, events);
    double acc = 0.0, t0 = 0.0, current = vo();
    for (const auto& ev : events) {
        acc += current * (ev.time - t0);
        t0 = ev.time;
        sites[static_cast<std::size_t>(ev.particle)] = ev.target_site;
        current = vo();
    }
    acc += current * (path.horizon - t0);
    return acc;
}

}  // namespace suhub
