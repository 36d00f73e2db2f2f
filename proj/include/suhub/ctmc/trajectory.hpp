#pragma once

#include <stdexcept>
#include <vector>

#include "suhub/model.hpp"
#include "suhub/rng.hpp"

namespace suhub {

/// Piecewise-constant worldline of one particle on [0, horizon].
/// states[k] is held on [jump_times[k-1], jump_times[k]) with jump_times[-1]
/// read as 0; the last state is held up to and including the horizon. The
/// flavor never changes along a trajectory.
struct Trajectory {
    SiteFlavor start;
    double horizon = 0.0;
    std::vector<double> jump_times;   // strictly increasing, in (0, horizon]
    std::vector<SiteFlavor> states;   // states[0] == start; size = jumps + 1

    int num_jumps() const { return static_cast<int>(jump_times.size()); }

    SiteFlavor final_state() const { return states.back(); }

    SiteFlavor state_at(double t) const {
        std::size_t k = 0;
        while (k < jump_times.size() && jump_times[k] <= t) ++k;
        return states[k];
    }
};

/// Samples the continuous-time chain: holding time at y is exponential with
/// rate d(y), the next site is drawn with probability t_{x,y}/d(y) (uniform
/// over neighbors for constant hopping), and the flavor is carried unchanged.
inline void sample_single_trajectory_into(const ModelSpec& spec, SiteFlavor start,
                                          double horizon, RngStream& rng,
                                          Trajectory& out) {
    if (horizon < 0.0)
        throw std::invalid_argument("sample_single_trajectory: horizon < 0");
    if (start.flavor < 1 || start.flavor > spec.n_flavors())
        throw std::domain_error("sample_single_trajectory: flavor out of range");
    spec.lattice().neighbors(start.site);  // validates the site

    out.start = start;
    out.horizon = horizon;
    out.jump_times.clear();
    out.states.clear();
    out.states.push_back(start);

    double t = 0.0;
    int site = start.site;
    while (true) {
        t += rng.next_exponential() / spec.degree(site);
        if (t > horizon) break;
        const auto& nb = spec.lattice().neighbors(site);
        site = nb[rng.next_below(static_cast<std::uint32_t>(nb.size()))];
        out.jump_times.push_back(t);
        out.states.push_back({site, start.flavor});
    }
}

inline Trajectory sample_single_trajectory(const ModelSpec& spec,
                                           SiteFlavor start, double horizon,
                                           RngStream& rng) {
    Trajectory tr;
    sample_single_trajectory_into(spec, start, horizon, rng, tr);
    return tr;
}

namespace detail {

/// Exact integral of a per-state value over the sojourn decomposition:
/// sum of value(state) * sojourn length. No time discretization.
template <typename Value>
double sojourn_integral(const Trajectory& tr, Value&& value) {
    double acc = 0.0;
    double t0 = 0.0;
    for (std::size_t k = 0; k < tr.jump_times.size(); ++k) {
        acc += value(tr.states[k]) * (tr.jump_times[k] - t0);
        t0 = tr.jump_times[k];
    }
    acc += value(tr.states.back()) * (tr.horizon - t0);
    return acc;
}

}  // namespace detail

/// Integral over [0, horizon] of v(X_s) = mu(x_s) - sum_sigma b_sigma k_sigma.
inline double potential_integral(const ModelSpec& spec, const FieldVector& b,
                                 const Trajectory& tr) {
    return detail::sojourn_integral(tr, [&](SiteFlavor X) {
        return field_potential(b, X, spec.onsite(X.site));
    });
}

/// Integral of the bare field coupling sum_sigma b_sigma k_sigma(X_s),
/// evaluated through k_sigma on every sojourn (the definitional route; the
/// loop identity compares it against the per-loop closed form).
inline double field_coupling_integral(const FieldVector& b, const Trajectory& tr) {
    const int n = b.n_flavors();
    return detail::sojourn_integral(tr, [&](SiteFlavor X) {
        double c = 0.0;
        for (int sigma = 1; sigma <= n - 1; ++sigma)
            c += b.component(sigma) * k_sigma(X, sigma, n);
        return c;
    });
}

/// Integral of the on-site potential mu alone.
inline double onsite_integral(const ModelSpec& spec, const Trajectory& tr) {
    return detail::sojourn_integral(
        tr, [&](SiteFlavor X) { return spec.onsite(X.site); });
}

}  // namespace suhub
