#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>

#include "suhub/ctmc/estimators.hpp"
#include "suhub/ctmc/path_stream.hpp"
#include "suhub/partitions.hpp"

namespace suhub {

struct DEstimates {
    double beta = 0.0;
    std::uint64_t samples = 0;
    std::map<NPartition, McEstimate> by_partition;
};

namespace detail {

struct WeightStats {
    std::uint64_t count = 0;
    double sum = 0.0;
    double sumsq = 0.0;
    void add(double w) {
        ++count;
        sum += w;
        sumsq += w * w;
    }
    void merge(const WeightStats& o) {
        count += o.count;
        sum += o.sum;
        sumsq += o.sumsq;
    }
};

/// D_hat(n) = dim x mean(1[partition = n] * weight_b0) / n_flavors^{#parts}.
/// The n^k divisor converts the flavor-summed sampling measure into the
/// fixed-flavor loop measure (each of the k loops carries one of n flavors,
/// uniformly and independently).
inline DEstimates finalize_d(const ModelSpec& spec, double beta,
                             std::uint64_t total_samples,
                             const std::map<NPartition, WeightStats>& hist) {
    if (total_samples == 0)
        throw std::invalid_argument("estimate_D: empty sample stream");
    double dim = static_cast<double>(spec.lattice().num_sites());
    for (int k = 0; k < spec.num_particles(); ++k) dim *= spec.n_flavors();

    DEstimates out;
    out.beta = beta;
    out.samples = total_samples;
    for (const auto& [part, ws] : hist) {
        double flavor_states = 1.0;
        for (int k = 0; k < part.num_parts(); ++k) flavor_states *= spec.n_flavors();
        const double scale = dim / flavor_states;

        BlockStats s;
        s.count = total_samples;
        s.sum = scale * ws.sum;
        s.sumsq = scale * scale * ws.sumsq;
        out.by_partition.emplace(part, to_estimate(s));
    }
    return out;
}

}  // namespace detail

/// D estimates from a recorded accepted-path stream (paths must have been
/// sampled with the b = 0 weighting, which is what the sampler emits).
inline DEstimates estimate_D(const PathStream& stream, const ModelSpec& spec) {
    std::map<NPartition, detail::WeightStats> hist;
    for (const auto& p : stream.paths)
        hist[winding_partition(p.permutation)].add(p.weight);
    return detail::finalize_d(spec, stream.beta, stream.total_samples, hist);
}

/// Sampling version: runs the worldline sampler and accumulates the partition
/// histogram in fixed blocks, so results are worker-count independent.
inline DEstimates estimate_D_mc(const ModelSpec& spec, double beta,
                                std::uint64_t samples, StreamSeed seed,
                                int workers = 1) {
    if (samples < 1)
        throw std::invalid_argument("estimate_D_mc: samples must be >= 1");
    using Hist = std::map<NPartition, detail::WeightStats>;
    auto blocks = detail::run_blocks<Hist>(
        samples, workers,
        [&](std::uint64_t, std::uint64_t first, std::uint64_t last, Hist& acc) {
            for (std::uint64_t i = first; i < last; ++i) {
                RngStream rng = seed.stream(i);
                const auto initial = detail::draw_initial_config(spec, rng);
                auto [path, cls] =
                    sample_multi_trajectory(spec, initial, beta, rng);
                if (!cls.in_L_beta) continue;
                double w_exp = interaction_integral(spec, path);
                for (const auto& tr : path.particles)
                    w_exp += onsite_integral(spec, tr);
                acc[winding_partition(*cls.periodic_permutation)].add(
                    std::exp(-w_exp));
            }
        });

    Hist total;
    for (const auto& blk : blocks)
        for (const auto& [part, ws] : blk) total[part].merge(ws);
    return detail::finalize_d(spec, beta, samples, total);
}

}  // namespace suhub
