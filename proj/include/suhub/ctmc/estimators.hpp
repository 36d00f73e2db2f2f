#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "suhub/ctmc/multi.hpp"
#include "suhub/partitions.hpp"
#include "suhub/permutations.hpp"
#include "suhub/rng.hpp"

namespace suhub {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

namespace detail {

/// Samples are processed in fixed blocks and the per-block partial sums are
/// folded in block order, so the result is bit-identical for any worker
/// count. The block size is part of that contract.
constexpr std::uint64_t kBlockSize = 4096;

struct BlockStats {
    std::uint64_t count = 0;
    double sum = 0.0;
    double sumsq = 0.0;

    void add(double v) {
        ++count;
        sum += v;
        sumsq += v * v;
    }
    void merge(const BlockStats& o) {
        count += o.count;
        sum += o.sum;
        sumsq += o.sumsq;
    }
};

inline McEstimate to_estimate(const BlockStats& s) {
    McEstimate e;
    e.samples = s.count;
    if (s.count == 0) return e;
    e.mean = s.sum / static_cast<double>(s.count);
    if (s.count > 1) {
        double var = (s.sumsq - s.sum * e.mean) / static_cast<double>(s.count - 1);
        if (var < 0.0) var = 0.0;
        e.std_error = std::sqrt(var / static_cast<double>(s.count));
    }
    return e;
}

/// Runs `body(block_index, first_sample, last_sample, acc)` over all blocks,
/// distributing blocks over `workers` threads; returns per-block accumulators
/// in block order.
template <typename Acc, typename Body>
std::vector<Acc> run_blocks(std::uint64_t samples, int workers, Body&& body) {
    const std::uint64_t blocks = (samples + kBlockSize - 1) / kBlockSize;
    std::vector<Acc> acc(static_cast<std::size_t>(blocks));
    if (blocks == 0) return acc;

    auto run_range = [&](std::uint64_t b) {
        const std::uint64_t first = b * kBlockSize;
        const std::uint64_t last = std::min(samples, first + kBlockSize);
        body(b, first, last, acc[static_cast<std::size_t>(b)]);
    };

    if (workers <= 1 || blocks == 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run_range(b);
        return acc;
    }

    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= blocks) break;
            run_range(b);
        }
    };
    std::vector<std::thread> pool;
    const int nthreads = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), blocks));
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return acc;
}

template <typename PerSample>  // double(sample_index, RngStream&)
McEstimate run_mc(std::uint64_t samples, StreamSeed seed, int workers,
                  PerSample&& per_sample) {
    if (samples < 1)
        throw std::invalid_argument("run_mc: samples must be >= 1");
    auto blocks = run_blocks<BlockStats>(
        samples, workers,
        [&](std::uint64_t, std::uint64_t first, std::uint64_t last,
            BlockStats& acc) {
            for (std::uint64_t i = first; i < last; ++i) {
                RngStream rng = seed.stream(i);
                acc.add(per_sample(i, rng));
            }
        });
    BlockStats total;
    for (const auto& b : blocks) total.merge(b);
    return to_estimate(total);
}

}  // namespace detail

/// Single-particle Feynman-Kac estimate of (e^{-time h_mu(b)} f)(X):
/// the Monte Carlo mean of exp(-int_0^time v(X_s) ds) f(X_time) with the
/// potential integral evaluated exactly on the piecewise-constant path.
inline McEstimate fk_single_estimate(const ModelSpec& spec, const FieldVector& b,
                                     const std::function<double(SiteFlavor)>& f,
                                     SiteFlavor X, double time,
                                     std::uint64_t samples, StreamSeed seed,
                                     int workers = 1) {
    return detail::run_mc(samples, seed, workers,
                          [&](std::uint64_t, RngStream& rng) {
                              Trajectory tr;
                              sample_single_trajectory_into(spec, X, time, rng, tr);
                              const double w =
                                  std::exp(-potential_integral(spec, b, tr));
                              return w * f(tr.final_state());
                          });
}

/// Many-body semigroup element <e_X | e^{-beta H} | e_Y> in the
/// unit-normalized hard-core basis: surviving paths ending on a permutation
/// pi of Y contribute sgn(pi) exp(-int W), everything else contributes 0.
inline McEstimate fk_many_body_estimate(const ModelSpec& spec,
                                        const FieldVector& b,
                                        const std::vector<SiteFlavor>& initial,
                                        const std::vector<SiteFlavor>& final_config,
                                        double beta, std::uint64_t samples,
                                        StreamSeed seed, int workers = 1) {
    const int V = spec.lattice().num_sites();
    if (static_cast<int>(initial.size()) != spec.num_particles() ||
        final_config.size() != initial.size())
        throw std::invalid_argument("fk_many_body_estimate: bad configuration size");

    std::vector<int> y_at(static_cast<std::size_t>(V), -1);
    for (std::size_t k = 0; k < final_config.size(); ++k) {
        if (y_at[static_cast<std::size_t>(final_config[k].site)] != -1)
            throw std::domain_error("fk_many_body_estimate: Y sites must be distinct");
        y_at[static_cast<std::size_t>(final_config[k].site)] =
            static_cast<int>(k);
    }

    return detail::run_mc(
        samples, seed, workers, [&](std::uint64_t, RngStream& rng) -> double {
            auto [path, cls] = sample_multi_trajectory(spec, initial, beta, rng);
            if (!cls.survives_hardcore) return 0.0;

            std::vector<int> pi(initial.size());
            for (std::size_t j = 0; j < path.particles.size(); ++j) {
                const SiteFlavor fin = path.particles[j].final_state();
                const int k = y_at[static_cast<std::size_t>(fin.site)];
                if (k < 0 ||
                    final_config[static_cast<std::size_t>(k)].flavor != fin.flavor)
                    return 0.0;
                pi[j] = k;
            }

            double w_exp = interaction_integral(spec, path);
            for (const auto& tr : path.particles)
                w_exp += potential_integral(spec, b, tr);
            return static_cast<double>(permutation_sign(pi)) * std::exp(-w_exp);
        });
}

/// One accepted path as seen by downstream consumers. weight_b0 carries the
/// field-free part exp(-int W_{infinity, b=0}); the field factor is separate.
struct AcceptedRecord {
    std::uint64_t sample_index;
    const MultiTrajectory& path;
    const std::vector<int>& permutation;
    double weight_b0;
};

/// Called under an internal mutex; consumers needing a deterministic order
/// should sort by sample_index.
using AcceptedSink = std::function<void(const AcceptedRecord&)>;

struct ZEstimate {
    McEstimate z;
    std::uint64_t accepted = 0;
};

namespace detail {

struct ZBlock {
    BlockStats stats;
    std::uint64_t accepted = 0;
};

/// Uniform draw over hard-core classes: hole uniform over sites, flavors iid
/// uniform; the configuration is the canonical-order tuple.
inline std::vector<SiteFlavor> draw_initial_config(const ModelSpec& spec,
                                                   RngStream& rng) {
    const int V = spec.lattice().num_sites();
    const int n = spec.n_flavors();
    const int hole = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(V)));
    std::vector<SiteFlavor> config;
    config.reserve(static_cast<std::size_t>(V - 1));
    for (int s = 0; s < V; ++s)
        if (s != hole)
            config.push_back(
                {s, static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n))) + 1});
    return config;
}

}  // namespace detail

/// Direct estimator of Z(beta; b): with X drawn uniformly over hard-core
/// configurations (flavors uniform),
///   Z_hat = |L| n^N  x  mean[ 1_{L_beta} e^{-int W_{inf, b=0}} e^{int field} ],
/// normalized so beta -> 0 reproduces the dimension exactly. Accepted paths
/// stream to `sink` when given.
inline ZEstimate estimate_partition_function(const ModelSpec& spec,
                                             const FieldVector& b, double beta,
                                             std::uint64_t samples,
                                             StreamSeed seed, int workers = 1,
                                             const AcceptedSink& sink = nullptr) {
    if (samples < 1)
        throw std::invalid_argument("estimate_partition_function: samples >= 1");
    const int N = spec.num_particles();
    double dim = static_cast<double>(spec.lattice().num_sites());
    for (int k = 0; k < N; ++k) dim *= spec.n_flavors();

    const bool field_on = !b.is_zero();
    std::mutex sink_mutex;

    auto blocks = detail::run_blocks<detail::ZBlock>(
        samples, workers,
        [&](std::uint64_t, std::uint64_t first, std::uint64_t last,
            detail::ZBlock& acc) {
            for (std::uint64_t i = first; i < last; ++i) {
                RngStream rng = seed.stream(i);
                const auto initial = detail::draw_initial_config(spec, rng);
                auto [path, cls] =
                    sample_multi_trajectory(spec, initial, beta, rng);
                if (!cls.in_L_beta) {
                    acc.stats.add(0.0);
                    continue;
                }
                ++acc.accepted;

                double w0_exp = interaction_integral(spec, path);
                for (const auto& tr : path.particles)
                    w0_exp += onsite_integral(spec, tr);
                const double weight_b0 = std::exp(-w0_exp);

                double field_log = 0.0;
                if (field_on)
                    for (const auto& tr : path.particles)
                        field_log += field_coupling_integral(b, tr);

                acc.stats.add(dim * weight_b0 * std::exp(field_log));
                if (sink) {
                    std::lock_guard<std::mutex> lock(sink_mutex);
                    sink({i, path, *cls.periodic_permutation, weight_b0});
                }
            }
        });

    detail::ZBlock total;
    for (const auto& blk : blocks) {
        total.stats.merge(blk.stats);
        total.accepted += blk.accepted;
    }
    return {detail::to_estimate(total.stats), total.accepted};
}

/// Winding-number partition of an accepted path's endpoint permutation.
inline NPartition winding_partition(const std::vector<int>& permutation) {
    std::vector<int> windings;
    for (const auto& cyc : permutation_cycles(permutation))
        windings.push_back(static_cast<int>(cyc.size()));
    return NPartition(std::move(windings));
}

}  // namespace suhub
