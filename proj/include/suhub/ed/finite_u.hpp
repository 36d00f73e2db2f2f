#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "suhub/caps.hpp"
#include "suhub/ed/thermal.hpp"
#include "suhub/model.hpp"

namespace suhub {

/// Finite-U Hamiltonian on the full N-particle space (no hard-core
/// projection): used to probe convergence of Z_U toward the projected-sector
/// trace as U grows.
///
/// The on-site term is the literal quadratic form U * sum_x n_x^2 (the i = j
/// self-pairing included), so the single-occupancy sector carries a constant
/// U*N alongside and the doubly-occupied states sit ~2U above it.
class FiniteUSolver {
public:
    FiniteUSolver(const ModelSpec& spec, const FieldVector& b, double onsite_u)
        : spec_(&spec) {
        const int V = spec.lattice().num_sites();
        const int n = spec.n_flavors();
        const int N = spec.num_particles();
        const int m = V * n;  // orbitals: K = site*n + (flavor-1)
        if (m > 62)
            throw CapExceeded("FiniteUSolver: more than 62 orbitals");

        long dim = 1;  // C(m, N) with overflow guard against the cap
        for (int k = 1; k <= N; ++k) {
            dim = dim * (m - k + 1) / k;
            if (dim > dimension_cap())
                throw CapExceeded("FiniteUSolver: C(m, N) exceeds cap");
        }
        check_cap(dim, "FiniteUSolver");

        // Enumerate N-subsets of orbitals as bitmasks (Gosper's hack).
        masks_.reserve(static_cast<std::size_t>(dim));
        std::unordered_map<std::uint64_t, long> index;
        index.reserve(static_cast<std::size_t>(dim) * 2);
        const std::uint64_t limit = std::uint64_t(1) << m;
        std::uint64_t c = (std::uint64_t(1) << N) - 1;
        while (c < limit) {
            index.emplace(c, static_cast<long>(masks_.size()));
            masks_.push_back(c);
            const std::uint64_t lo = c & (~c + 1);
            const std::uint64_t up = c + lo;
            c = up | (((c ^ up) / lo) >> 2);
        }

        // One-body matrix h(b) on orbitals, graph-Laplacian convention.
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
        for (int x = 0; x < V; ++x)
            for (int s = 1; s <= n; ++s) {
                const int K = x * n + (s - 1);
                h(K, K) = spec.degree(x) + spec.onsite(x) - b.flavor_shift(s);
                for (int y : spec.lattice().neighbors(x))
                    h(K, y * n + (s - 1)) = -spec.hop();
            }

        Eigen::MatrixXd H =
            Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(masks_.size()),
                                  static_cast<Eigen::Index>(masks_.size()));
        std::vector<int> site_occ(static_cast<std::size_t>(V));
        for (std::size_t a = 0; a < masks_.size(); ++a) {
            const std::uint64_t S = masks_[a];

            std::fill(site_occ.begin(), site_occ.end(), 0);
            double diag = 0.0;
            for (int K = 0; K < m; ++K)
                if (S >> K & 1) {
                    diag += h(K, K);
                    ++site_occ[static_cast<std::size_t>(K / n)];
                }
            for (int x = 0; x < V; ++x) {
                const double mx = site_occ[static_cast<std::size_t>(x)];
                diag += onsite_u * mx * mx;
                if (spec.has_offsite())
                    for (int y = 0; y < V; ++y)
                        if (y != x && site_occ[static_cast<std::size_t>(y)] > 0 && mx > 0)
                            diag += spec.offsite(x, y) * mx *
                                    site_occ[static_cast<std::size_t>(y)];
            }
            H(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) = diag;

            for (int K = 0; K < m; ++K) {
                if (!(S >> K & 1)) continue;
                for (int Kp = 0; Kp < m; ++Kp) {
                    if (Kp == K || (S >> Kp & 1) || h(Kp, K) == 0.0) continue;
                    const std::uint64_t Sp =
                        S ^ (std::uint64_t(1) << K) ^ (std::uint64_t(1) << Kp);
                    const int lo = std::min(K, Kp), hi = std::max(K, Kp);
                    int between = 0;
                    for (int q = lo + 1; q < hi; ++q)
                        if (S >> q & 1) ++between;
                    const double amp = h(Kp, K) * (between % 2 == 0 ? 1.0 : -1.0);
                    H(static_cast<Eigen::Index>(index.at(Sp)),
                      static_cast<Eigen::Index>(a)) += amp;
                }
            }
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("FiniteUSolver: eigendecomposition failed");
        evals_ = es.eigenvalues();
    }

    long dimension() const { return static_cast<long>(masks_.size()); }
    const Eigen::VectorXd& eigenvalues() const { return evals_; }

    double partition_function(double beta) const {
        if (beta < 0.0)
            throw std::invalid_argument("partition_function: beta must be >= 0");
        double z = 0.0;
        for (Eigen::Index i = 0; i < evals_.size(); ++i)
            z += std::exp(-beta * evals_(i));
        return z;
    }

    /// Shifted log Z; the plain trace underflows once beta*U*N is large.
    double log_partition_function(double beta) const {
        if (beta < 0.0)
            throw std::invalid_argument("log_partition_function: beta >= 0");
        const double e0 = evals_.minCoeff();
        double acc = 0.0;
        for (Eigen::Index i = 0; i < evals_.size(); ++i)
            acc += std::exp(-beta * (evals_(i) - e0));
        return -beta * e0 + std::log(acc);
    }

private:
    const ModelSpec* spec_;
    std::vector<std::uint64_t> masks_;
    Eigen::VectorXd evals_;
};

inline double finite_u_partition_function(const ModelSpec& spec,
                                          const FieldVector& b, double beta,
                                          double onsite_u) {
    if (onsite_u < 0.0)
        throw std::invalid_argument("finite_u_partition_function: U must be >= 0");
    return FiniteUSolver(spec, b, onsite_u).partition_function(beta);
}

}  // namespace suhub
