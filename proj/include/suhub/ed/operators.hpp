#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "suhub/ed/basis.hpp"
#include "suhub/model.hpp"

namespace suhub {

enum class EdOperatorKind { hamiltonian, h_sigma, semigroup };

/// Sparse real symmetric operator in the BasisEnumeration indexing.
struct EdOperator {
    long dimension = 0;
    Eigen::SparseMatrix<double> entries;
    EdOperatorKind kind = EdOperatorKind::hamiltonian;

    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(entries); }
};

namespace detail {

/// site -> flavor map for one basis state; 0 marks the hole.
inline void fill_occupancy(const BasisEnumeration& basis, const EdBasisState& st,
                           std::vector<int>& occ) {
    occ.assign(occ.size(), 0);
    const auto sites = basis.occupied_sites(st.hole);
    for (std::size_t k = 0; k < sites.size(); ++k)
        occ[static_cast<std::size_t>(sites[k])] = st.flavors[k];
}

/// Fermionic sign of a hole hop between sites a and b: occupied sites are
/// kept in canonical order, so moving the particle across the sites strictly
/// between a and b contributes one transposition each.
inline int hop_sign(const std::vector<int>& occ, int a, int b) {
    const int lo = std::min(a, b), hi = std::max(a, b);
    int between = 0;
    for (int s = lo + 1; s < hi; ++s)
        if (occ[static_cast<std::size_t>(s)] != 0) ++between;
    return (between % 2 == 0) ? 1 : -1;
}

}  // namespace detail

/// Projected Hamiltonian on the single-hole space.
///
/// The kinetic part follows the graph-Laplacian convention of the
/// one-particle generator h_0 (diagonal d(x), off-diagonal -t), which is the
/// operator the path sampler represents; the second-quantized pure-hopping
/// form differs from it by the site-dependent diagonal sum_x d(x) n_x.
/// Entries:
///   diagonal:  sum_{x occupied} [d(x) + mu_x - f(flavor_x)] + V_o,
///   off-diagonal: hole hop to a neighbor carrying the occupant's flavor,
///   amplitude -t times the canonical-order fermionic sign.
/// Both triangles are emitted, so the matrix is symmetric exactly.
inline EdOperator build_hamiltonian(const ModelSpec& spec, const FieldVector& b) {
    if (b.n_flavors() != spec.n_flavors())
        throw std::invalid_argument("build_hamiltonian: field size mismatch");
    const BasisEnumeration basis(spec);
    const auto& lat = spec.lattice();
    const int V = lat.num_sites();
    const long dim = basis.dimension();

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(dim) * static_cast<std::size_t>(V));
    std::vector<int> occ(static_cast<std::size_t>(V), 0);
    std::vector<int> new_flavors(static_cast<std::size_t>(basis.num_particles()));

    for (long i = 0; i < dim; ++i) {
        const EdBasisState st = basis.state(i);
        detail::fill_occupancy(basis, st, occ);

        double diag = 0.0;
        for (int s = 0; s < V; ++s)
            if (occ[static_cast<std::size_t>(s)] != 0)
                diag += spec.degree(s) + spec.onsite(s) -
                        b.flavor_shift(occ[static_cast<std::size_t>(s)]);
        if (spec.has_offsite()) {
            const auto sites = basis.occupied_sites(st.hole);
            diag += spec.offsite_energy(sites);
        }
        trips.emplace_back(i, i, diag);

        for (int y : lat.neighbors(st.hole)) {
            const int moving = occ[static_cast<std::size_t>(y)];
            const int sign = detail::hop_sign(occ, st.hole, y);
            // New state: hole at y, the moving flavor lands on the old hole.
            int k = 0;
            for (int s = 0; s < V; ++s) {
                if (s == y) continue;
                new_flavors[static_cast<std::size_t>(k++)] =
                    (s == st.hole) ? moving : occ[static_cast<std::size_t>(s)];
            }
            const long j = basis.index_of(y, new_flavors);
            trips.emplace_back(j, i, -spec.hop() * sign);
        }
    }

    EdOperator op;
    op.dimension = dim;
    op.kind = EdOperatorKind::hamiltonian;
    op.entries.resize(dim, dim);
    op.entries.setFromTriplets(trips.begin(), trips.end());
    return op;
}

/// Cartan generator h_sigma = N_sigma - N_{sigma+1}: diagonal with integer
/// entries in [-N, N].
inline EdOperator build_h_sigma(const ModelSpec& spec, int sigma) {
    if (sigma < 1 || sigma > spec.n_flavors() - 1)
        throw std::domain_error("build_h_sigma: sigma out of range");
    const BasisEnumeration basis(spec);
    const long dim = basis.dimension();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(dim));
    for (long i = 0; i < dim; ++i) {
        const EdBasisState st = basis.state(i);
        int value = 0;
        for (int f : st.flavors) {
            if (f == sigma) ++value;
            if (f == sigma + 1) --value;
        }
        if (value != 0) trips.emplace_back(i, i, static_cast<double>(value));
    }
    EdOperator op;
    op.dimension = dim;
    op.kind = EdOperatorKind::h_sigma;
    op.entries.resize(dim, dim);
    op.entries.setFromTriplets(trips.begin(), trips.end());
    return op;
}

/// Diagonal of h_sigma as a vector (used by thermal averages).
inline Eigen::VectorXd h_sigma_diagonal(const ModelSpec& spec, int sigma) {
    if (sigma < 1 || sigma > spec.n_flavors() - 1)
        throw std::domain_error("h_sigma_diagonal: sigma out of range");
    const BasisEnumeration basis(spec);
    Eigen::VectorXd d(basis.dimension());
    for (long i = 0; i < basis.dimension(); ++i) {
        const EdBasisState st = basis.state(i);
        int value = 0;
        for (int f : st.flavors) {
            if (f == sigma) ++value;
            if (f == sigma + 1) --value;
        }
        d(i) = static_cast<double>(value);
    }
    return d;
}

/// Conjugates H(0) by the basis permutation that relabels flavors with the
/// permutation eps of {1, ..., n} and compares entrywise (tolerance 1e-12).
/// True at b = 0 by flavor symmetry; generically false once a field is on.
inline bool flavor_relabel_spectrum_check(const ModelSpec& spec,
                                          const std::vector<int>& eps,
                                          const FieldVector* b_opt = nullptr) {
    const int n = spec.n_flavors();
    if (static_cast<int>(eps.size()) != n)
        throw std::invalid_argument("flavor_relabel_spectrum_check: bad permutation size");
    std::vector<bool> hit(static_cast<std::size_t>(n), false);
    for (int v : eps) {
        if (v < 1 || v > n || hit[static_cast<std::size_t>(v - 1)])
            throw std::invalid_argument("flavor_relabel_spectrum_check: not a permutation");
        hit[static_cast<std::size_t>(v - 1)] = true;
    }

    const FieldVector b = b_opt ? *b_opt : FieldVector::zero(n);
    const EdOperator H = build_hamiltonian(spec, b);
    const BasisEnumeration basis(spec);
    const long dim = basis.dimension();

    std::vector<long> fwd(static_cast<std::size_t>(dim));
    std::vector<long> inv(static_cast<std::size_t>(dim));
    std::vector<int> relabeled(static_cast<std::size_t>(basis.num_particles()));
    for (long i = 0; i < dim; ++i) {
        const EdBasisState st = basis.state(i);
        for (std::size_t k = 0; k < st.flavors.size(); ++k)
            relabeled[k] = eps[static_cast<std::size_t>(st.flavors[k] - 1)];
        const long p = basis.index_of(st.hole, relabeled);
        fwd[static_cast<std::size_t>(i)] = p;
        inv[static_cast<std::size_t>(p)] = i;
    }

    constexpr double kTol = 1e-12;
    for (int col = 0; col < H.entries.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(H.entries, col); it;
             ++it) {
            const long i = it.row(), j = it.col();
            const double v = it.value();
            // Both directions: catches entries present in only one of
            // H and P H P^T.
            if (std::abs(H.entries.coeff(fwd[static_cast<std::size_t>(i)],
                                         fwd[static_cast<std::size_t>(j)]) -
                         v) > kTol)
                return false;
            if (std::abs(H.entries.coeff(inv[static_cast<std::size_t>(i)],
                                         inv[static_cast<std::size_t>(j)]) -
                         v) > kTol)
                return false;
        }
    }
    return true;
}

}  // namespace suhub
