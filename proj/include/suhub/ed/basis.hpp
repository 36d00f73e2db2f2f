#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "suhub/caps.hpp"
#include "suhub/model.hpp"

namespace suhub {

/// One basis vector of the single-hole space: the hole site plus one flavor
/// per occupied site. `flavors[k]` belongs to the k-th occupied site in
/// canonical site order (all sites except the hole, ascending index).
struct EdBasisState {
    int hole = 0;
    std::vector<int> flavors;  // length N, values in {1, ..., n}
    long index = 0;
};

/// Deterministic bijection {0, ..., |L|*n^N - 1} <-> (hole, flavor assignment).
/// Hole index is the major digit; the flavor assignment is a mixed-radix
/// number with the first occupied site most significant.
class BasisEnumeration {
public:
    explicit BasisEnumeration(const ModelSpec& spec)
        : num_sites_(spec.lattice().num_sites()),
          n_(spec.n_flavors()),
          N_(spec.num_particles()) {
        long flavor_count = 1;
        const long cap = dimension_cap();
        for (int k = 0; k < N_; ++k) {
            flavor_count *= n_;
            if (flavor_count > cap)
                throw CapExceeded("BasisEnumeration: |L|*n^N exceeds cap " +
                                  std::to_string(cap));
        }
        flavor_states_ = flavor_count;
        dimension_ = static_cast<long>(num_sites_) * flavor_states_;
        check_cap(dimension_, "BasisEnumeration");
    }

    long dimension() const { return dimension_; }
    int num_particles() const { return N_; }
    int n_flavors() const { return n_; }

    /// Occupied sites for a given hole, in canonical (ascending) order.
    std::vector<int> occupied_sites(int hole) const {
        std::vector<int> occ;
        occ.reserve(static_cast<std::size_t>(N_));
        for (int s = 0; s < num_sites_; ++s)
            if (s != hole) occ.push_back(s);
        return occ;
    }

    EdBasisState state(long index) const {
        if (index < 0 || index >= dimension_)
            throw std::domain_error("BasisEnumeration: index out of range");
        EdBasisState st;
        st.index = index;
        st.hole = static_cast<int>(index / flavor_states_);
        long rem = index % flavor_states_;
        st.flavors.assign(static_cast<std::size_t>(N_), 1);
        for (int k = N_ - 1; k >= 0; --k) {
            st.flavors[static_cast<std::size_t>(k)] =
                static_cast<int>(rem % n_) + 1;
            rem /= n_;
        }
        return st;
    }

    long index_of(int hole, std::span<const int> flavors) const {
        if (hole < 0 || hole >= num_sites_)
            throw std::domain_error("BasisEnumeration: hole out of range");
        if (static_cast<int>(flavors.size()) != N_)
            throw std::domain_error("BasisEnumeration: wrong flavor count");
        long idx = hole;
        for (int k = 0; k < N_; ++k) {
            const int f = flavors[static_cast<std::size_t>(k)];
            if (f < 1 || f > n_)
                throw std::domain_error("BasisEnumeration: flavor out of range");
            idx = idx * n_ + (f - 1);
        }
        return idx;
    }

private:
    int num_sites_;
    int n_;
    int N_;
    long flavor_states_ = 1;  // n^N
    long dimension_ = 0;
};

}  // namespace suhub
