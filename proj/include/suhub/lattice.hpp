#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace suhub {

/// Open d-dimensional box of integer lattice sites.
///
/// Coordinates along axis k run over Z ∩ [-L_k/2, -L_k/2 + L_k), which for an
/// even side 2l is the symmetric window [-l, l). Sites are stored and indexed
/// in lexicographic order of their coordinate vectors; that index order is the
/// canonical site order used by the fermionic sign convention everywhere else.
///
/// Two sites are neighbors iff their max-norm distance is exactly 1, so in
/// d >= 2 the neighborhood includes diagonals. There is no periodic wrap.
class Lattice {
public:
    explicit Lattice(std::vector<int> side_lengths)
        : sides_(std::move(side_lengths)) {
        if (sides_.empty())
            throw std::invalid_argument("Lattice: side_lengths must be non-empty");
        for (int s : sides_)
            if (s <= 0)
                throw std::invalid_argument("Lattice: side lengths must be positive");
        if (sides_.size() == 1)
            std::fprintf(stderr,
                         "suhub: warning: 1-dimensional lattice is a unit-test "
                         "geometry; the model assumes d >= 2\n");

        num_sites_ = 1;
        lo_.resize(sides_.size());
        for (std::size_t k = 0; k < sides_.size(); ++k) {
            num_sites_ *= sides_[k];
            lo_[k] = -sides_[k] / 2;
        }

        build_sites();
        build_neighbors();
    }

    int dim() const { return static_cast<int>(sides_.size()); }
    int num_sites() const { return num_sites_; }
    const std::vector<int>& side_lengths() const { return sides_; }

    /// Coordinates of site `i` (canonical = lexicographic index order).
    std::span<const int> coords(int site) const {
        check_site(site);
        return {coords_.data() + static_cast<std::size_t>(site) * sides_.size(),
                sides_.size()};
    }

    /// Index of the site with the given coordinates; domain error if outside.
    int index_of(std::span<const int> c) const {
        if (c.size() != sides_.size())
            throw std::domain_error("Lattice::index_of: wrong dimension");
        int idx = 0;
        for (std::size_t k = 0; k < sides_.size(); ++k) {
            const int off = c[k] - lo_[k];
            if (off < 0 || off >= sides_[k])
                throw std::domain_error("Lattice::index_of: site not in lattice");
            idx = idx * sides_[k] + off;
        }
        return idx;
    }

    bool contains(std::span<const int> c) const {
        if (c.size() != sides_.size()) return false;
        for (std::size_t k = 0; k < sides_.size(); ++k) {
            const int off = c[k] - lo_[k];
            if (off < 0 || off >= sides_[k]) return false;
        }
        return true;
    }

    /// Sites at max-norm distance exactly 1 from `site`, ascending index order.
    const std::vector<int>& neighbors(int site) const {
        check_site(site);
        return neighbors_[static_cast<std::size_t>(site)];
    }

    bool are_neighbors(int a, int b) const {
        check_site(a);
        check_site(b);
        if (a == b) return false;
        auto ca = coords(a), cb = coords(b);
        int dist = 0;
        for (std::size_t k = 0; k < sides_.size(); ++k) {
            const int d = std::abs(ca[k] - cb[k]);
            if (d > dist) dist = d;
        }
        return dist == 1;
    }

    std::string coord_string(int site) const {
        auto c = coords(site);
        std::string s = "(";
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (k) s += ",";
            s += std::to_string(c[k]);
        }
        return s + ")";
    }

private:
    void check_site(int site) const {
        if (site < 0 || site >= num_sites_)
            throw std::domain_error("Lattice: site index out of range");
    }

    void build_sites() {
        const auto d = sides_.size();
        coords_.resize(static_cast<std::size_t>(num_sites_) * d);
        std::vector<int> c(lo_);  // odometer in lexicographic order
        for (int i = 0; i < num_sites_; ++i) {
            for (std::size_t k = 0; k < d; ++k)
                coords_[static_cast<std::size_t>(i) * d + k] = c[k];
            for (std::size_t k = d; k-- > 0;) {
                if (++c[k] < lo_[k] + sides_[k]) break;
                c[k] = lo_[k];
            }
        }
    }

    void build_neighbors() {
        const auto d = sides_.size();
        neighbors_.resize(static_cast<std::size_t>(num_sites_));
        int combos = 1;  // offsets in {-1,0,1}^d; max-norm 1 means any nonzero one
        for (std::size_t k = 0; k < d; ++k) combos *= 3;
        std::vector<int> probe(d);
        for (int i = 0; i < num_sites_; ++i) {
            auto c = coords(i);
            for (int m = 0; m < combos; ++m) {
                int mm = m;
                bool nonzero = false;
                for (std::size_t k = 0; k < d; ++k) {
                    const int delta = mm % 3 - 1;
                    mm /= 3;
                    probe[k] = c[k] + delta;
                    nonzero |= delta != 0;
                }
                if (nonzero && contains(probe))
                    neighbors_[static_cast<std::size_t>(i)].push_back(index_of(probe));
            }
            std::sort(neighbors_[static_cast<std::size_t>(i)].begin(),
                      neighbors_[static_cast<std::size_t>(i)].end());
        }
        // Every site of a >= 2 site box has a neighbor at distance 1.
        if (num_sites_ >= 2)
            for (int i = 0; i < num_sites_; ++i)
                if (neighbors_[static_cast<std::size_t>(i)].empty())
                    throw std::logic_error("Lattice: isolated site");
    }

    std::vector<int> sides_;
    std::vector<int> lo_;
    int num_sites_ = 0;
    std::vector<int> coords_;                // num_sites x d, flattened
    std::vector<std::vector<int>> neighbors_;
};

}  // namespace suhub
