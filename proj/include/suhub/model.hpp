#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "suhub/lattice.hpp"

namespace suhub {

/// A point of the single-particle state space: lattice site x flavor.
/// Flavors are 1-based, in {1, ..., n}.
struct SiteFlavor {
    int site = 0;
    int flavor = 1;

    friend bool operator==(const SiteFlavor&, const SiteFlavor&) = default;
};

/// External field b = (b_1, ..., b_{n-1}) coupled to the Cartan generators.
///
/// The per-flavor shift f is the telescoped coupling
///   f(1) = b_1,   f(s) = b_s - b_{s-1} (2 <= s <= n-1),   f(n) = -b_{n-1},
/// so sum_s f(s) = 0 for every b.
class FieldVector {
public:
    explicit FieldVector(std::vector<double> components)
        : b_(std::move(components)) {
        if (b_.empty())
            throw std::invalid_argument("FieldVector: needs n-1 >= 1 components");
    }

    static FieldVector zero(int n_flavors) {
        if (n_flavors < 2)
            throw std::invalid_argument("FieldVector: n_flavors must be >= 2");
        return FieldVector(std::vector<double>(n_flavors - 1, 0.0));
    }

    int n_flavors() const { return static_cast<int>(b_.size()) + 1; }

    /// b_sigma for 1 <= sigma <= n-1.
    double component(int sigma) const {
        if (sigma < 1 || sigma > static_cast<int>(b_.size()))
            throw std::domain_error("FieldVector: component index out of range");
        return b_[static_cast<std::size_t>(sigma - 1)];
    }

    std::span<const double> components() const { return b_; }

    /// f(sigma) on {1, ..., n}.
    double flavor_shift(int sigma) const {
        const int n = n_flavors();
        if (sigma < 1 || sigma > n)
            throw std::domain_error("FieldVector: flavor out of range");
        if (sigma == 1) return b_.front();
        if (sigma == n) return -b_.back();
        return b_[static_cast<std::size_t>(sigma - 1)] -
               b_[static_cast<std::size_t>(sigma - 2)];
    }

    bool is_zero() const {
        for (double v : b_)
            if (v != 0.0) return false;
        return true;
    }

    friend bool operator==(const FieldVector&, const FieldVector&) = default;

private:
    std::vector<double> b_;
};

/// k_sigma(X) = +1 if X carries flavor sigma, -1 if flavor sigma+1, else 0.
inline int k_sigma(SiteFlavor X, int sigma, int n_flavors) {
    if (sigma < 1 || sigma > n_flavors - 1)
        throw std::domain_error("k_sigma: sigma must be in {1, ..., n-1}");
    if (X.flavor == sigma) return 1;
    if (X.flavor == sigma + 1) return -1;
    return 0;
}

/// Single-particle potential v(X) = mu_x - sum_sigma b_sigma k_sigma(X).
/// Identical to mu_x - f(X.flavor); both routes are unit-tested against
/// each other.
inline double field_potential(const FieldVector& b, SiteFlavor X, double mu) {
    double coupling = 0.0;
    const int n = b.n_flavors();
    for (int sigma = 1; sigma <= n - 1; ++sigma)
        coupling += b.component(sigma) * k_sigma(X, sigma, n);
    return mu - coupling;
}

/// Model parameters: lattice, flavor count, hopping, potentials. This is the
/// single source of truth consumed by the ED, sampling and loop layers.
/// The particle number is pinned to N = |lattice| - 1 (one hole).
class ModelSpec {
public:
    ModelSpec(Lattice lattice, int n_flavors, double hop)
        : lattice_(std::move(lattice)), n_flavors_(n_flavors), hop_(hop) {
        if (n_flavors_ < 2)
            throw std::invalid_argument("ModelSpec: n_flavors must be >= 2");
        if (hop_ <= 0.0)
            throw std::invalid_argument("ModelSpec: hopping must be positive");
        if (lattice_.num_sites() < 2)
            throw std::invalid_argument("ModelSpec: need at least 2 sites");
        mu_.assign(static_cast<std::size_t>(lattice_.num_sites()), 0.0);
    }

    const Lattice& lattice() const { return lattice_; }
    int n_flavors() const { return n_flavors_; }
    double hop() const { return hop_; }
    int num_particles() const { return lattice_.num_sites() - 1; }

    double onsite(int site) const {
        return mu_.at(static_cast<std::size_t>(site));
    }
    void set_onsite(int site, double mu) {
        mu_.at(static_cast<std::size_t>(site)) = mu;
    }
    void set_uniform_onsite(double mu) {
        for (auto& v : mu_) v = mu;
    }

    /// Off-site Coulomb U_{x,y} for an unordered pair; 0 unless set.
    double offsite(int x, int y) const {
        if (x == y)
            throw std::domain_error("ModelSpec::offsite: x == y");
        auto it = offsite_.find(key(x, y));
        return it == offsite_.end() ? 0.0 : it->second;
    }
    void set_offsite(int x, int y, double u) {
        if (x == y)
            throw std::invalid_argument("ModelSpec::set_offsite: x == y");
        offsite_[key(x, y)] = u;
    }
    bool has_offsite() const { return !offsite_.empty(); }
    const std::map<std::pair<int, int>, double>& offsite_pairs() const {
        return offsite_;
    }

    /// d(x) = sum_y t_{x,y} = hop * (number of neighbors).
    double degree(int site) const {
        return hop_ * static_cast<double>(lattice_.neighbors(site).size());
    }

    /// V_o of a hard-core configuration: the ordered double sum over distinct
    /// occupied sites, i.e. 2 U_{x,y} per unordered occupied pair.
    double offsite_energy(std::span<const int> occupied_sites) const {
        if (offsite_.empty()) return 0.0;
        double e = 0.0;
        for (std::size_t i = 0; i < occupied_sites.size(); ++i)
            for (std::size_t j = i + 1; j < occupied_sites.size(); ++j)
                e += 2.0 * offsite(occupied_sites[i], occupied_sites[j]);
        return e;
    }

private:
    static std::pair<int, int> key(int x, int y) {
        return x < y ? std::pair{x, y} : std::pair{y, x};
    }

    Lattice lattice_;
    int n_flavors_;
    double hop_;
    std::vector<double> mu_;
    std::map<std::pair<int, int>, double> offsite_;
};

}  // namespace suhub
