#pragma once

#include <cmath>
#include <stdexcept>

#include "suhub/model.hpp"
#include "suhub/partitions.hpp"

namespace suhub {

/// G_beta(m; b) = sum_{sigma=1}^{n} exp(beta * m * f(sigma)):
/// the flavor sum carried by one loop of winding number m. For n = 2 this is
/// 2 cosh(beta m b_1). Strictly positive.
inline double loop_flavor_sum(int m, double beta, const FieldVector& b) {
    if (m < 1)
        throw std::invalid_argument("loop_flavor_sum: winding must be >= 1");
    double g = 0.0;
    for (int sigma = 1; sigma <= b.n_flavors(); ++sigma)
        g += std::exp(beta * m * b.flavor_shift(sigma));
    return g;
}

/// Product of loop_flavor_sum over the parts of a winding-number partition.
inline double partition_weight(const NPartition& part, double beta,
                               const FieldVector& b) {
    double w = 1.0;
    for (int m : part.parts()) w *= loop_flavor_sum(m, beta, b);
    return w;
}

/// Ingredients of the magnetization lower bound for the Cartan generator
/// h_sigma. B_sigma means f(sigma) on the full range {1, ..., n}.
struct MagnetizationBound {
    int sigma = 0;
    double f_term = 0.0;        // (1 - e^{-beta dB}) / (1 + e^{-beta dB}), dB = B_sigma - B_{sigma+1}
    double g_term = 0.0;        // sum_{tau != sigma, sigma+1} e^{beta (B_tau - B_sigma)}; 0 for n = 2
    double per_particle = 0.0;  // f / (1 + g); the bound is per_particle * N
    bool dominant = false;      // B_sigma > B_tau for all tau != sigma
};

/// Evaluates the bound terms at (sigma, beta, b). A violated dominance
/// hypothesis is reported through `dominant` rather than an exception so
/// that field sweeps can map out where the hypothesis fails.
inline MagnetizationBound magnetization_bound(int sigma, double beta,
                                              const FieldVector& b) {
    const int n = b.n_flavors();
    if (sigma < 1 || sigma > n - 1)
        throw std::domain_error("magnetization_bound: sigma out of range");

    MagnetizationBound out;
    out.sigma = sigma;
    const double B_sigma = b.flavor_shift(sigma);

    out.dominant = true;
    for (int tau = 1; tau <= n; ++tau)
        if (tau != sigma && !(B_sigma > b.flavor_shift(tau)))
            out.dominant = false;

    const double gap = B_sigma - b.flavor_shift(sigma + 1);
    const double e = std::exp(-beta * gap);
    out.f_term = (1.0 - e) / (1.0 + e);

    out.g_term = 0.0;  // empty sum when n = 2
    for (int tau = 1; tau <= n; ++tau)
        if (tau != sigma && tau != sigma + 1)
            out.g_term += std::exp(beta * (b.flavor_shift(tau) - B_sigma));

    out.per_particle = out.f_term / (1.0 + out.g_term);
    return out;
}

}  // namespace suhub
