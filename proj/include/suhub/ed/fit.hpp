#pragma once

#include <Eigen/Dense>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "suhub/ed/nnls.hpp"
#include "suhub/ed/thermal.hpp"
#include "suhub/partitions.hpp"
#include "suhub/weights.hpp"

namespace suhub {

/// The design matrix for the D fit is rank deficient: some partition-weight
/// columns are linearly dependent on the given field grid.
struct DesignRankError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DFitResult {
    double beta = 0.0;
    std::vector<NPartition> partitions;
    Eigen::VectorXd coefficients;   // D(n) >= 0, aligned with `partitions`
    double relative_residual = 0.0; // |M d - z|_2 / |z|_2

    std::map<NPartition, double> as_map() const {
        std::map<NPartition, double> m;
        for (std::size_t k = 0; k < partitions.size(); ++k)
            m.emplace(partitions[k], coefficients(static_cast<Eigen::Index>(k)));
        return m;
    }
};

/// Fits Z(beta; b_i) = sum_n D(n) * partition_weight(n; beta, b_i) over the
/// field grid by nonnegative least squares against the ED oracle. The loop
/// expansion predicts an exact representation with all D positive, so the
/// relative residual should sit at rounding level.
inline DFitResult fit_D_coefficients(const ModelSpec& spec, double beta,
                                     const std::vector<FieldVector>& b_grid) {
    const int N = spec.num_particles();
    const auto partitions = enumerate_partitions(N);
    const auto p = static_cast<Eigen::Index>(partitions.size());
    const auto rows = static_cast<Eigen::Index>(b_grid.size());
    if (rows < 3 * p)
        throw std::invalid_argument(
            "fit_D_coefficients: need at least 3*p(N) grid points, got " +
            std::to_string(rows));

    Eigen::MatrixXd M(rows, p);
    Eigen::VectorXd z(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const FieldVector& b = b_grid[static_cast<std::size_t>(i)];
        if (b.n_flavors() != spec.n_flavors())
            throw std::invalid_argument("fit_D_coefficients: field size mismatch");
        for (Eigen::Index j = 0; j < p; ++j)
            M(i, j) = partition_weight(partitions[static_cast<std::size_t>(j)],
                                       beta, b);
        z(i) = EdSolver(spec, b).partition_function(beta);
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    if (qr.rank() < p) {
        // The trailing pivot columns are the ones dependent on the rest.
        const auto& perm = qr.colsPermutation().indices();
        std::string names;
        for (Eigen::Index k = qr.rank(); k < p; ++k) {
            if (!names.empty()) names += ", ";
            names += partitions[static_cast<std::size_t>(perm(k))].to_string();
        }
        throw DesignRankError(
            "fit_D_coefficients: design matrix rank " + std::to_string(qr.rank()) +
            " < " + std::to_string(p) + "; collinear partitions: " + names);
    }

    DFitResult out;
    out.beta = beta;
    out.partitions = partitions;
    out.coefficients = nnls(M, z);
    out.relative_residual = (M * out.coefficients - z).norm() / z.norm();
    return out;
}

}  // namespace suhub
