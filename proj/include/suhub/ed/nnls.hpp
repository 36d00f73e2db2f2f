#pragma once

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>
#include <vector>

namespace suhub {

/// Nonnegative least squares, Lawson–Hanson active set:
/// minimize |A x - y|_2 subject to x >= 0.
inline Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                            int max_iter = -1) {
    const Eigen::Index m = A.rows(), p = A.cols();
    if (y.size() != m)
        throw std::invalid_argument("nnls: dimension mismatch");
    if (max_iter < 0) max_iter = static_cast<int>(3 * p + 30);

    const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                       A.lpNorm<Eigen::Infinity>() * static_cast<double>(std::max(m, p));

    Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
    std::vector<bool> passive(static_cast<std::size_t>(p), false);

    auto solve_passive = [&](Eigen::VectorXd& z) {
        std::vector<Eigen::Index> cols;
        for (Eigen::Index j = 0; j < p; ++j)
            if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
        Eigen::MatrixXd Ap(m, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(cols[k]);
        const Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(y);
        z.setZero(p);
        for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = zp(static_cast<Eigen::Index>(k));
    };

    for (int outer = 0; outer < max_iter; ++outer) {
        const Eigen::VectorXd w = A.transpose() * (y - A * x);
        Eigen::Index best = -1;
        double best_w = tol;
        for (Eigen::Index j = 0; j < p; ++j)
            if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
                best_w = w(j);
                best = j;
            }
        if (best < 0) break;  // KKT satisfied
        passive[static_cast<std::size_t>(best)] = true;

        Eigen::VectorXd z(p);
        for (int inner = 0; inner < max_iter; ++inner) {
            solve_passive(z);
            double alpha = 1.0;
            for (Eigen::Index j = 0; j < p; ++j)
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
                    const double a = x(j) / (x(j) - z(j));
                    if (a < alpha) alpha = a;
                }
            if (alpha >= 1.0) {
                x = z;
                break;
            }
            x += alpha * (z - x);
            for (Eigen::Index j = 0; j < p; ++j)
                if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
                    passive[static_cast<std::size_t>(j)] = false;
                    x(j) = 0.0;
                }
        }
    }
    return x;
}

}  // namespace suhub
