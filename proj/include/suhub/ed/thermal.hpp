#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "suhub/ed/operators.hpp"

namespace suhub {

/// Dense symmetric eigendecomposition of H(b) plus the thermal quantities
/// derived from it. Exactness beats speed here: this is the oracle the
/// stochastic estimators are tested against, and desk-scale dimensions make
/// a full decomposition cheap.
class EdSolver {
public:
    EdSolver(const ModelSpec& spec, const FieldVector& b)
        : spec_(&spec), b_(b) {
        const EdOperator H = build_hamiltonian(spec, b);
        dim_ = H.dimension;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.dense());
        if (es.info() != Eigen::Success)
            throw std::runtime_error("EdSolver: eigendecomposition failed");
        evals_ = es.eigenvalues();
        evecs_ = es.eigenvectors();
    }

    long dimension() const { return dim_; }
    const Eigen::VectorXd& eigenvalues() const { return evals_; }
    const Eigen::MatrixXd& eigenvectors() const { return evecs_; }

    /// Z(beta) = sum_i exp(-beta lambda_i).
    double partition_function(double beta) const {
        if (beta < 0.0)
            throw std::invalid_argument("partition_function: beta must be >= 0");
        double z = 0.0;
        for (long i = 0; i < dim_; ++i) z += std::exp(-beta * evals_(i));
        return z;
    }

    /// log Z computed with the ground-state shift, stable at large beta.
    double log_partition_function(double beta) const {
        if (beta < 0.0)
            throw std::invalid_argument("log_partition_function: beta >= 0");
        const double e0 = evals_.minCoeff();
        double acc = 0.0;
        for (long i = 0; i < dim_; ++i) acc += std::exp(-beta * (evals_(i) - e0));
        return -beta * e0 + std::log(acc);
    }

    /// <h_sigma>_beta = Tr[h_sigma e^{-beta H}] / Z. h_sigma is diagonal and
    /// commutes with H, so only eigenvector weights are needed.
    double thermal_expectation_h(double beta, int sigma) const {
        if (beta <= 0.0)
            throw std::invalid_argument("thermal_expectation_h: beta must be > 0");
        const Eigen::VectorXd hdiag = h_sigma_diagonal(*spec_, sigma);
        const double e0 = evals_.minCoeff();
        double num = 0.0, den = 0.0;
        for (long i = 0; i < dim_; ++i) {
            const double w = std::exp(-beta * (evals_(i) - e0));
            const double h_ii = evecs_.col(i).array().square().matrix().dot(hdiag);
            num += w * h_ii;
            den += w;
        }
        return num / den;
    }

    /// e^{-beta H} as a dense matrix in the basis-state indexing.
    Eigen::MatrixXd semigroup(double beta) const {
        if (beta < 0.0)
            throw std::invalid_argument("semigroup: beta must be >= 0");
        Eigen::VectorXd w(dim_);
        for (long i = 0; i < dim_; ++i) w(i) = std::exp(-beta * evals_(i));
        return evecs_ * w.asDiagonal() * evecs_.transpose();
    }

    /// Same content as semigroup(), wrapped as a tagged operator.
    EdOperator semigroup_operator(double beta) const {
        EdOperator op;
        op.dimension = dim_;
        op.kind = EdOperatorKind::semigroup;
        op.entries = semigroup(beta).sparseView();
        return op;
    }

private:
    const ModelSpec* spec_;
    FieldVector b_;
    long dim_ = 0;
    Eigen::VectorXd evals_;
    Eigen::MatrixXd evecs_;
};

inline double partition_function(const ModelSpec& spec, const FieldVector& b,
                                 double beta) {
    return EdSolver(spec, b).partition_function(beta);
}

inline double thermal_expectation_h(const ModelSpec& spec, const FieldVector& b,
                                    double beta, int sigma) {
    return EdSolver(spec, b).thermal_expectation_h(beta, sigma);
}

}  // namespace suhub
