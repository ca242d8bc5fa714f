#pragma once

// Shared Cholesky wrapper for dispersion matrices: validates symmetry and
// positive definiteness once, then serves solves and the log determinant.

#include <Eigen/Dense>

namespace egse {

struct SigmaFactor {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double log_det = 0.0;
    int dim = 0;

    static SigmaFactor make(const Eigen::MatrixXd& sigma);

    Eigen::VectorXd solve(const Eigen::VectorXd& v) const { return llt.solve(v); }
    Eigen::MatrixXd solve(const Eigen::MatrixXd& m) const { return llt.solve(m); }
    Eigen::MatrixXd lower() const { return llt.matrixL(); }
};

}  // namespace egse
