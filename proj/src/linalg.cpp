#include "egse/linalg.hpp"

#include <cmath>
#include <string>

#include "egse/errors.hpp"

namespace egse {

SigmaFactor SigmaFactor::make(const Eigen::MatrixXd& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() < 1)
        throw matrix_error("dispersion matrix must be square and nonempty");
    const double scale = sigma.cwiseAbs().maxCoeff();
    if (!std::isfinite(scale)) throw matrix_error("dispersion matrix has non-finite entries");
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale))
        throw matrix_error("dispersion matrix is not symmetric");

    SigmaFactor f;
    f.dim = static_cast<int>(sigma.rows());
    f.llt.compute(sigma);
    if (f.llt.info() != Eigen::Success)
        throw matrix_error("dispersion matrix is not positive definite");
    f.log_det = 2.0 * Eigen::MatrixXd(f.llt.matrixL()).diagonal().array().log().sum();
    return f;
}

}  // namespace egse
