#pragma once

#include <apcrowd/error.hpp>
#include <apcrowd/matrix.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace apcrowd {

struct PcaResult {
    Matrix transformed;                  // rows x k
    Matrix basis;                        // width x k, orthonormal columns
    std::vector<double> explained;       // variance along each component, non-increasing
    std::vector<double> column_means;
    double total_variance = 0;           // trace of the covariance
};

// Principal components of the column-centered data (covariance with n - 1 denominator).
// Each basis vector is signed so its largest-magnitude entry is positive.
inline PcaResult pca_fit_transform(const Matrix& data, std::size_t k) {
    const auto n = data.rows();
    const auto d = data.cols();
    if (k < 1 || k > d) throw ConfigError("PCA component count " + std::to_string(k) + " outside [1, " +
                                          std::to_string(d) + "]");
    if (n < 2) throw DataError("PCA needs at least two rows");

    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> x(data.data().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    Eigen::VectorXd mean = x.colwise().mean().transpose();
    Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw DataError("covariance eigen-decomposition failed");

    PcaResult out;
    out.total_variance = cov.trace();
    out.column_means.assign(mean.data(), mean.data() + d);
    out.basis = Matrix(d, k);
    // Eigen returns ascending eigenvalues.
    for (std::size_t j = 0; j < k; ++j) {
        const auto col = static_cast<Eigen::Index>(d - 1 - j);
        Eigen::VectorXd v = solver.eigenvectors().col(col);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        for (std::size_t i = 0; i < d; ++i) out.basis(i, j) = v(static_cast<Eigen::Index>(i));
        out.explained.push_back(std::max(0.0, solver.eigenvalues()(col)));
    }
    out.transformed = Matrix(n, k);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0;
            for (std::size_t i = 0; i < d; ++i) s += centered(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) * out.basis(i, j);
            out.transformed(r, j) = s;
        }
    return out;
}

}  // namespace apcrowd
