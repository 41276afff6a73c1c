#pragma once

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "affect/clustering.hpp"

namespace affect {

struct PcaProjection {
    std::array<Point3, 2> components{};   // unit eigenvectors of the standardized covariance
    std::array<double, 2> eigenvalues{};
    std::vector<std::array<double, 2>> coordinates;  // per input row
};

// Projects rows onto the two leading principal components of their z-scored
// covariance (the correlation matrix). Each component's largest-magnitude entry is
// made positive so signs are reproducible.
inline PcaProjection pca_project(const StandardizedMatrix& m) {
    const std::size_t n = m.rows.size();
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& r : m.rows) {
        const Eigen::Vector3d z(r[0], r[1], r[2]);
        cov += z * z.transpose();
    }
    cov /= static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    if (solver.info() != Eigen::Success) throw Error("pca: eigen decomposition failed");
    // Eigen returns ascending eigenvalues.
    PcaProjection out;
    for (std::size_t c = 0; c < 2; ++c) {
        const Eigen::Index col = 2 - static_cast<Eigen::Index>(c);
        Eigen::Vector3d v = solver.eigenvectors().col(col);
        Eigen::Index big = 0;
        v.cwiseAbs().maxCoeff(&big);
        if (v(big) < 0) v = -v;
        out.components[c] = {v(0), v(1), v(2)};
        out.eigenvalues[c] = solver.eigenvalues()(col);
    }
    out.coordinates.reserve(n);
    for (const auto& r : m.rows) {
        std::array<double, 2> xy{};
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t d = 0; d < 3; ++d) xy[c] += r[d] * out.components[c][d];
        out.coordinates.push_back(xy);
    }
    return out;
}

}  // namespace affect
