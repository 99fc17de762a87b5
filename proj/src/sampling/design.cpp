// SPDX-License-Identifier: Apache-2.0
#include "romopt/sampling/design.hpp"

#include <cmath>

namespace romopt::sampling {

std::vector<Eigen::VectorXd> full_factorial(const sbr::ParameterBox& bounds, int levels) {
    bounds.validate();
    if (levels < 1) throw ConfigError("full_factorial: levels must be >= 1");
    const int d = bounds.dim();

    std::vector<std::vector<double>> axes(d);
    for (int j = 0; j < d; ++j) {
        if (levels == 1) {
            axes[j] = {0.5 * (bounds.lo[j] + bounds.hi[j])};
        } else {
            const double step = (bounds.hi[j] - bounds.lo[j]) / (levels - 1);
            for (int l = 0; l < levels; ++l) axes[j].push_back(bounds.lo[j] + step * l);
            axes[j].back() = bounds.hi[j];
        }
    }

    std::vector<Eigen::VectorXd> points;
    points.reserve(static_cast<std::size_t>(std::pow(levels, d)));
    std::vector<int> idx(d, 0);
    while (true) {
        Eigen::VectorXd p(d);
        for (int j = 0; j < d; ++j) p[j] = axes[j][idx[j]];
        points.push_back(p);
        int j = d - 1;
        while (j >= 0 && ++idx[j] == levels) idx[j--] = 0;
        if (j < 0) break;
    }
    return points;
}

DistanceResult enforce_min_distance(const Eigen::VectorXd& p,
                                    const std::vector<Eigen::VectorXd>& existing,
                                    double threshold, const sbr::ParameterBox& bounds) {
    DistanceResult res;
    res.point = p.cwiseMax(bounds.lo).cwiseMin(bounds.hi);
    if (existing.empty()) return res;

    const int d = bounds.dim();
    const Eigen::VectorXd center = 0.5 * (bounds.lo + bounds.hi);
    const double face_tol = 1e-15;

    auto nearest = [&](const Eigen::VectorXd& q) {
        std::size_t jmin = 0;
        double dmin = (q - existing[0]).norm();
        for (std::size_t j = 1; j < existing.size(); ++j) {
            const double dj = (q - existing[j]).norm();
            if (dj < dmin) {
                dmin = dj;
                jmin = j;
            }
        }
        return std::make_pair(jmin, dmin);
    };

    for (int pass = 0; pass < 32; ++pass) {
        auto [jmin, dmin] = nearest(res.point);
        if (dmin >= threshold) return res;

        const Eigen::VectorXd& q = existing[jmin];
        Eigen::VectorXd dir = res.point - q;
        double nrm = dir.norm();
        if (nrm < 1e-15) {
            dir = center - res.point;
            nrm = dir.norm();
            if (nrm < 1e-15) {
                dir = Eigen::VectorXd::Zero(d);
                dir[0] = 1.0;
                nrm = 1.0;
            }
        }
        dir /= nrm;
        // fold the direction onto active box faces
        for (int j = 0; j < d; ++j) {
            if ((res.point[j] >= bounds.hi[j] - face_tol && dir[j] > 0.0) ||
                (res.point[j] <= bounds.lo[j] + face_tol && dir[j] < 0.0))
                dir[j] = 0.0;
        }
        nrm = dir.norm();
        if (nrm < 1e-15) break;  // stuck in a corner
        dir /= nrm;

        Eigen::VectorXd cand =
            (q + dir * threshold * (1.0 + 1e-9)).cwiseMax(bounds.lo).cwiseMin(bounds.hi);
        if ((cand - q).norm() < threshold)
            cand = (cand + dir * threshold).cwiseMax(bounds.lo).cwiseMin(bounds.hi);
        res.point = cand;
    }
    res.satisfied = nearest(res.point).second >= threshold;
    return res;
}

bool stopping_check(const std::vector<double>& history, double tol, int iteration,
                    int max_iterations) {
    if (iteration >= max_iterations) return true;
    if (history.size() < 3) return false;
    const std::size_t n = history.size();
    auto rel = [&](std::size_t i) {
        const double denom = std::max(std::abs(history[i - 1]), 1e-300);
        return std::abs(history[i] - history[i - 1]) / denom;
    };
    return rel(n - 1) < tol && rel(n - 2) < tol;
}

}  // namespace romopt::sampling
