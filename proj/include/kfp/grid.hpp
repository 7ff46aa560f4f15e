#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include "kfp/numeric.hpp"

namespace kfp {

/// Uniform velocity nodes on [-V, V] carrying the discrete Gaussian measure.
/// Weights are proportional to mu(v_j) and renormalized so they sum to one
/// exactly; an odd node count places v = 0 on the grid.
struct VelocityGrid {
    int dim = 1;
    double v_max = 8.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    double dv = 0;

    VelocityGrid(double V, int n_v)
    {
        if (!(V > 0)) throw std::invalid_argument("VelocityGrid: cutoff must be positive");
        if (n_v < 3 || n_v % 2 == 0)
            throw std::invalid_argument("VelocityGrid: node count must be odd and at least 3");
        v_max = V;
        dv = 2.0 * V / static_cast<double>(n_v - 1);
        nodes.resize(n_v);
        weights.resize(n_v);
        for (int j = 0; j < n_v; ++j) {
            // symmetric construction keeps nodes[j] == -nodes[n-1-j] bitwise
            const int c = (n_v - 1) / 2;
            nodes[j] = static_cast<double>(j - c) * dv;
            weights[j] = gaussian_weight(nodes[j]);
        }
        const double total = pairwise_sum(weights);
        for (double& w : weights) w /= total;
    }

    int size() const { return static_cast<int>(nodes.size()); }

    /// discrete Gaussian moment sum_j w_j v_j^k
    double moment(int order) const
    {
        std::vector<double> terms(nodes.size());
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            double p = 1.0;
            for (int k = 0; k < order; ++k) p *= nodes[j];
            terms[j] = weights[j] * p;
        }
        return pairwise_sum(terms);
    }

    bool operator==(const VelocityGrid& o) const
    {
        return v_max == o.v_max && nodes.size() == o.nodes.size();
    }
};

/// Uniform periodic grid on the unit torus [0,1), nodes x_i = i/n.
struct TorusGrid {
    int dim = 1;
    std::vector<double> nodes;
    double dx = 0;

    explicit TorusGrid(int n_x)
    {
        if (n_x < 2) throw std::invalid_argument("TorusGrid: need at least two nodes");
        dx = 1.0 / static_cast<double>(n_x);
        nodes.resize(n_x);
        for (int i = 0; i < n_x; ++i) nodes[i] = static_cast<double>(i) * dx;
    }

    int size() const { return static_cast<int>(nodes.size()); }

    int wrap_index(int i) const
    {
        const int n = size();
        int r = i % n;
        return r < 0 ? r + n : r;
    }

    bool operator==(const TorusGrid& o) const { return nodes.size() == o.nodes.size(); }
};

using VelocityGridPtr = std::shared_ptr<const VelocityGrid>;
using TorusGridPtr = std::shared_ptr<const TorusGrid>;

inline VelocityGridPtr make_velocity_grid(double V, int n_v)
{
    return std::make_shared<const VelocityGrid>(V, n_v);
}

inline TorusGridPtr make_torus_grid(int n_x)
{
    return std::make_shared<const TorusGrid>(n_x);
}

}  // namespace kfp
