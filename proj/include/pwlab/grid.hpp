#ifndef PWLAB_GRID_HPP
#define PWLAB_GRID_HPP

#include <cstdint>
#include <vector>

#include "core.hpp"
#include "random.hpp"

namespace pwlab {

/// Uniform tensor grid of midpoint nodes x_k = lower + (k + 1/2) h.
/// Flat indices are row-major: the last axis varies fastest.
struct GridSpec {
    Vec lower;
    Vec upper;
    std::vector<int> points;

    GridSpec() = default;

    GridSpec(Vec lo, Vec hi, std::vector<int> per_axis) : lower(std::move(lo)), upper(std::move(hi)), points(std::move(per_axis))
    {
        require(lower.size() == upper.size() && static_cast<std::size_t>(lower.size()) == points.size(), ErrorCode::dimension_mismatch,
                "grid corner/point-count lengths differ");
        require(lower.size() >= 1, ErrorCode::dimension_mismatch, "grid dimension must be positive");
        for (Eigen::Index i = 0; i < lower.size(); ++i) {
            require(upper[i] > lower[i], ErrorCode::precondition, "grid box must have positive extent");
            require(points[static_cast<std::size_t>(i)] >= 1, ErrorCode::precondition, "grid needs at least one point per axis");
        }
    }

    static GridSpec cube(int dim, double lo, double hi, int per_axis)
    {
        return GridSpec(Vec::Constant(dim, lo), Vec::Constant(dim, hi), std::vector<int>(static_cast<std::size_t>(dim), per_axis));
    }

    int dim() const { return static_cast<int>(lower.size()); }

    double spacing(int axis) const { return (upper[axis] - lower[axis]) / points[static_cast<std::size_t>(axis)]; }

    /// Quadrature weight of one node (product of spacings).
    double cell_volume() const
    {
        double w = 1.0;
        for (int i = 0; i < dim(); ++i)
            w *= spacing(i);
        return w;
    }

    std::size_t size() const
    {
        std::size_t n = 1;
        for (int p : points)
            n *= static_cast<std::size_t>(p);
        return n;
    }

    double coordinate(int axis, int k) const { return lower[axis] + (k + 0.5) * spacing(axis); }

    void node(std::size_t flat, Vec& out) const
    {
        out.resize(dim());
        for (int i = dim() - 1; i >= 0; --i) {
            const auto p = static_cast<std::size_t>(points[static_cast<std::size_t>(i)]);
            out[i] = coordinate(i, static_cast<int>(flat % p));
            flat /= p;
        }
    }

    Vec node(std::size_t flat) const
    {
        Vec v;
        node(flat, v);
        return v;
    }

    /// Same box, spacing divided by `factor`.
    GridSpec refined(int factor) const
    {
        std::vector<int> p = points;
        for (auto& v : p)
            v *= factor;
        return GridSpec(lower, upper, std::move(p));
    }
};

/// Deterministic reduction of fn(node) over all nodes. Chunks are fixed by the grid
/// size, each reduced with compensated summation, then combined in chunk order.
template <class F>
double grid_sum(const GridSpec& spec, F&& fn)
{
    const auto partial = map_chunks<double>(spec.size(), 1u << 14, [&](std::size_t begin, std::size_t end) {
        CompensatedSum s;
        Vec x;
        for (std::size_t k = begin; k < end; ++k) {
            spec.node(k, x);
            s += fn(static_cast<const Vec&>(x));
        }
        return s.value();
    });
    CompensatedSum total;
    for (double v : partial)
        total += v;
    return total.value();
}

} // namespace pwlab

#endif // PWLAB_GRID_HPP
