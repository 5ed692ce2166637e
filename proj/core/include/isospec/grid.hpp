#pragma once

#include <cstdint>
#include <vector>

#include "isospec/errors.hpp"

namespace isospec {

/// Uniform 1-D sampling grid. Node i sits at x_min + i*h with
/// h = (x_max - x_min)/(n - 1).
struct Grid {
    double x_min = 0.0;
    double x_max = 1.0;
    int n = 0;
    double h = 0.0;

    double node(int i) const { return x_min + i * h; }
    std::vector<double> nodes() const;

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.x_min == b.x_min && a.x_max == b.x_max && a.n == b.n;
    }
};

/// Minimum node count accepted by build_grid.
inline constexpr int kMinGridNodes = 8;

Grid build_grid(double x_min, double x_max, int n);

/// Real-valued samples aligned to a Grid. An empty mask means every node
/// is valid; otherwise valid[i] != 0 marks node i as usable.
struct SampledFunction {
    Grid grid;
    std::vector<double> values;
    std::vector<std::uint8_t> valid; // empty => all valid

    SampledFunction() = default;
    SampledFunction(Grid g, std::vector<double> v);
    SampledFunction(Grid g, std::vector<double> v, std::vector<std::uint8_t> mask);

    int size() const { return grid.n; }
    bool is_valid(int i) const { return valid.empty() || valid[i] != 0; }
    bool all_valid() const;
    /// Number of valid nodes.
    int valid_count() const;
    /// Marks node i invalid, materializing the mask if needed.
    void invalidate(int i);
};

/// Samples f(x) at every grid node.
template <typename F>
SampledFunction sample(const Grid& grid, F&& f) {
    std::vector<double> v(static_cast<std::size_t>(grid.n));
    for (int i = 0; i < grid.n; ++i) v[static_cast<std::size_t>(i)] = f(grid.node(i));
    return SampledFunction(grid, std::move(v));
}

/// First derivative: second-order central differences in the interior,
/// second-order one-sided stencils at the two ends. The mask propagates:
/// a node is valid only where its whole stencil is valid.
SampledFunction derivative(const SampledFunction& f);

/// Second derivative by the 3-point stencil; the two end nodes are masked.
SampledFunction second_derivative(const SampledFunction& f);

/// Cumulative trapezoid integral anchored at x_min (result(x_min) = 0).
/// Requires a fully unmasked input.
SampledFunction cumulative_integral(const SampledFunction& f);

/// Final entry of cumulative_integral.
double total_integral(const SampledFunction& f);

/// Logarithmic derivative sigma = D ln f, for strictly positive f.
/// Computed by differencing ln f: fourth-order central stencil in the
/// interior, falling back to second order where the wide stencil does not
/// fit. Differencing the logarithm keeps the result accurate where f
/// varies over many orders of magnitude (exact for Gaussians).
SampledFunction log_derivative(const SampledFunction& f);

} // namespace isospec
