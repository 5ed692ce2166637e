#include "isospec/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace isospec {

std::vector<double> Grid::nodes() const {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = node(i);
    return xs;
}

Grid build_grid(double x_min, double x_max, int n) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
        throw GridError("build_grid: non-finite bounds");
    if (!(x_min < x_max))
        throw GridError("build_grid: x_min must be less than x_max");
    if (n < kMinGridNodes)
        throw GridError("build_grid: need at least " + std::to_string(kMinGridNodes) +
                        " nodes, got " + std::to_string(n));
    Grid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n = n;
    g.h = (x_max - x_min) / (n - 1);
    return g;
}

SampledFunction::SampledFunction(Grid g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.n)
        throw GridError("SampledFunction: values length does not match grid");
}

SampledFunction::SampledFunction(Grid g, std::vector<double> v, std::vector<std::uint8_t> mask)
    : grid(g), values(std::move(v)), valid(std::move(mask)) {
    if (static_cast<int>(values.size()) != grid.n)
        throw GridError("SampledFunction: values length does not match grid");
    if (!valid.empty() && valid.size() != values.size())
        throw GridError("SampledFunction: mask length does not match grid");
}

bool SampledFunction::all_valid() const {
    return valid.empty() ||
           std::all_of(valid.begin(), valid.end(), [](std::uint8_t b) { return b != 0; });
}

int SampledFunction::valid_count() const {
    if (valid.empty()) return grid.n;
    return static_cast<int>(std::count_if(valid.begin(), valid.end(),
                                          [](std::uint8_t b) { return b != 0; }));
}

void SampledFunction::invalidate(int i) {
    if (valid.empty()) valid.assign(values.size(), 1);
    valid[static_cast<std::size_t>(i)] = 0;
}

namespace {

void require_min_valid_run(const SampledFunction& f, int run, const char* who) {
    int best = 0, cur = 0;
    for (int i = 0; i < f.size(); ++i) {
        cur = f.is_valid(i) ? cur + 1 : 0;
        best = std::max(best, cur);
    }
    if (best < run)
        throw PreconditionError(std::string(who) + ": need at least " + std::to_string(run) +
                                " consecutive valid nodes");
}

// Differences of raw samples; shared by derivative() and log_derivative().
// `wide` enables the fourth-order interior stencil.
SampledFunction difference(const SampledFunction& f, bool wide) {
    const int n = f.size();
    const double h = f.grid.h;
    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 0);
    const auto& v = f.values;
    auto ok = [&](int i) { return f.is_valid(i); };

    for (int i = 0; i < n; ++i) {
        if (wide && i >= 2 && i <= n - 3 && ok(i - 2) && ok(i - 1) && ok(i + 1) && ok(i + 2)) {
            d[i] = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h);
            mask[i] = 1;
        } else if (i >= 1 && i <= n - 2 && ok(i - 1) && ok(i + 1)) {
            d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
            mask[i] = 1;
        } else if (i + 2 < n && ok(i) && ok(i + 1) && ok(i + 2)) {
            d[i] = (-3.0 * v[i] + 4.0 * v[i + 1] - v[i + 2]) / (2.0 * h);
            mask[i] = 1;
        } else if (i - 2 >= 0 && ok(i) && ok(i - 1) && ok(i - 2)) {
            d[i] = (3.0 * v[i] - 4.0 * v[i - 1] + v[i - 2]) / (2.0 * h);
            mask[i] = 1;
        }
    }
    if (std::all_of(mask.begin(), mask.end(), [](std::uint8_t b) { return b != 0; }))
        return SampledFunction(f.grid, std::move(d));
    return SampledFunction(f.grid, std::move(d), std::move(mask));
}

} // namespace

SampledFunction derivative(const SampledFunction& f) {
    require_min_valid_run(f, 3, "derivative");
    return difference(f, /*wide=*/false);
}

SampledFunction second_derivative(const SampledFunction& f) {
    require_min_valid_run(f, 3, "second_derivative");
    const int n = f.size();
    const double h2 = f.grid.h * f.grid.h;
    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 0);
    const auto& v = f.values;
    for (int i = 1; i < n - 1; ++i) {
        if (f.is_valid(i - 1) && f.is_valid(i) && f.is_valid(i + 1)) {
            d[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2;
            mask[i] = 1;
        }
    }
    // end nodes stay masked
    return SampledFunction(f.grid, std::move(d), std::move(mask));
}

SampledFunction cumulative_integral(const SampledFunction& f) {
    if (!f.all_valid())
        throw PreconditionError("cumulative_integral: input must be fully unmasked");
    const int n = f.size();
    const double h = f.grid.h;
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i < n; ++i)
        out[i] = out[i - 1] + 0.5 * h * (f.values[i - 1] + f.values[i]);
    return SampledFunction(f.grid, std::move(out));
}

double total_integral(const SampledFunction& f) {
    return cumulative_integral(f).values.back();
}

SampledFunction log_derivative(const SampledFunction& f) {
    const int n = f.size();
    std::vector<double> ln(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        if (!f.is_valid(i)) continue;
        if (!(f.values[i] > 0.0))
            throw PreconditionError("log_derivative: input must be strictly positive at node " +
                                    std::to_string(i));
        ln[i] = std::log(f.values[i]);
    }
    SampledFunction lnf(f.grid, std::move(ln), f.valid);
    require_min_valid_run(lnf, 3, "log_derivative");
    return difference(lnf, /*wide=*/true);
}

} // namespace isospec
