#include "isospec/riccati.hpp"

#include <algorithm>
#include <cmath>

namespace isospec {

namespace {

double median_abs(const SampledFunction& f) {
    std::vector<double> mags;
    mags.reserve(static_cast<std::size_t>(f.size()));
    for (int i = 0; i < f.size(); ++i)
        if (f.is_valid(i) && std::isfinite(f.values[i])) mags.push_back(std::abs(f.values[i]));
    if (mags.empty()) return 0.0;
    auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
    std::nth_element(mags.begin(), mid, mags.end());
    return *mid;
}

double median(std::vector<double> v) {
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

// Shared pointwise cross-ratio kernel:
// k = [(w - a)(c - b)] / [(w - b)(c - a)], zero at w = a, one at w = c.
CrossRatio cross_ratio_kernel(const SampledFunction& w, const SampledFunction& a,
                              const SampledFunction& b, const SampledFunction& c,
                              double rel_tol) {
    const int n = w.size();
    const double scale = median_abs(w);
    const double tol = rel_tol * (scale > 0.0 ? scale : 1.0);

    std::vector<double> k(static_cast<std::size_t>(n), 0.0);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 0);
    std::vector<double> kept;
    kept.reserve(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        if (!(w.is_valid(i) && a.is_valid(i) && b.is_valid(i) && c.is_valid(i))) continue;
        const double num1 = w.values[i] - a.values[i];
        const double den1 = w.values[i] - b.values[i];
        const double num2 = c.values[i] - b.values[i];
        const double den2 = c.values[i] - a.values[i];
        if (std::abs(den1) <= tol || std::abs(den2) <= tol) continue;
        const double val = (num1 / den1) * (num2 / den2);
        if (!std::isfinite(val)) continue;
        k[i] = val;
        mask[i] = 1;
        kept.push_back(val);
    }
    if (kept.empty())
        throw PreconditionError("cross_ratio: degenerate configuration, every node masked");

    CrossRatio out;
    out.pointwise = SampledFunction(w.grid, std::move(k), std::move(mask));
    out.k_estimate = median(kept);
    double sum = 0.0, dev = 0.0;
    for (double v : kept) sum += v;
    out.k_mean = sum / static_cast<double>(kept.size());
    for (double v : kept) dev = std::max(dev, std::abs(v - out.k_estimate));
    out.constancy = dev;
    out.valid_fraction = static_cast<double>(kept.size()) / static_cast<double>(n);
    return out;
}

void require_shared_grid(const Superpotential& a, const Superpotential& b, const char* who) {
    if (!(a.samples.grid == b.samples.grid))
        throw GridError(std::string(who) + ": superpotentials live on different grids");
}

} // namespace

RiccatiTriple make_triple(Superpotential w1, Superpotential w2, Superpotential w3) {
    require_shared_grid(w1, w2, "make_triple");
    require_shared_grid(w1, w3, "make_triple");
    if (w1.lambda_chain == w2.lambda_chain || w1.lambda_chain == w3.lambda_chain ||
        w2.lambda_chain == w3.lambda_chain)
        throw PreconditionError("make_triple: triple members must carry pairwise distinct "
                                "parameter chains");
    return RiccatiTriple{std::move(w1), std::move(w2), std::move(w3)};
}

CrossRatio cross_ratio(const Superpotential& w, const RiccatiTriple& triple, double rel_tol) {
    if (!(rel_tol > 0.0)) throw PreconditionError("cross_ratio: rel_tol must be positive");
    require_shared_grid(w, triple.w1, "cross_ratio");
    return cross_ratio_kernel(w.samples, triple.w1.samples, triple.w2.samples, triple.w3.samples,
                              rel_tol);
}

Superpotential superpose(const RiccatiTriple& triple, double k) {
    const SampledFunction& w1 = triple.w1.samples;
    const SampledFunction& w2 = triple.w2.samples;
    const SampledFunction& w3 = triple.w3.samples;
    const int n = w1.size();

    // Mask floor for the Moebius denominator; differences cancel to fp
    // noise well before this threshold matters.
    const double scale = median_abs(w1);
    const double tol = 1e-12 * (scale > 0.0 ? scale : 1.0);

    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 0);
    int kept = 0;
    for (int i = 0; i < n; ++i) {
        if (!(w1.is_valid(i) && w2.is_valid(i) && w3.is_valid(i))) continue;
        const double d31 = w3.values[i] - w1.values[i];
        const double d32 = w3.values[i] - w2.values[i];
        const double den = k * d31 - d32;
        if (std::abs(den) <= tol) continue;
        const double num = k * w2.values[i] * d31 - w1.values[i] * d32;
        if (!std::isfinite(num / den)) continue;
        w[i] = num / den;
        mask[i] = 1;
        ++kept;
    }
    if (kept == 0)
        throw PreconditionError("superpose: denominator vanishes everywhere, output fully masked");

    Superpotential out;
    out.samples = SampledFunction(w1.grid, std::move(w), std::move(mask));
    out.kind = RiccatiKind::general;
    out.source_mode = triple.w1.source_mode;
    return out;
}

double lambda_cross_ratio(double lambda, double lambda1, double lambda2, double lambda3) {
    const double vals[4] = {lambda, lambda1, lambda2, lambda3};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (vals[i] == vals[j])
                throw PreconditionError("lambda_cross_ratio: parameters must be pairwise "
                                        "distinct");
    return (lambda1 - lambda) * (lambda2 - lambda3) /
           ((lambda2 - lambda) * (lambda1 - lambda3));
}

LambdaFormInvariant lambda_form_invariant(const WaveFunction& u0, double lambda, double lambda1,
                                          double lambda2, double lambda3) {
    const double vals[4] = {lambda, lambda1, lambda2, lambda3};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (vals[i] == vals[j])
                throw PreconditionError("lambda_form_invariant: parameters must be pairwise "
                                        "distinct");

    const SampledFunction I0 = norm_integral(u0);
    for (double l : vals) validate_lambda(I0, l);

    const Grid grid = u0.samples.grid;
    auto sigma_of = [&](double l) {
        SampledFunction s = I0;
        for (int i = 0; i < s.size(); ++i) {
            const double u = u0.samples.values[i];
            s.values[i] = u * u / (I0.values[i] + l);
        }
        return s;
    };

    SampledFunction s = sigma_of(lambda);
    SampledFunction s1 = sigma_of(lambda1);
    SampledFunction s2 = sigma_of(lambda2);
    SampledFunction s3 = sigma_of(lambda3);

    constexpr double kRelTol = 1e-9;
    LambdaFormInvariant result;
    result.sigma_path = cross_ratio_kernel(s, s1, s2, s3, kRelTol);

    // Integral form: rebuild each sigma from its derivative, re-anchored at
    // the grid midpoint so the integration constant is shared.
    const int mid = grid.n / 2;
    auto rebuilt = [&](const SampledFunction& sig) {
        SampledFunction c = cumulative_integral(derivative(sig));
        SampledFunction out = sig;
        const double anchor = sig.values[mid] - c.values[mid];
        for (int i = 0; i < out.size(); ++i) out.values[i] = anchor + c.values[i];
        return out;
    };
    result.integral_path =
        cross_ratio_kernel(rebuilt(s), rebuilt(s1), rebuilt(s2), rebuilt(s3), kRelTol);
    return result;
}

} // namespace isospec
