#include "isospec/scattering.hpp"

#include <cmath>
#include <sstream>

#include "isospec/susy.hpp"

namespace isospec {

namespace {

void require_short_range(const SampledFunction& V, double tol, const char* who) {
    const double left = std::abs(V.values.front());
    const double right = std::abs(V.values.back());
    if (left >= tol || right >= tol) {
        std::ostringstream os;
        os << who << ": potential is not short-range on this grid (|V| at the edges = " << left
           << ", " << right << ", required < " << tol << ")";
        throw PreconditionError(os.str());
    }
}

} // namespace

ScatteringData scattering_coefficients(const SampledFunction& V, const Grid& grid,
                                       double k_wavenumber, double tol) {
    if (!(k_wavenumber > 0.0))
        throw PreconditionError("scattering_coefficients: wavenumber must be positive");
    if (!(V.grid == grid)) throw GridError("scattering_coefficients: potential grid mismatch");
    if (!V.all_valid())
        throw PreconditionError("scattering_coefficients: potential must be fully unmasked");
    require_short_range(V, tol, "scattering_coefficients");

    const int n = grid.n;
    const double h = grid.h;
    const double c = h * h / 12.0;
    const double k = k_wavenumber;
    const std::complex<double> I(0.0, 1.0);

    // Free waves on the Numerov lattice carry the dispersion wavenumber q
    // with cos(qh) = (1 - 5c k^2)/(1 + c k^2); matching against q-waves
    // instead of e^{+-ikx} removes the O(k^5 h^4 L) phase drift.
    const double disp = (1.0 - 5.0 * c * k * k) / (1.0 + c * k * k);
    if (!(disp > -1.0 && disp < 1.0))
        throw PreconditionError("scattering_coefficients: kh too large for the Numerov lattice");
    const double q = std::acos(disp) / h;

    // q^2 = k^2 - V; integrate from the right with transmitted-wave data.
    std::vector<double> q2(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) q2[i] = k * k - V.values[i];

    std::vector<std::complex<double>> u(static_cast<std::size_t>(n));
    u[n - 1] = std::exp(I * q * grid.node(n - 1));
    u[n - 2] = std::exp(I * q * grid.node(n - 2));
    for (int j = n - 2; j > 0; --j) {
        u[j - 1] = (2.0 * u[j] * (1.0 - 5.0 * c * q2[j]) - u[j + 1] * (1.0 + c * q2[j + 1])) /
                   (1.0 + c * q2[j - 1]);
        if (!std::isfinite(u[j - 1].real()) || !std::isfinite(u[j - 1].imag()))
            throw NumericalError("scattering_coefficients: integration blew up");
    }

    // Match u = A e^{iqx} + B e^{-iqx} on the two leftmost nodes.
    const double x0 = grid.node(0), x1 = grid.node(1);
    const std::complex<double> e0p = std::exp(I * q * x0), e0m = std::exp(-I * q * x0);
    const std::complex<double> e1p = std::exp(I * q * x1), e1m = std::exp(-I * q * x1);
    const std::complex<double> det = e0p * e1m - e1p * e0m; // -2i sin(kh)
    const std::complex<double> A = (u[0] * e1m - u[1] * e0m) / det;
    const std::complex<double> B = (u[1] * e0p - u[0] * e1p) / det;

    ScatteringData data;
    data.k_wavenumber = k;
    data.transmission = 1.0 / A;
    data.reflection = B / A;
    data.unitarity_defect =
        std::abs(std::norm(data.reflection) + std::norm(data.transmission) - 1.0);
    if (data.unitarity_defect > 10.0 * tol) {
        std::ostringstream os;
        os << "scattering_coefficients: unitarity defect " << data.unitarity_defect
           << " exceeds 10*tol; integration unreliable at k = " << k;
        throw NumericalError(os.str());
    }
    return data;
}

std::vector<ScatteringDelta> scattering_invariance(const SampledFunction& V,
                                                   const WaveFunction& u0, double lambda,
                                                   const std::vector<double>& ks, double tol) {
    require_short_range(V, tol, "scattering_invariance");
    // Deformation of the physical potential; the term decays like u0^2, so
    // short range is preserved.
    const SampledFunction delta = deformation_term(u0, lambda);
    SampledFunction V_lambda = V;
    for (int i = 0; i < V_lambda.size(); ++i) V_lambda.values[i] += delta.values[i];
    // A valid lambda cannot break flatness; treat it as an internal error.
    if (std::abs(V_lambda.values.front()) >= tol || std::abs(V_lambda.values.back()) >= tol)
        throw NumericalError("scattering_invariance: deformed potential lost short range; "
                             "this indicates a broken deformation, not a bad input");

    std::vector<ScatteringDelta> deltas;
    deltas.reserve(ks.size());
    for (double k : ks) {
        const ScatteringData base = scattering_coefficients(V, V.grid, k, tol);
        const ScatteringData def = scattering_coefficients(V_lambda, V.grid, k, tol);
        ScatteringDelta d;
        d.k_wavenumber = k;
        d.reflection_delta = std::abs(std::abs(def.reflection) - std::abs(base.reflection));
        d.transmission_delta =
            std::abs(std::abs(def.transmission) - std::abs(base.transmission));
        deltas.push_back(d);
    }
    return deltas;
}

} // namespace isospec
