#include "isospec/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isospec {

namespace {

void require_finite_potential(const SampledFunction& V, const char* who) {
    if (!V.all_valid())
        throw PreconditionError(std::string(who) + ": potential must be fully unmasked");
    for (double v : V.values)
        if (!std::isfinite(v))
            throw PreconditionError(std::string(who) + ": potential has non-finite entries");
}

// Interior block of the Dirichlet operator: nodes 1..n-2.
struct InteriorBlock {
    std::vector<double> diag;
    double off;
};

InteriorBlock interior_block(const Hamiltonian& H) {
    InteriorBlock b;
    b.diag.assign(H.diag.begin() + 1, H.diag.end() - 1);
    b.off = H.offdiag;
    return b;
}

// Number of eigenvalues of the block strictly below x (Sturm sequence).
int sturm_count(const InteriorBlock& b, double x) {
    const double e2 = b.off * b.off;
    const int m = static_cast<int>(b.diag.size());
    int count = 0;
    double q = b.diag[0] - x;
    if (q < 0.0) ++count;
    for (int i = 1; i < m; ++i) {
        if (q == 0.0) q = std::numeric_limits<double>::min();
        q = b.diag[i] - x - e2 / q;
        if (q < 0.0) ++count;
    }
    return count;
}

constexpr double kValueTol = 1e-10;

// k-th eigenvalue (0-based) by bisection on the Sturm count.
double bisect_eigenvalue(const InteriorBlock& b, int k, double lo, double hi) {
    while (hi - lo > kValueTol) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (sturm_count(b, mid) >= k + 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

void gershgorin_bounds(const InteriorBlock& b, double& lo, double& hi) {
    const auto [mn, mx] = std::minmax_element(b.diag.begin(), b.diag.end());
    lo = *mn - 2.0 * std::abs(b.off);
    hi = *mx + 2.0 * std::abs(b.off);
}

// Tridiagonal LU with partial pivoting; solves (T - shift) x = rhs in place.
// du2 holds the second superdiagonal created by row swaps.
struct TridiagFactors {
    std::vector<double> dl, d, du, du2;
    std::vector<int> pivot;
};

TridiagFactors factor_shifted(const InteriorBlock& b, double shift) {
    const int m = static_cast<int>(b.diag.size());
    TridiagFactors f;
    f.d.resize(m);
    f.dl.assign(m > 1 ? m - 1 : 0, b.off);
    f.du.assign(m > 1 ? m - 1 : 0, b.off);
    f.du2.assign(m > 2 ? m - 2 : 0, 0.0);
    f.pivot.assign(m, 0);
    for (int i = 0; i < m; ++i) f.d[i] = b.diag[i] - shift;

    const double tiny = std::numeric_limits<double>::min();
    for (int i = 0; i < m - 1; ++i) {
        if (std::abs(f.d[i]) >= std::abs(f.dl[i])) {
            if (f.d[i] == 0.0) f.d[i] = tiny;
            const double mult = f.dl[i] / f.d[i];
            f.dl[i] = mult;
            f.d[i + 1] -= mult * f.du[i];
            if (i < m - 2) f.du2[i] = 0.0;
        } else {
            const double mult = f.d[i] / f.dl[i];
            f.pivot[i] = 1;
            f.d[i] = f.dl[i];
            f.dl[i] = mult;
            const double tmp = f.du[i];
            f.du[i] = f.d[i + 1];
            f.d[i + 1] = tmp - mult * f.d[i + 1];
            if (i < m - 2) {
                f.du2[i] = f.du[i + 1];
                f.du[i + 1] = -mult * f.du[i + 1];
            }
        }
    }
    if (f.d[m - 1] == 0.0) f.d[m - 1] = tiny;
    return f;
}

void solve_factored(const TridiagFactors& f, std::vector<double>& x) {
    const int m = static_cast<int>(f.d.size());
    for (int i = 0; i < m - 1; ++i) {
        if (f.pivot[i] == 0) {
            x[i + 1] -= f.dl[i] * x[i];
        } else {
            const double tmp = x[i];
            x[i] = x[i + 1];
            x[i + 1] = tmp - f.dl[i] * x[i];
        }
    }
    x[m - 1] /= f.d[m - 1];
    if (m > 1) x[m - 2] = (x[m - 2] - f.du[m - 2] * x[m - 1]) / f.d[m - 2];
    for (int i = m - 3; i >= 0; --i)
        x[i] = (x[i] - f.du[i] * x[i + 1] - f.du2[i] * x[i + 2]) / f.d[i];
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

Hamiltonian discretize(const SampledFunction& V, const Grid& grid) {
    require_finite_potential(V, "discretize");
    if (!(V.grid == grid)) throw GridError("discretize: potential grid mismatch");
    Hamiltonian H;
    H.grid = grid;
    const double h2 = grid.h * grid.h;
    H.offdiag = -1.0 / h2;
    H.diag.resize(static_cast<std::size_t>(grid.n));
    for (int i = 0; i < grid.n; ++i) H.diag[i] = 2.0 / h2 + V.values[i];
    return H;
}

Spectrum compute_spectrum(const Hamiltonian& H, int count) {
    const int m = H.grid.n - 2;
    if (count < 1 || count > m)
        throw PreconditionError("compute_spectrum: count out of range");
    const InteriorBlock b = interior_block(H);
    double lo, hi;
    gershgorin_bounds(b, lo, hi);
    Spectrum s;
    s.grid = H.grid;
    s.energies.reserve(static_cast<std::size_t>(count));
    double lower = lo;
    for (int k = 0; k < count; ++k) {
        const double ev = bisect_eigenvalue(b, k, lower, hi);
        s.energies.push_back(ev);
        lower = ev - kValueTol;
    }
    return s;
}

WaveFunction compute_zero_mode(const SampledFunction& V, const Grid& grid) {
    const Hamiltonian H = discretize(V, grid);
    const InteriorBlock b = interior_block(H);
    const int m = static_cast<int>(b.diag.size());

    double lo, hi;
    gershgorin_bounds(b, lo, hi);
    const double e0 = bisect_eigenvalue(b, 0, lo, hi);
    const double e1 = bisect_eigenvalue(b, 1, e0 - kValueTol, hi);
    if (!(e1 - e0 > 1e-8))
        throw EigensolverError("compute_zero_mode: ground state degenerate within 1e-8");

    const TridiagFactors f = factor_shifted(b, e0);
    std::vector<double> v(static_cast<std::size_t>(m), 1.0);
    // 1e-8 on the energy scale; the attainable floor is eps * ||H||
    const double residual_tol =
        std::max(1e-8 * std::max(1.0, std::abs(e0)),
                 1e3 * std::numeric_limits<double>::epsilon() * (std::abs(b.diag[m / 2]) +
                                                                 2.0 * std::abs(b.off)));
    bool converged = false;
    for (int iter = 0; iter < 20 && !converged; ++iter) {
        solve_factored(f, v);
        const double nrm = inf_norm(v);
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw EigensolverError("compute_zero_mode: inverse iteration broke down");
        for (double& x : v) x /= nrm;
        // residual of the normalized iterate
        double res = 0.0;
        for (int i = 0; i < m; ++i) {
            double r = (b.diag[i] - e0) * v[i];
            if (i > 0) r += b.off * v[i - 1];
            if (i + 1 < m) r += b.off * v[i + 1];
            res = std::max(res, std::abs(r));
        }
        converged = res <= residual_tol;
    }
    if (!converged)
        throw EigensolverError("compute_zero_mode: inverse iteration did not converge");

    // sign convention: positive interior
    double sum = 0.0;
    for (double x : v) sum += x;
    if (sum < 0.0)
        for (double& x : v) x = -x;

    // nodelessness above the roundoff floor of the iteration; tail
    // components below ~eps*||H||/gap of the peak are solver noise with
    // arbitrary sign
    const double floor = 1e-10;
    int last_sign = 0;
    for (int i = 0; i < m; ++i) {
        if (std::abs(v[i]) <= floor) continue;
        const int sign = v[i] > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign)
            throw EigensolverError("compute_zero_mode: interior sign change after sign fixing");
        last_sign = sign;
    }

    std::vector<double> full(static_cast<std::size_t>(grid.n), 0.0);
    for (int i = 0; i < m; ++i) full[i + 1] = v[i];
    SampledFunction samples(grid, std::move(full));
    SampledFunction squared = samples;
    for (double& x : squared.values) x *= x;
    const double norm = std::sqrt(total_integral(squared));
    if (!(norm > 0.0))
        throw EigensolverError("compute_zero_mode: zero-norm eigenvector");
    for (double& x : samples.values) x /= norm;

    WaveFunction psi;
    psi.samples = std::move(samples);
    psi.energy = e0;
    psi.normalized = true;
    return psi;
}

SampledFunction shift_to_zero_ground(const SampledFunction& V, double E0) {
    SampledFunction out = V;
    for (double& v : out.values) v -= E0;
    return out;
}

ShootResult integrate_at_energy(const SampledFunction& V, const Grid& grid, double eps) {
    require_finite_potential(V, "integrate_at_energy");
    if (!(V.grid == grid)) throw GridError("integrate_at_energy: potential grid mismatch");
    const int n = grid.n;
    const double h = grid.h;
    const double c = h * h / 12.0;

    std::vector<double> q2(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) q2[i] = eps - V.values[i];

    std::vector<double> u(static_cast<std::size_t>(n), 0.0);
    const double kappa2 = V.values[0] - eps;
    if (kappa2 > 0.0) {
        // forbidden region at the left edge: start on the decaying branch
        const double kappa = std::sqrt(kappa2);
        u[0] = 1e-100;
        u[1] = u[0] * std::exp(kappa * h);
    } else {
        u[0] = 0.0;
        u[1] = h;
    }

    constexpr double kRescaleAt = 1e250;
    for (int j = 1; j < n - 1; ++j) {
        u[j + 1] = (2.0 * u[j] * (1.0 - 5.0 * c * q2[j]) - u[j - 1] * (1.0 + c * q2[j - 1])) /
                   (1.0 + c * q2[j + 1]);
        if (!std::isfinite(u[j + 1]))
            throw NumericalError("integrate_at_energy: non-finite value during integration");
        if (std::abs(u[j + 1]) > kRescaleAt) {
            const double scale = 1.0 / std::abs(u[j + 1]);
            for (int i = 0; i <= j + 1; ++i) u[i] *= scale;
            if (!std::isfinite(u[j + 1]))
                throw NumericalError("integrate_at_energy: rescaling failed");
        }
    }

    ShootResult result{SampledFunction(grid, std::move(u)), 0};
    const auto& s = result.u.values;
    for (int j = 1; j < n - 1; ++j) {
        if (s[j] != 0.0 && s[j + 1] != 0.0 && (s[j] > 0.0) != (s[j + 1] > 0.0)) {
            if (j + 1 < n - 1) ++result.node_count; // boundary zero is not a node
        }
    }
    return result;
}

FactorizationSolution solve_at_energy(const SampledFunction& V, const Grid& grid, double eps) {
    const Spectrum s = compute_spectrum(discretize(V, grid), 1);
    return solve_at_energy(V, grid, eps, s.energies.front());
}

FactorizationSolution solve_at_energy(const SampledFunction& V, const Grid& grid, double eps,
                                      double ground_energy) {
    if (!(eps < ground_energy))
        throw PreconditionError(
            "solve_at_energy: factorization energy must lie strictly below the ground energy");
    ShootResult shot = integrate_at_energy(V, grid, eps);
    FactorizationSolution sol;
    sol.u = std::move(shot.u);
    sol.nodeless = shot.node_count == 0;
    sol.ground_energy = ground_energy;
    return sol;
}

} // namespace isospec
