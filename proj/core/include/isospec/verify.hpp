#pragma once

#include <map>
#include <string>
#include <vector>

#include "isospec/scattering.hpp"
#include "isospec/susy.hpp"

namespace isospec {

/// Tolerances applied by the verification harness.
struct VerifyTolerances {
    double spectrum = 5e-3;   // per-level |E_n(lambda) - E_n|
    double partner = 1e-4;    // max interior |V+(w_g) - V+(w_p)|
    double gs_residual = 1e-3;
    double norm = 1e-5;       // | ||u0(lambda)|| - 1 |; h^2-limited, ~5e-7 at h = 0.005
    double scattering = 5e-4; // per-k | |R_l|-|R| |, | |T_l|-|T| |
    double flatness = 1e-6;   // short-range edge requirement
};

/// Everything measured for one potential across a lambda sweep.
struct VerificationReport {
    std::string potential_id;
    std::vector<double> lambdas;
    /// per lambda: per-level |E_n(lambda) - E_n|
    std::vector<std::vector<double>> spectrum_deltas;
    std::vector<double> partner_deviation; // per lambda
    std::vector<double> gs_residual;       // per lambda
    std::vector<double> norm_error;        // per lambda
    /// per lambda: per-k (|dR|, |dT|); empty when scattering was skipped
    std::vector<std::vector<ScatteringDelta>> scattering_deltas;
    bool passed = false;
    VerifyTolerances tolerances;
    std::vector<std::string> warnings;

    /// Re-evaluates `passed` from the recorded deltas.
    void evaluate();
};

/// Spectra of the parent and of every deformed member, compared level by
/// level. V must already be shifted to zero ground energy; u0 is its zero
/// mode.
VerificationReport isospectrality_report(const SampledFunction& V, const Grid& grid,
                                         const WaveFunction& u0,
                                         const std::vector<double>& lambdas, int levels,
                                         double tol);

/// max interior |V+(w_g(lambda)) - V+(w_p)| per lambda.
std::vector<double> partner_uniqueness(const WaveFunction& u0, const std::vector<double>& lambdas,
                                       double tol);

/// max interior |(-D^2 + V(lambda)) u0(lambda)| for one family member.
double ground_state_residual(const FamilyMember& member);

} // namespace isospec
