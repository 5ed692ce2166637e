#pragma once

#include <map>
#include <optional>
#include <string>

#include "isospec/grid.hpp"
#include "isospec/schrodinger.hpp"

namespace isospec {

enum class PotentialFamily {
    harmonic,      // V = omega^2 x^2 (omega defaults to 1)
    poschl_teller, // V = -depth sech^2 x
    square_well,   // V = -depth for |x| <= width/2
    morse,         // V = depth ((1 - e^{-width (x - center)})^2 - 1)
    box,           // V = 0; meaningful on (0, L) with Dirichlet walls
    tabulated,     // linear interpolation of a CSV table
};

/// Named potential with parameters; `tabulated` reads source_path.
struct PotentialSpec {
    std::string name;
    PotentialFamily family = PotentialFamily::harmonic;
    std::map<std::string, double> params;
    std::string source_path;
};

PotentialFamily parse_family(const std::string& name);
std::string family_name(PotentialFamily family);

/// Potential samples plus the closed-form ground state where one is known
/// (harmonic, poschl_teller, box). Analytic ground states are sampled and
/// re-normalized on the grid.
struct ResolvedPotential {
    SampledFunction V;
    std::optional<WaveFunction> analytic_ground_state;
};

ResolvedPotential resolve_potential(const PotentialSpec& spec, const Grid& grid);

/// Ground state of the resolved potential: the analytic one when the
/// catalog provides it, otherwise compute_zero_mode.
WaveFunction ground_state_of(const ResolvedPotential& resolved, const Grid& grid);

} // namespace isospec
