#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "isospec/catalog.hpp"
#include "isospec/grid.hpp"
#include "isospec/verify.hpp"

namespace isospec {

// File formats: CSV with a header row, comma separators, 17 significant
// digits (lossless binary64 round trip), LF line endings. JSON reports are
// flat records with sorted keys and a version field.

/// One double formatted with up to 17 significant digits, shortest exact.
std::string format_double(double v);

/// Lambda rendered for file names: integral values without a decimal
/// point, otherwise %g.
std::string format_lambda(double lambda);

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& columns);

/// Columns x, re, im for complex-valued dumps.
void write_csv_complex(const std::filesystem::path& path, const std::string& header,
                       const std::vector<double>& x,
                       const std::vector<std::complex<double>>& z);

/// Reads a two-column `x,value` CSV. Throws IoError on a malformed or
/// non-monotone x column.
struct Table {
    std::vector<double> x;
    std::vector<double> value;
};
Table read_table(const std::filesystem::path& path);

/// Samples a table onto a grid: exact node hits take the tabulated value,
/// interior points interpolate linearly. Throws when the grid leaves the
/// table's range.
SampledFunction interpolate_table(const Table& table, const Grid& grid);

/// Full run configuration; JSON-serializable both ways.
struct RunManifest {
    PotentialSpec spec;
    double x_min = -10.0;
    double x_max = 10.0;
    int n = 2001;
    double shift = 0.0; // parent E0 removed before deforming (recorded by runs)
    std::vector<double> lambdas;
    int levels = 5;
    VerifyTolerances tolerances;
    std::string out_dir = ".";
    std::string format = "csv"; // csv | json
    std::string tool_version;
    std::vector<std::string> outputs; // emitted file paths, sorted

    Grid grid() const { return build_grid(x_min, x_max, n); }
};

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);
RunManifest read_manifest(const std::filesystem::path& path);

nlohmann::json to_json(const VerificationReport& report);

} // namespace isospec
