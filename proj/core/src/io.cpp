#include "isospec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "isospec/version.hpp"

namespace isospec {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_lambda(double lambda) {
    if (std::isfinite(lambda) && lambda == std::floor(lambda) && std::abs(lambda) < 1e15) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(lambda));
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", lambda);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& columns) {
    if (columns.empty()) throw IoError("write_csv: no columns");
    const std::size_t rows = columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw IoError("write_csv: ragged columns");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_csv: cannot open " + path.string());
    out << header << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out << ',';
            out << format_double(columns[c][r]);
        }
        out << '\n';
    }
    if (!out) throw IoError("write_csv: write failed for " + path.string());
}

void write_csv_complex(const std::filesystem::path& path, const std::string& header,
                       const std::vector<double>& x,
                       const std::vector<std::complex<double>>& z) {
    std::vector<double> re(z.size()), im(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        re[i] = z[i].real();
        im[i] = z[i].imag();
    }
    write_csv(path, header, {x, re, im});
}

Table read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_table: cannot open " + path.string());

    Table table;
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false; // header row
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw IoError("read_table: line " + std::to_string(lineno) + " has no comma");
        // first two columns; extra columns (complex dumps) are ignored
        std::string second = line.substr(comma + 1);
        if (const auto next = second.find(','); next != std::string::npos)
            second.resize(next);
        try {
            std::size_t used = 0;
            const double x = std::stod(line.substr(0, comma), &used);
            const double v = std::stod(second, &used);
            table.x.push_back(x);
            table.value.push_back(v);
        } catch (const std::exception&) {
            throw IoError("read_table: line " + std::to_string(lineno) + " is not numeric");
        }
    }
    if (table.x.size() < 2) throw IoError("read_table: need at least two rows");
    for (std::size_t i = 1; i < table.x.size(); ++i)
        if (!(table.x[i] > table.x[i - 1]))
            throw IoError("read_table: x column must be strictly increasing (row " +
                          std::to_string(i + 1) + ")");
    return table;
}

SampledFunction interpolate_table(const Table& table, const Grid& grid) {
    std::vector<double> v(static_cast<std::size_t>(grid.n));
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.node(i);
        const double snap = 1e-12 * std::max(1.0, std::abs(x));
        auto it = std::lower_bound(table.x.begin(), table.x.end(), x - snap);
        if (it == table.x.end())
            throw IoError("interpolate_table: grid node beyond the table range");
        const std::size_t j = static_cast<std::size_t>(it - table.x.begin());
        if (std::abs(table.x[j] - x) <= snap) {
            v[i] = table.value[j];
            continue;
        }
        if (j == 0) throw IoError("interpolate_table: grid node before the table range");
        const double t = (x - table.x[j - 1]) / (table.x[j] - table.x[j - 1]);
        v[i] = (1.0 - t) * table.value[j - 1] + t * table.value[j];
    }
    return SampledFunction(grid, std::move(v));
}

nlohmann::json to_json(const RunManifest& manifest) {
    nlohmann::json j;
    j["potential"]["name"] = manifest.spec.name;
    j["potential"]["family"] = family_name(manifest.spec.family);
    j["potential"]["params"] = manifest.spec.params;
    if (!manifest.spec.source_path.empty())
        j["potential"]["source_path"] = manifest.spec.source_path;
    j["grid"]["x_min"] = manifest.x_min;
    j["grid"]["x_max"] = manifest.x_max;
    j["grid"]["n"] = manifest.n;
    j["shift"] = manifest.shift;
    j["lambdas"] = manifest.lambdas;
    j["levels"] = manifest.levels;
    j["tolerances"]["spectrum"] = manifest.tolerances.spectrum;
    j["tolerances"]["partner"] = manifest.tolerances.partner;
    j["tolerances"]["gs_residual"] = manifest.tolerances.gs_residual;
    j["tolerances"]["norm"] = manifest.tolerances.norm;
    j["tolerances"]["scattering"] = manifest.tolerances.scattering;
    j["tolerances"]["flatness"] = manifest.tolerances.flatness;
    j["out_dir"] = manifest.out_dir;
    j["format"] = manifest.format;
    j["tool_version"] = manifest.tool_version.empty() ? kVersion : manifest.tool_version;
    j["outputs"] = manifest.outputs;
    return j;
}

RunManifest manifest_from_json(const nlohmann::json& j) {
    RunManifest m;
    try {
        const auto& pot = j.at("potential");
        m.spec.name = pot.value("name", std::string());
        m.spec.family = parse_family(pot.at("family").get<std::string>());
        if (pot.contains("params"))
            m.spec.params = pot.at("params").get<std::map<std::string, double>>();
        m.spec.source_path = pot.value("source_path", std::string());
        if (m.spec.name.empty()) m.spec.name = family_name(m.spec.family);

        const auto& grid = j.at("grid");
        m.x_min = grid.at("x_min").get<double>();
        m.x_max = grid.at("x_max").get<double>();
        m.n = grid.at("n").get<int>();

        m.shift = j.value("shift", 0.0);
        if (j.contains("lambdas")) m.lambdas = j.at("lambdas").get<std::vector<double>>();
        m.levels = j.value("levels", 5);
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            m.tolerances.spectrum = t.value("spectrum", m.tolerances.spectrum);
            m.tolerances.partner = t.value("partner", m.tolerances.partner);
            m.tolerances.gs_residual = t.value("gs_residual", m.tolerances.gs_residual);
            m.tolerances.norm = t.value("norm", m.tolerances.norm);
            m.tolerances.scattering = t.value("scattering", m.tolerances.scattering);
            m.tolerances.flatness = t.value("flatness", m.tolerances.flatness);
        }
        m.out_dir = j.value("out_dir", std::string("."));
        m.format = j.value("format", std::string("csv"));
        m.tool_version = j.value("tool_version", std::string(kVersion));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("manifest: ") + e.what());
    }
    if (m.format != "csv" && m.format != "json")
        throw IoError("manifest: format must be 'csv' or 'json'");
    return m;
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_manifest: cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("read_manifest: ") + e.what());
    }
    return manifest_from_json(j);
}

nlohmann::json to_json(const VerificationReport& report) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["potential_id"] = report.potential_id;
    j["lambdas"] = report.lambdas;
    j["spectrum_deltas"] = report.spectrum_deltas;
    j["partner_deviation"] = report.partner_deviation;
    j["gs_residual"] = report.gs_residual;
    j["norm_error"] = report.norm_error;
    auto& sc = j["scattering_deltas"] = nlohmann::json::array();
    for (const auto& per_lambda : report.scattering_deltas) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& d : per_lambda)
            row.push_back({{"k", d.k_wavenumber},
                           {"reflection_delta", d.reflection_delta},
                           {"transmission_delta", d.transmission_delta}});
        sc.push_back(row);
    }
    j["tolerances"]["spectrum"] = report.tolerances.spectrum;
    j["tolerances"]["partner"] = report.tolerances.partner;
    j["tolerances"]["gs_residual"] = report.tolerances.gs_residual;
    j["tolerances"]["norm"] = report.tolerances.norm;
    j["tolerances"]["scattering"] = report.tolerances.scattering;
    j["tolerances"]["flatness"] = report.tolerances.flatness;
    j["warnings"] = report.warnings;
    j["passed"] = report.passed;
    return j;
}

} // namespace isospec
