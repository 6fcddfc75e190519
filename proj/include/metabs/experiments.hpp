#ifndef METABS_EXPERIMENTS_HPP
#define METABS_EXPERIMENTS_HPP

/**
 * @file experiments.hpp
 * @brief Threshold and sensor-size sweeps, and their CSV output.
 */

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "ofdm_link.hpp"
#include "scenario.hpp"
#include "structure_opt.hpp"
#include "waveform_opt.hpp"

namespace metabs
{

inline constexpr double not_measured = std::numeric_limits<double>::quiet_NaN();

struct ResultRow
{
    std::string experiment;
    std::string variable;
    double value = 0;
    double capacity = not_measured;      // bits/s
    double distance = not_measured;
    double accuracy = not_measured;
    double accuracy_half_width = not_measured;
    std::string status;
    std::uint64_t seed = 0;
};

/**
 * One row per alpha, in input order: delta = alpha * D_uniform, constrained
 * allocation, then Monte-Carlo accuracy with the configured link. Every row
 * reuses the link seed so neighbouring rows share their random numbers.
 * An unreachable delta gives an infeasible row with capacity and accuracy
 * left unmeasured and the largest reachable distance.
 */
inline std::vector<ResultRow> run_delta_sweep(const ScenarioConfig& cfg, const std::vector<double>& alphas)
{
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        require(alphas[i] >= 0 && std::isfinite(alphas[i]), "alpha values must be >= 0");
        if (i)
            require(alphas[i] >= alphas[i - 1], "alpha values must be sorted");
    }
    const ChannelState cs = build_channel_state(cfg);
    const auto w = pairwise_weight_vector(cs);
    const double d_uniform = uniform_reference_distance(w, cfg.power_budget);

    std::vector<ResultRow> rows;
    for (double alpha : alphas) {
        const AllocationReport rep = constrained_allocation(cs, w, cfg.power_budget, alpha * d_uniform);
        ResultRow row{"sweep-delta", "alpha", alpha};
        row.status = to_string(rep.status);
        row.seed = cfg.link.rng_seed;
        row.distance = rep.distance;
        if (rep.status != SolveStatus::infeasible) {
            row.capacity = rep.capacity;
            const AccuracyReport acc = sensing_accuracy(cs, rep.allocation.p, cfg.link);
            row.accuracy = acc.accuracy;
            row.accuracy_half_width = acc.half_width;
        }
        rows.push_back(row);
    }
    return rows;
}

/// Threshold for a size sweep point: alpha times the uniform-allocation
/// distance of the configured structure scaled to N units per side.
inline double size_threshold(const ScenarioConfig& cfg, int units, double alpha)
{
    ScenarioConfig c = cfg;
    c.sensor.structure.units_per_side = units;
    const ChannelState cs = build_channel_state(c);
    return alpha * uniform_reference_distance(pairwise_weight_vector(cs), cfg.power_budget);
}

/**
 * Four capacity series per N: proposed (threshold-constrained structure
 * search), no_threshold, random_structure and no_sensor. The search covers
 * the configured side/gap grid with the unit count fixed to N.
 */
inline std::vector<ResultRow> run_size_sweep(const ScenarioConfig& cfg, const std::vector<int>& sizes,
                                             double alpha)
{
    require(alpha >= 0 && std::isfinite(alpha), "alpha must be >= 0");
    for (int n : sizes)
        require(n >= 1, "sizes must be >= 1");
    cfg.validate();

    const double no_sensor = no_sensor_capacity(cfg);
    std::vector<ResultRow> rows;
    for (int n : sizes) {
        ScenarioConfig c = cfg;
        c.sensor.structure.units_per_side = n;
        StructureSearchSpace space = cfg.search;
        space.units_per_side = {n};
        const double delta = size_threshold(cfg, n, alpha);

        const StructureReport proposed = optimize_structure(space, c, delta);
        const BaselineReport base = baselines(c, space, delta, cfg.link.rng_seed);

        auto row = [&](const char* series, double capacity, double distance, const char* status) {
            ResultRow r{std::string("sweep-size/") + series, "units_per_side", static_cast<double>(n)};
            r.capacity = capacity;
            r.distance = distance;
            r.status = status;
            r.seed = cfg.link.rng_seed;
            return r;
        };
        rows.push_back(row("proposed", proposed.capacity, proposed.distance,
                           proposed.feasible ? "optimal" : "infeasible"));
        rows.push_back(row("no_threshold", base.no_threshold.capacity, base.no_threshold.distance,
                           "optimal"));
        rows.push_back(row("random_structure", base.random_structure, not_measured, "optimal"));
        rows.push_back(row("no_sensor", no_sensor, 0.0, "optimal"));
    }
    return rows;
}

namespace detail
{

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

} // namespace detail

inline constexpr const char* csv_header =
    "experiment,variable,value,capacity_bps,distance,accuracy,accuracy_half_width,status,seed";

/// RFC 4180 layout with CRLF line ends; reals printed with 17 significant digits.
inline void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out)
{
    require(!rows.empty(), "emit_csv: no rows");
    using detail::format_real;
    out << csv_header << "\r\n";
    for (const auto& r : rows)
        out << detail::csv_field(r.experiment) << ',' << detail::csv_field(r.variable) << ','
            << format_real(r.value) << ',' << format_real(r.capacity) << ','
            << format_real(r.distance) << ',' << format_real(r.accuracy) << ','
            << format_real(r.accuracy_half_width) << ',' << detail::csv_field(r.status) << ','
            << r.seed << "\r\n";
}

inline void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& destination)
{
    require(!rows.empty(), "emit_csv: no rows");
    std::ofstream file(destination, std::ios::binary | std::ios::trunc);
    if (!file)
        throw Error("cannot open " + destination.string() + " for writing");
    emit_csv(rows, file);
    file.flush();
    if (!file)
        throw Error("write failed for " + destination.string());
}

} // namespace metabs

#endif
