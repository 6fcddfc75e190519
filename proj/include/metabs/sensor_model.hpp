#ifndef METABS_SENSOR_MODEL_HPP
#define METABS_SENSOR_MODEL_HPP

/**
 * @file sensor_model.hpp
 * @brief Split-ring-resonator humidity sensor as a frequency-selective reflector.
 *
 * The SRR array is reduced to a series RLC surrogate. Geometry sets the
 * inductance and gap capacitance, the humidity-dependent resistance of the
 * gap filling sets the Q-factor and the depth of the absorption dip. The
 * reflection coefficient is a complex Lorentzian dip centred on f0.
 */

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "common.hpp"

namespace metabs
{

struct SensorStructure
{
    double side_length = 5.0e-3;   // m
    double gap_width = 0.25e-3;    // m
    int units_per_side = 5;
    double substrate_permittivity = 3.5;

    void validate() const
    {
        require(std::isfinite(side_length) && side_length > 0, "sensor.side_length must be > 0");
        require(std::isfinite(gap_width) && gap_width > 0 && gap_width < side_length,
                "sensor.gap_width must satisfy 0 < gap_width < side_length");
        require(units_per_side >= 1, "sensor.units_per_side must be >= 1");
        require(std::isfinite(substrate_permittivity) && substrate_permittivity >= 1,
                "sensor.permittivity must be >= 1");
    }

    friend bool operator==(const SensorStructure&, const SensorStructure&) = default;
};

/// Humidity-sensitive gap filling: R(h) = r_max * exp(-decay_rate * h).
struct MaterialParams
{
    double r_max = 30.0;      // ohm, dry state
    double decay_rate = 1.5;
    double r_rad = 12.0;      // ohm, radiation / matching resistance

    void validate() const
    {
        require(std::isfinite(r_max) && r_max > 0, "sensor.r_max must be > 0");
        require(std::isfinite(decay_rate) && decay_rate > 0, "sensor.decay_rate must be > 0");
        require(std::isfinite(r_rad) && r_rad > 0, "sensor.r_rad must be > 0");
    }

    friend bool operator==(const MaterialParams&, const MaterialParams&) = default;
};

/// Scale factors of the equivalent circuit. L = k_l * side, C = k_c * eps_r * side / gap.
/// The defaults put the 5 mm / 0.25 mm / eps_r 3.5 cell at 5.85 GHz.
struct CalibrationConstants
{
    double k_l = 2.0e-5;        // H/m
    double k_c = 1.0573785e-16; // F

    void validate() const
    {
        require(std::isfinite(k_l) && k_l > 0, "sensor.k_l must be > 0");
        require(std::isfinite(k_c) && k_c > 0, "sensor.k_c must be > 0");
    }

    friend bool operator==(const CalibrationConstants&, const CalibrationConstants&) = default;
};

struct SensingState
{
    double humidity = 0.0;
    int label = 0;

    void validate() const
    {
        require(std::isfinite(humidity) && humidity >= 0 && humidity <= 1,
                "states.humidity values must lie in [0, 1]");
        require(label >= 0, "state label must be non-negative");
    }
};

struct ResonatorParams
{
    double f0 = 0;        // Hz
    double q_factor = 0;
    double depth = 0;     // in [0, 1]
};

struct FrequencyResponse
{
    std::vector<double> grid;
    std::vector<complex> gamma;
};

struct SensitivityMetrics
{
    double resonance_shift = 0;          // Hz
    double mean_pairwise_distance = 0;
};

inline double material_resistance(const SensingState& state, const MaterialParams& mat)
{
    return mat.r_max * std::exp(-mat.decay_rate * state.humidity);
}

inline ResonatorParams structure_to_circuit(const SensorStructure& structure,
                                            const SensingState& state,
                                            const MaterialParams& mat,
                                            const CalibrationConstants& cal)
{
    structure.validate();
    state.validate();
    mat.validate();
    cal.validate();

    const double inductance = cal.k_l * structure.side_length;
    const double capacitance = cal.k_c * structure.substrate_permittivity *
                               structure.side_length / structure.gap_width;
    const double resistance = material_resistance(state, mat);

    ResonatorParams res;
    res.f0 = 1.0 / (2.0 * pi * std::sqrt(inductance * capacitance));
    res.q_factor = std::sqrt(inductance / capacitance) / resistance;
    const double sum = resistance + mat.r_rad;
    res.depth = 4.0 * resistance * mat.r_rad / (sum * sum);
    // rounding can push a perfect match a hair above one
    res.depth = std::clamp(res.depth, 0.0, 1.0);

    if (!std::isfinite(res.f0) || !std::isfinite(res.q_factor) || !std::isfinite(res.depth) ||
        res.f0 <= 0 || res.q_factor <= 0)
        throw Error("degenerate sensor geometry: non-finite resonator parameters");
    return res;
}

/// Lorentzian absorption dip: 1 - A / (1 + 2jQ (f - f0) / f0).
inline complex reflection_coefficient(const ResonatorParams& res, double f)
{
    const double detuning = 2.0 * res.q_factor * (f - res.f0) / res.f0;
    return 1.0 - res.depth / complex(1.0, detuning);
}

inline void validate_grid(std::span<const double> grid)
{
    require(!grid.empty(), "frequency grid must not be empty");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        require(std::isfinite(grid[k]) && grid[k] > 0, "frequency grid values must be > 0");
        if (k > 0)
            require(grid[k] > grid[k - 1], "frequency grid must be strictly increasing");
    }
}

inline FrequencyResponse frequency_response(const SensorStructure& structure,
                                            const SensingState& state,
                                            const MaterialParams& mat,
                                            const CalibrationConstants& cal,
                                            std::span<const double> grid)
{
    validate_grid(grid);
    const ResonatorParams res = structure_to_circuit(structure, state, mat, cal);
    FrequencyResponse out;
    out.grid.assign(grid.begin(), grid.end());
    out.gamma.reserve(grid.size());
    for (double f : grid)
        out.gamma.push_back(reflection_coefficient(res, f));
    return out;
}

/// Index of the deepest sampled point of the dip.
inline std::size_t dip_index(const FrequencyResponse& r)
{
    require(!r.gamma.empty(), "empty frequency response");
    std::size_t best = 0;
    for (std::size_t k = 1; k < r.gamma.size(); ++k)
        if (std::abs(r.gamma[k]) < std::abs(r.gamma[best]))
            best = k;
    return best;
}

inline SensitivityMetrics sensitivity_metrics(std::span<const FrequencyResponse> responses)
{
    require(responses.size() >= 2, "sensitivity metrics need at least two responses");
    const auto& grid = responses.front().grid;
    for (const auto& r : responses) {
        require(r.grid == grid, "sensitivity metrics: responses sampled on different grids");
        require(r.gamma.size() == grid.size(), "sensitivity metrics: gamma/grid length mismatch");
    }

    double f_min = grid[dip_index(responses.front())];
    double f_max = f_min;
    for (const auto& r : responses) {
        const double f = grid[dip_index(r)];
        f_min = std::min(f_min, f);
        f_max = std::max(f_max, f);
    }

    double total = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < responses.size(); ++i)
        for (std::size_t j = i + 1; j < responses.size(); ++j) {
            double sq = 0;
            for (std::size_t k = 0; k < grid.size(); ++k)
                sq += std::norm(responses[i].gamma[k] - responses[j].gamma[k]);
            total += std::sqrt(sq);
            ++pairs;
        }

    return {f_max - f_min, total / static_cast<double>(pairs)};
}

} // namespace metabs

#endif
