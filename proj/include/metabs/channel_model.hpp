#ifndef METABS_CHANNEL_MODEL_HPP
#define METABS_CHANNEL_MODEL_HPP

/**
 * @file channel_model.hpp
 * @brief Two-path free-space channel: line of sight plus the sensor reflection.
 */

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "common.hpp"
#include "sensor_model.hpp"

namespace metabs
{

using Position = std::array<double, 3>;

inline double distance(const Position& a, const Position& b)
{
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct Geometry
{
    Position tx_pos{0.0, 0.0, 0.0};
    Position rx_pos{10.0, 0.0, 0.0};
    Position sensor_pos{5.0, 0.5072, 0.0};

    double los_distance() const { return distance(tx_pos, rx_pos); }
    double tx_sensor_distance() const { return distance(tx_pos, sensor_pos); }
    double sensor_rx_distance() const { return distance(sensor_pos, rx_pos); }

    void validate() const
    {
        for (const auto* p : {&tx_pos, &rx_pos, &sensor_pos})
            for (double c : *p)
                require(std::isfinite(c), "geometry: positions must be finite");
        // far-field guard
        require(los_distance() > 0.1, "geometry.rx: tx-rx distance must exceed 0.1 m");
        require(tx_sensor_distance() > 0.1, "geometry.sensor: tx-sensor distance must exceed 0.1 m");
        require(sensor_rx_distance() > 0.1, "geometry.sensor: sensor-rx distance must exceed 0.1 m");
    }

    friend bool operator==(const Geometry&, const Geometry&) = default;
};

struct Band
{
    double f_low = 5.6e9;
    double f_high = 6.1e9;
    int n_subcarriers = 512;

    double subcarrier_bandwidth() const { return (f_high - f_low) / n_subcarriers; }

    /// Subcarrier centres, uniformly spaced, each in the middle of its slot.
    std::vector<double> grid() const
    {
        std::vector<double> g(static_cast<std::size_t>(n_subcarriers));
        const double spacing = subcarrier_bandwidth();
        for (int k = 0; k < n_subcarriers; ++k)
            g[static_cast<std::size_t>(k)] = f_low + (k + 0.5) * spacing;
        return g;
    }

    void validate() const
    {
        require(std::isfinite(f_low) && f_low > 0, "band.f_low must be > 0");
        require(std::isfinite(f_high) && f_low < f_high, "band.f_low must be below band.f_high");
        require(n_subcarriers >= 2, "band.subcarriers must be >= 2");
        require(n_subcarriers <= 4096, "band.subcarriers must be <= 4096");
    }

    friend bool operator==(const Band&, const Band&) = default;
};

/// Everything about the reflector the channel needs besides the sensing state.
struct SensorSetup
{
    SensorStructure structure;
    MaterialParams material;
    CalibrationConstants calibration;
    double g_unit = 2.5;      // m, per-unit re-radiation aperture
    bool enabled = true;

    double aperture_gain() const
    {
        const double n = structure.units_per_side;
        return g_unit * n * n;
    }

    void validate() const
    {
        structure.validate();
        material.validate();
        calibration.validate();
        require(std::isfinite(g_unit) && g_unit > 0, "sensor.g_unit must be > 0");
    }

    friend bool operator==(const SensorSetup&, const SensorSetup&) = default;
};

/// Per-subcarrier gains for every sensing state on a shared grid.
struct ChannelState
{
    std::vector<double> grid;
    std::vector<int> labels;
    std::vector<std::vector<complex>> gains;   // gains[s][k], s follows labels
    double noise_psd = 0;                      // W/Hz
    double subcarrier_bandwidth = 0;           // Hz

    std::size_t n_states() const { return gains.size(); }
    std::size_t n_subcarriers() const { return grid.size(); }

    const std::vector<complex>& gains_for(int label) const
    {
        for (std::size_t s = 0; s < labels.size(); ++s)
            if (labels[s] == label)
                return gains[s];
        throw Error("unknown sensing state label " + std::to_string(label));
    }

    /// |H_k(s)|^2 / (N0 B), the per-subcarrier SNR per watt.
    std::vector<std::vector<double>> snr_slopes() const
    {
        std::vector<std::vector<double>> g(n_states(), std::vector<double>(n_subcarriers()));
        const double scale = 1.0 / (noise_psd * subcarrier_bandwidth);
        for (std::size_t s = 0; s < n_states(); ++s)
            for (std::size_t k = 0; k < n_subcarriers(); ++k)
                g[s][k] = std::norm(gains[s][k]) * scale;
        return g;
    }
};

/// Friis amplitude with propagation phase: (c / (4 pi d f)) exp(-j 2 pi f d / c).
inline complex freespace_segment(double d, double f)
{
    const double amplitude = speed_of_light / (4.0 * pi * d * f);
    // reduce the cycle count first so the phase stays accurate for long paths
    const double cycles = f * d / speed_of_light;
    const double frac = cycles - std::floor(cycles);
    return std::polar(amplitude, -2.0 * pi * frac);
}

inline std::vector<complex> los_channel(const Geometry& geom, std::span<const double> grid)
{
    const double d_los = geom.los_distance();
    std::vector<complex> h;
    h.reserve(grid.size());
    for (double f : grid)
        h.push_back(freespace_segment(d_los, f));
    return h;
}

/// Gains for one sensing state on an arbitrary grid.
inline std::vector<complex> composite_channel(const Geometry& geom, const SensorSetup& sensor,
                                              const SensingState& state,
                                              std::span<const double> grid)
{
    geom.validate();
    sensor.validate();
    validate_grid(grid);

    std::vector<complex> h = los_channel(geom, grid);
    if (!sensor.enabled)
        return h;

    const ResonatorParams res =
        structure_to_circuit(sensor.structure, state, sensor.material, sensor.calibration);
    const double d1 = geom.tx_sensor_distance();
    const double d2 = geom.sensor_rx_distance();
    const double gain = sensor.aperture_gain();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double f = grid[k];
        h[k] += gain * reflection_coefficient(res, f) * freespace_segment(d1, f) *
                freespace_segment(d2, f);
    }
    return h;
}

inline std::vector<complex> composite_channel(const Geometry& geom, const SensorSetup& sensor,
                                              const SensingState& state, const Band& band)
{
    band.validate();
    const auto grid = band.grid();
    return composite_channel(geom, sensor, state, grid);
}

/// Mean squared per-subcarrier separation over unordered state pairs.
inline std::vector<double> pairwise_weight_vector(const ChannelState& cs)
{
    const std::size_t n_states = cs.n_states();
    require(n_states >= 2, "weight vector needs at least two sensing states");
    std::vector<double> w(cs.n_subcarriers(), 0.0);
    for (std::size_t i = 0; i < n_states; ++i)
        for (std::size_t j = i + 1; j < n_states; ++j)
            for (std::size_t k = 0; k < w.size(); ++k)
                w[k] += std::norm(cs.gains[i][k] - cs.gains[j][k]);
    const double scale = 2.0 / (static_cast<double>(n_states) * static_cast<double>(n_states - 1));
    for (double& x : w)
        x *= scale;
    return w;
}

} // namespace metabs

#endif
