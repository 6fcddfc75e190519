#ifndef METABS_SCENARIO_HPP
#define METABS_SCENARIO_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "channel_model.hpp"

namespace metabs
{

enum class Constellation { qpsk, qam16 };

inline std::string to_string(Constellation c)
{
    return c == Constellation::qpsk ? "qpsk" : "16qam";
}

struct LinkParams
{
    int n_frames = 4;
    int n_trials = 10000;
    Constellation constellation = Constellation::qpsk;
    std::uint64_t rng_seed = 20240601;

    void validate() const
    {
        require(n_frames >= 1, "link.frames must be >= 1");
        require(n_trials >= 1, "link.trials must be >= 1");
        require(n_trials <= 1000000, "link.trials must be <= 1000000");
    }

    friend bool operator==(const LinkParams&, const LinkParams&) = default;
};

/// Grid of candidate structures; ranges are inclusive.
struct StructureSearchSpace
{
    double side_min = 4.0e-3;
    double side_max = 6.5e-3;
    double side_step = 0.5e-3;
    double gap_min = 0.10e-3;
    double gap_max = 0.40e-3;
    double gap_step = 0.05e-3;
    std::vector<int> units_per_side{5};

    static std::vector<double> axis(double lo, double hi, double step)
    {
        std::vector<double> v;
        const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        for (long i = 0; i <= n; ++i)
            v.push_back(lo + static_cast<double>(i) * step);
        return v;
    }

    std::vector<double> side_values() const { return axis(side_min, side_max, side_step); }
    std::vector<double> gap_values() const { return axis(gap_min, gap_max, gap_step); }

    void validate() const
    {
        require(side_min > 0 && side_max >= side_min && side_step > 0,
                "opt.side_*: need 0 < side_min <= side_max and side_step > 0");
        require(gap_min > 0 && gap_max >= gap_min && gap_step > 0,
                "opt.gap_*: need 0 < gap_min <= gap_max and gap_step > 0");
        require(!units_per_side.empty(), "opt.units: at least one value required");
        for (int n : units_per_side)
            require(n >= 1, "opt.units: values must be >= 1");
    }

    friend bool operator==(const StructureSearchSpace&, const StructureSearchSpace&) = default;
};

struct ScenarioConfig
{
    Geometry geometry;
    Band band;
    SensorSetup sensor;
    std::vector<double> humidity{0.2, 0.4, 0.6, 0.8};
    double power_budget = 0.01;    // W
    double noise_psd = 4.0e-19;    // W/Hz
    LinkParams link;
    double alpha = 1.0;
    StructureSearchSpace search;
    int random_draws = 20;

    std::vector<SensingState> states() const
    {
        std::vector<SensingState> out;
        for (std::size_t i = 0; i < humidity.size(); ++i)
            out.push_back({humidity[i], static_cast<int>(i)});
        return out;
    }

    void validate() const
    {
        geometry.validate();
        band.validate();
        sensor.validate();
        require(humidity.size() >= 2, "states.humidity: at least two sensing states required");
        std::set<double> seen;
        for (double h : humidity) {
            require(std::isfinite(h) && h >= 0 && h <= 1, "states.humidity: values must lie in [0, 1]");
            require(seen.insert(h).second, "states.humidity: duplicate state");
        }
        require(std::isfinite(power_budget) && power_budget > 0, "opt.power_budget must be > 0");
        require(std::isfinite(noise_psd) && noise_psd > 0, "opt.noise_psd must be > 0");
        link.validate();
        require(std::isfinite(alpha) && alpha >= 0, "opt.alpha must be >= 0");
        search.validate();
        require(random_draws >= 1, "opt.random_draws must be >= 1");
    }

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

inline ChannelState build_channel_state(const ScenarioConfig& scenario)
{
    scenario.validate();
    const auto states = scenario.states();
    ChannelState cs;
    cs.grid = scenario.band.grid();
    cs.noise_psd = scenario.noise_psd;
    cs.subcarrier_bandwidth = scenario.band.subcarrier_bandwidth();
    std::set<int> labels;
    for (const auto& st : states) {
        require(labels.insert(st.label).second, "duplicate sensing state label");
        cs.labels.push_back(st.label);
        cs.gains.push_back(composite_channel(scenario.geometry, scenario.sensor, st, cs.grid));
    }
    return cs;
}

} // namespace metabs

#endif
