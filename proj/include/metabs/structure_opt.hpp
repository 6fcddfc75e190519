#ifndef METABS_STRUCTURE_OPT_HPP
#define METABS_STRUCTURE_OPT_HPP

/**
 * @file structure_opt.hpp
 * @brief Grid search over SRR geometry with the allocation optimised inside every point.
 */

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "rng.hpp"
#include "scenario.hpp"
#include "waveform_opt.hpp"

namespace metabs
{

struct StructureEvaluation
{
    double capacity = 0;            // bits/s at the returned allocation
    double distance = 0;            // at the returned allocation
    double uniform_distance = 0;    // at p = P / K, for reference
    bool feasible = false;
    SolveStatus status = SolveStatus::optimal;
};

struct StructureReport
{
    SensorStructure best;
    double capacity = 0;
    double distance = 0;
    double uniform_distance = 0;
    bool feasible = false;
    long evaluated = 0;
};

struct BaselineReport
{
    StructureReport no_threshold;
    double random_structure = 0;        // mean capacity over the draws
    double random_feasible_fraction = 0;
    std::vector<SensorStructure> random_draws;
    double no_sensor = 0;
};

inline ScenarioConfig with_structure(ScenarioConfig scenario, const SensorStructure& structure)
{
    scenario.sensor.structure = structure;
    return scenario;
}

/**
 * Capacity of one structure under the sensing threshold. An unreachable
 * threshold is reported through feasible = false; capacity and distance then
 * describe the largest-distance allocation.
 */
inline StructureEvaluation evaluate_structure(const SensorStructure& structure,
                                              const ScenarioConfig& scenario, double delta)
{
    structure.validate();
    const ChannelState cs = build_channel_state(with_structure(scenario, structure));
    const auto w = pairwise_weight_vector(cs);
    const AllocationReport rep = constrained_allocation(cs, w, scenario.power_budget, delta);

    StructureEvaluation ev;
    ev.capacity = rep.capacity;
    ev.distance = rep.distance;
    ev.uniform_distance = uniform_reference_distance(w, scenario.power_budget);
    ev.status = rep.status;
    ev.feasible = rep.status != SolveStatus::infeasible && rep.distance >= delta * (1 - 1e-6);
    return ev;
}

/// Valid structures of the space in lexicographic (side, gap, units) order.
inline std::vector<SensorStructure> enumerate_space(const StructureSearchSpace& space,
                                                    double permittivity)
{
    space.validate();
    std::vector<SensorStructure> out;
    for (double side : space.side_values())
        for (double gap : space.gap_values())
            for (int n : space.units_per_side) {
                SensorStructure s{side, gap, n, permittivity};
                if (gap < side)
                    out.push_back(s);
            }
    return out;
}

/**
 * Exhaustive search. The first structure in lexicographic order wins ties.
 * Without any feasible point the report carries the largest-distance
 * structure and feasible = false.
 */
inline StructureReport optimize_structure(const StructureSearchSpace& space,
                                          const ScenarioConfig& scenario, double delta)
{
    const auto candidates = enumerate_space(space, scenario.sensor.structure.substrate_permittivity);
    require(!candidates.empty(), "structure search space has no valid structure");

    StructureReport best;
    StructureReport widest;
    for (const auto& s : candidates) {
        const StructureEvaluation ev = evaluate_structure(s, scenario, delta);
        ++best.evaluated;
        if (ev.feasible && (!best.feasible || ev.capacity > best.capacity)) {
            best.best = s;
            best.capacity = ev.capacity;
            best.distance = ev.distance;
            best.uniform_distance = ev.uniform_distance;
            best.feasible = true;
        }
        if (widest.evaluated == 0 || ev.distance > widest.distance) {
            widest.best = s;
            widest.capacity = ev.capacity;
            widest.distance = ev.distance;
            widest.uniform_distance = ev.uniform_distance;
            widest.evaluated = 1;
        }
    }
    if (!best.feasible) {
        widest.evaluated = best.evaluated;
        widest.feasible = false;
        return widest;
    }
    return best;
}

/// Capacity with the sensor removed, allocated by plain water-filling.
inline double no_sensor_capacity(ScenarioConfig scenario)
{
    scenario.sensor.enabled = false;
    const ChannelState cs = build_channel_state(scenario);
    const PowerAllocation p = classic_waterfilling(cs, scenario.power_budget);
    return avg_capacity(p.p, cs);
}

inline BaselineReport baselines(const ScenarioConfig& scenario, const StructureSearchSpace& space,
                                double delta, std::uint64_t seed)
{
    BaselineReport rep;
    rep.no_threshold = optimize_structure(space, scenario, 0.0);

    const auto candidates = enumerate_space(space, scenario.sensor.structure.substrate_permittivity);
    const int draws = scenario.random_draws;
    double total = 0;
    int feasible = 0;
    for (int i = 0; i < draws; ++i) {
        auto rng = make_stream(seed, 3, static_cast<std::uint64_t>(i));
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        const SensorStructure& s = candidates[pick(rng)];
        const StructureEvaluation ev = evaluate_structure(s, scenario, delta);
        total += ev.capacity;
        feasible += ev.feasible ? 1 : 0;
        rep.random_draws.push_back(s);
    }
    rep.random_structure = total / draws;
    rep.random_feasible_fraction = static_cast<double>(feasible) / draws;
    rep.no_sensor = no_sensor_capacity(scenario);
    return rep;
}

} // namespace metabs

#endif
