// Command-line front end: runs one experiment from a scenario file and writes CSV.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "metabs/metabs.hpp"

namespace
{

using namespace metabs;

struct Options
{
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::string alpha;
    std::string sizes;
    std::string frames;
};

ScenarioConfig load(const Options& opt)
{
    ScenarioConfig cfg;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path, std::ios::binary);
        if (!in)
            throw Error("cannot read config " + opt.config_path);
        std::ostringstream text;
        text << in.rdbuf();
        cfg = parse_config(text.str());
    }
    if (opt.seed)
        cfg.link.rng_seed = *opt.seed;
    cfg.validate();
    return cfg;
}

std::vector<double> real_list(const std::string& text, const char* flag)
{
    std::vector<double> out;
    for (auto part : detail::split_list(text))
        out.push_back(detail::parse_real(part, flag));
    return out;
}

std::vector<int> int_list(const std::string& text, const char* flag)
{
    return detail::parse_int_list(text, flag);
}

void write(const std::vector<ResultRow>& rows, const Options& opt)
{
    if (opt.out_path.empty())
        emit_csv(rows, std::cout);
    else
        emit_csv(rows, std::filesystem::path(opt.out_path));
}

/// Human-readable notes go to stderr when the CSV occupies stdout.
std::ostream& notes(const Options& opt)
{
    return opt.out_path.empty() ? std::cerr : std::cout;
}

void run_simulate(const Options& opt)
{
    const ScenarioConfig cfg = load(opt);
    const ChannelState cs = build_channel_state(cfg);
    const auto w = pairwise_weight_vector(cs);
    const double d_uniform = uniform_reference_distance(w, cfg.power_budget);

    std::vector<FrequencyResponse> responses;
    for (const auto& st : cfg.states())
        responses.push_back(frequency_response(cfg.sensor.structure, st, cfg.sensor.material,
                                               cfg.sensor.calibration, cs.grid));
    const SensitivityMetrics sens = sensitivity_metrics(responses);
    const ResonatorParams res = structure_to_circuit(cfg.sensor.structure, cfg.states().front(),
                                                     cfg.sensor.material, cfg.sensor.calibration);

    std::vector<ResultRow> rows;
    for (double alpha : {0.0, cfg.alpha}) {
        const AllocationReport rep = constrained_allocation(cs, w, cfg.power_budget, alpha * d_uniform);
        ResultRow row{alpha == 0.0 ? "simulate/waterfilling" : "simulate/constrained", "alpha", alpha};
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
    write(rows, opt);

    auto& out = notes(opt);
    out << "f0 (state 0): " << res.f0 << " Hz, Q " << res.q_factor << ", depth " << res.depth << "\n"
        << "uniform-allocation distance: " << d_uniform << "\n"
        << "mean pairwise response distance: " << sens.mean_pairwise_distance
        << ", resonance shift: " << sens.resonance_shift << " Hz\n"
        << "no-sensor capacity: " << no_sensor_capacity(cfg) << " bit/s\n";
}

void run_sweep_delta(const Options& opt)
{
    const ScenarioConfig cfg = load(opt);
    const auto alphas = real_list(opt.alpha.empty() ? "0,0.5,1,1.5,2" : opt.alpha, "--alpha");
    write(run_delta_sweep(cfg, alphas), opt);
}

double single_alpha(const Options& opt, const ScenarioConfig& cfg)
{
    if (opt.alpha.empty())
        return cfg.alpha;
    const auto values = real_list(opt.alpha, "--alpha");
    if (values.size() != 1)
        throw Error("--alpha: this command takes a single value");
    return values.front();
}

void run_sweep_size(const Options& opt)
{
    const ScenarioConfig cfg = load(opt);
    const auto sizes = int_list(opt.sizes.empty() ? "1,2,3,4,5,6,7,8,9,10" : opt.sizes, "--sizes");
    write(run_size_sweep(cfg, sizes, single_alpha(opt, cfg)), opt);
}

void run_optimize_structure(const Options& opt)
{
    const ScenarioConfig cfg = load(opt);
    const double alpha = single_alpha(opt, cfg);
    const auto sizes = opt.sizes.empty() ? cfg.search.units_per_side : int_list(opt.sizes, "--sizes");

    std::vector<ResultRow> rows;
    auto& out = notes(opt);
    for (int n : sizes) {
        require(n >= 1, "--sizes: values must be >= 1");
        ScenarioConfig c = cfg;
        c.sensor.structure.units_per_side = n;
        StructureSearchSpace space = cfg.search;
        space.units_per_side = {n};
        const double delta = size_threshold(cfg, n, alpha);
        const StructureReport rep = optimize_structure(space, c, delta);

        ResultRow row{"optimize-structure", "units_per_side", static_cast<double>(n)};
        row.capacity = rep.feasible ? rep.capacity : not_measured;
        row.distance = rep.distance;
        row.status = rep.feasible ? "optimal" : "infeasible";
        row.seed = cfg.link.rng_seed;
        rows.push_back(row);
        out << "N=" << n << ": side " << rep.best.side_length << " m, gap " << rep.best.gap_width
            << " m, delta " << delta << ", " << rep.evaluated << " structures evaluated"
            << (rep.feasible ? "" : " (no feasible structure)") << "\n";
    }
    write(rows, opt);
}

void run_accuracy(const Options& opt)
{
    const ScenarioConfig cfg = load(opt);
    const ChannelState cs = build_channel_state(cfg);
    const auto w = pairwise_weight_vector(cs);
    const double delta = cfg.alpha * uniform_reference_distance(w, cfg.power_budget);
    const AllocationReport rep = constrained_allocation(cs, w, cfg.power_budget, delta);
    if (rep.status == SolveStatus::infeasible)
        throw Error("opt.alpha: sensing threshold is unreachable with this budget");

    const auto frames = opt.frames.empty() ? std::vector<int>{cfg.link.n_frames}
                                           : int_list(opt.frames, "--frames");
    std::vector<ResultRow> rows;
    for (int m : frames) {
        LinkParams link = cfg.link;
        link.n_frames = m;
        const AccuracyReport acc = sensing_accuracy(cs, rep.allocation.p, link);
        ResultRow row{"accuracy", "frames", static_cast<double>(m)};
        row.capacity = rep.capacity;
        row.distance = rep.distance;
        row.accuracy = acc.accuracy;
        row.accuracy_half_width = acc.half_width;
        row.status = to_string(rep.status);
        row.seed = link.rng_seed;
        rows.push_back(row);
    }
    write(rows, opt);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Meta-material backscatter sensing and communication simulator"};
    app.require_subcommand(1);
    Options opt;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "Scenario file (defaults apply when omitted)");
        sub->add_option("--out", opt.out_path, "CSV destination (stdout when omitted)");
        sub->add_option("--seed", opt.seed, "Override link.seed");
    };

    auto* simulate = app.add_subcommand("simulate", "Single-scenario report");
    common(simulate);
    auto* sweep_delta = app.add_subcommand("sweep-delta", "Capacity and accuracy versus threshold factor");
    common(sweep_delta);
    sweep_delta->add_option("--alpha", opt.alpha, "Comma-separated threshold factors");
    auto* sweep_size = app.add_subcommand("sweep-size", "Capacity versus sensor size with baselines");
    common(sweep_size);
    sweep_size->add_option("--sizes", opt.sizes, "Comma-separated units-per-side values");
    sweep_size->add_option("--alpha", opt.alpha, "Threshold factor (default opt.alpha)");
    auto* optimize = app.add_subcommand("optimize-structure", "Structure search under the threshold");
    common(optimize);
    optimize->add_option("--sizes", opt.sizes, "Units-per-side values (default opt.units)");
    optimize->add_option("--alpha", opt.alpha, "Threshold factor (default opt.alpha)");
    auto* accuracy = app.add_subcommand("accuracy", "Detector-only Monte Carlo");
    common(accuracy);
    accuracy->add_option("--frames", opt.frames, "Comma-separated frame counts");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            run_simulate(opt);
        else if (sweep_delta->parsed())
            run_sweep_delta(opt);
        else if (sweep_size->parsed())
            run_sweep_size(opt);
        else if (optimize->parsed())
            run_optimize_structure(opt);
        else if (accuracy->parsed())
            run_accuracy(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
