#ifndef METABS_CONFIG_HPP
#define METABS_CONFIG_HPP

/**
 * @file config.hpp
 * @brief Sectioned key = value scenario files.
 *
 * '#' starts a comment, blank lines are ignored, sections are [geometry],
 * [band], [sensor], [states], [link] and [opt]. Every key is optional and
 * falls back to the ScenarioConfig default; unknown sections or keys,
 * repeated keys and empty values are errors. Lists are comma separated.
 */

#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scenario.hpp"

namespace metabs
{

namespace detail
{

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_list(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

inline double parse_real(std::string_view text, const std::string& key)
{
    double v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        throw Error(key + ": expected a number, got '" + std::string(text) + "'");
    return v;
}

template <class Int>
Int parse_int(std::string_view text, const std::string& key)
{
    Int v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        throw Error(key + ": expected an integer, got '" + std::string(text) + "'");
    return v;
}

inline bool parse_bool(std::string_view text, const std::string& key)
{
    if (text == "true")
        return true;
    if (text == "false")
        return false;
    throw Error(key + ": expected true or false, got '" + std::string(text) + "'");
}

inline Position parse_position(std::string_view text, const std::string& key)
{
    const auto parts = split_list(text);
    if (parts.size() != 3)
        throw Error(key + ": expected three comma-separated coordinates");
    return {parse_real(parts[0], key), parse_real(parts[1], key), parse_real(parts[2], key)};
}

inline std::vector<double> parse_real_list(std::string_view text, const std::string& key)
{
    std::vector<double> out;
    for (auto part : split_list(text))
        out.push_back(parse_real(part, key));
    return out;
}

inline std::vector<int> parse_int_list(std::string_view text, const std::string& key)
{
    std::vector<int> out;
    for (auto part : split_list(text))
        out.push_back(parse_int<int>(part, key));
    return out;
}

inline std::string format_real(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& values, F&& fmt)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ", ";
        out += fmt(values[i]);
    }
    return out;
}

inline std::string format_position(const Position& p)
{
    return format_real(p[0]) + ", " + format_real(p[1]) + ", " + format_real(p[2]);
}

using Setter = std::function<void(ScenarioConfig&, std::string_view, const std::string&)>;

inline const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"geometry.tx", [](auto& c, auto v, auto& k) { c.geometry.tx_pos = parse_position(v, k); }},
        {"geometry.rx", [](auto& c, auto v, auto& k) { c.geometry.rx_pos = parse_position(v, k); }},
        {"geometry.sensor", [](auto& c, auto v, auto& k) { c.geometry.sensor_pos = parse_position(v, k); }},
        {"band.f_low", [](auto& c, auto v, auto& k) { c.band.f_low = parse_real(v, k); }},
        {"band.f_high", [](auto& c, auto v, auto& k) { c.band.f_high = parse_real(v, k); }},
        {"band.subcarriers", [](auto& c, auto v, auto& k) { c.band.n_subcarriers = parse_int<int>(v, k); }},
        {"sensor.enabled", [](auto& c, auto v, auto& k) { c.sensor.enabled = parse_bool(v, k); }},
        {"sensor.side_length", [](auto& c, auto v, auto& k) { c.sensor.structure.side_length = parse_real(v, k); }},
        {"sensor.gap_width", [](auto& c, auto v, auto& k) { c.sensor.structure.gap_width = parse_real(v, k); }},
        {"sensor.units_per_side", [](auto& c, auto v, auto& k) { c.sensor.structure.units_per_side = parse_int<int>(v, k); }},
        {"sensor.permittivity", [](auto& c, auto v, auto& k) { c.sensor.structure.substrate_permittivity = parse_real(v, k); }},
        {"sensor.r_max", [](auto& c, auto v, auto& k) { c.sensor.material.r_max = parse_real(v, k); }},
        {"sensor.decay_rate", [](auto& c, auto v, auto& k) { c.sensor.material.decay_rate = parse_real(v, k); }},
        {"sensor.r_rad", [](auto& c, auto v, auto& k) { c.sensor.material.r_rad = parse_real(v, k); }},
        {"sensor.k_l", [](auto& c, auto v, auto& k) { c.sensor.calibration.k_l = parse_real(v, k); }},
        {"sensor.k_c", [](auto& c, auto v, auto& k) { c.sensor.calibration.k_c = parse_real(v, k); }},
        {"sensor.g_unit", [](auto& c, auto v, auto& k) { c.sensor.g_unit = parse_real(v, k); }},
        {"states.humidity", [](auto& c, auto v, auto& k) { c.humidity = parse_real_list(v, k); }},
        {"link.frames", [](auto& c, auto v, auto& k) { c.link.n_frames = parse_int<int>(v, k); }},
        {"link.trials", [](auto& c, auto v, auto& k) { c.link.n_trials = parse_int<int>(v, k); }},
        {"link.constellation", [](auto& c, auto v, auto& k) {
             if (v == "qpsk")
                 c.link.constellation = Constellation::qpsk;
             else if (v == "16qam")
                 c.link.constellation = Constellation::qam16;
             else
                 throw Error(k + ": expected qpsk or 16qam, got '" + std::string(v) + "'");
         }},
        {"link.seed", [](auto& c, auto v, auto& k) { c.link.rng_seed = parse_int<std::uint64_t>(v, k); }},
        {"opt.power_budget", [](auto& c, auto v, auto& k) { c.power_budget = parse_real(v, k); }},
        {"opt.noise_psd", [](auto& c, auto v, auto& k) { c.noise_psd = parse_real(v, k); }},
        {"opt.alpha", [](auto& c, auto v, auto& k) { c.alpha = parse_real(v, k); }},
        {"opt.side_min", [](auto& c, auto v, auto& k) { c.search.side_min = parse_real(v, k); }},
        {"opt.side_max", [](auto& c, auto v, auto& k) { c.search.side_max = parse_real(v, k); }},
        {"opt.side_step", [](auto& c, auto v, auto& k) { c.search.side_step = parse_real(v, k); }},
        {"opt.gap_min", [](auto& c, auto v, auto& k) { c.search.gap_min = parse_real(v, k); }},
        {"opt.gap_max", [](auto& c, auto v, auto& k) { c.search.gap_max = parse_real(v, k); }},
        {"opt.gap_step", [](auto& c, auto v, auto& k) { c.search.gap_step = parse_real(v, k); }},
        {"opt.units", [](auto& c, auto v, auto& k) { c.search.units_per_side = parse_int_list(v, k); }},
        {"opt.random_draws", [](auto& c, auto v, auto& k) { c.random_draws = parse_int<int>(v, k); }},
    };
    return table;
}

} // namespace detail

inline ScenarioConfig parse_config(std::string_view text)
{
    ScenarioConfig cfg;
    std::string section;
    std::set<std::string> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;

        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']')
                throw Error(where + "malformed section header");
            section = std::string(detail::trim(line.substr(1, line.size() - 2)));
            static const std::set<std::string> known{"geometry", "band", "sensor", "states", "link", "opt"};
            if (!known.count(section))
                throw Error(where + "unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(where + "expected key = value");
        if (section.empty())
            throw Error(where + "key outside of any section");
        const std::string key = section + "." + std::string(detail::trim(line.substr(0, eq)));
        const std::string_view value = detail::trim(line.substr(eq + 1));

        const auto& table = detail::setters();
        const auto it = table.find(key);
        if (it == table.end())
            throw Error(key + ": unknown key");
        if (!seen.insert(key).second)
            throw Error(key + ": key given more than once");
        if (value.empty())
            throw Error(key + ": missing value");
        it->second(cfg, value, key);
    }
    cfg.validate();
    return cfg;
}

/// Writes every key; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const ScenarioConfig& c)
{
    using detail::format_position;
    using detail::format_real;
    std::ostringstream out;
    out << "[geometry]\n"
        << "tx = " << format_position(c.geometry.tx_pos) << "\n"
        << "rx = " << format_position(c.geometry.rx_pos) << "\n"
        << "sensor = " << format_position(c.geometry.sensor_pos) << "\n\n"
        << "[band]\n"
        << "f_low = " << format_real(c.band.f_low) << "\n"
        << "f_high = " << format_real(c.band.f_high) << "\n"
        << "subcarriers = " << c.band.n_subcarriers << "\n\n"
        << "[sensor]\n"
        << "enabled = " << (c.sensor.enabled ? "true" : "false") << "\n"
        << "side_length = " << format_real(c.sensor.structure.side_length) << "\n"
        << "gap_width = " << format_real(c.sensor.structure.gap_width) << "\n"
        << "units_per_side = " << c.sensor.structure.units_per_side << "\n"
        << "permittivity = " << format_real(c.sensor.structure.substrate_permittivity) << "\n"
        << "r_max = " << format_real(c.sensor.material.r_max) << "\n"
        << "decay_rate = " << format_real(c.sensor.material.decay_rate) << "\n"
        << "r_rad = " << format_real(c.sensor.material.r_rad) << "\n"
        << "k_l = " << format_real(c.sensor.calibration.k_l) << "\n"
        << "k_c = " << format_real(c.sensor.calibration.k_c) << "\n"
        << "g_unit = " << format_real(c.sensor.g_unit) << "\n\n"
        << "[states]\n"
        << "humidity = " << detail::join(c.humidity, format_real) << "\n\n"
        << "[link]\n"
        << "frames = " << c.link.n_frames << "\n"
        << "trials = " << c.link.n_trials << "\n"
        << "constellation = " << to_string(c.link.constellation) << "\n"
        << "seed = " << c.link.rng_seed << "\n\n"
        << "[opt]\n"
        << "power_budget = " << format_real(c.power_budget) << "\n"
        << "noise_psd = " << format_real(c.noise_psd) << "\n"
        << "alpha = " << format_real(c.alpha) << "\n"
        << "side_min = " << format_real(c.search.side_min) << "\n"
        << "side_max = " << format_real(c.search.side_max) << "\n"
        << "side_step = " << format_real(c.search.side_step) << "\n"
        << "gap_min = " << format_real(c.search.gap_min) << "\n"
        << "gap_max = " << format_real(c.search.gap_max) << "\n"
        << "gap_step = " << format_real(c.search.gap_step) << "\n"
        << "units = " << detail::join(c.search.units_per_side, [](int n) { return std::to_string(n); }) << "\n"
        << "random_draws = " << c.random_draws << "\n";
    return out.str();
}

} // namespace metabs

#endif
