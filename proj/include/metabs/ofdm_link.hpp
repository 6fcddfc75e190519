#ifndef METABS_OFDM_LINK_HPP
#define METABS_OFDM_LINK_HPP

/**
 * @file ofdm_link.hpp
 * @brief Symbol-level Monte-Carlo link: frame-averaged PSD sensing and genie-aided demodulation.
 *
 * On subcarrier k of frame m the receiver sees
 *
 *     y = sqrt(p_k) x H_k(s) + n,   n ~ CN(0, N0 B)
 *
 * with random unit-power data symbols x. The sensing path only knows the
 * allocation, so it averages |y|^2 / B over M frames and matches the result
 * against the expected PSD of every sensing state.
 */

#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "channel_model.hpp"
#include "rng.hpp"
#include "scenario.hpp"

namespace metabs
{

struct PsdEstimate
{
    std::vector<double> s_hat;   // W/Hz
};

struct AccuracyReport
{
    double accuracy = 0;
    double half_width = 0;   // binomial 95%
    long correct = 0;
    long trials = 0;
    std::vector<std::vector<long>> confusion;   // [true][decided]
};

struct SerReport
{
    double ser = 0;
    long errors = 0;
    long symbols = 0;
};

namespace detail
{

inline constexpr double inv_sqrt2 = 0.70710678118654752440;
inline constexpr std::array<double, 4> qam16_levels{-3.0, -1.0, 1.0, 3.0};
inline const double qam16_scale = 1.0 / std::sqrt(10.0);

template <class Rng>
complex draw_symbol(Constellation c, Rng& rng)
{
    const std::uint64_t bits = rng();
    if (c == Constellation::qpsk)
        return {(bits & 1) ? inv_sqrt2 : -inv_sqrt2, (bits & 2) ? inv_sqrt2 : -inv_sqrt2};
    return {qam16_levels[bits & 3] * qam16_scale, qam16_levels[(bits >> 2) & 3] * qam16_scale};
}

inline double slice_16qam_axis(double v)
{
    const double x = v / qam16_scale;
    if (x < -2)
        return -3 * qam16_scale;
    if (x < 0)
        return -1 * qam16_scale;
    if (x < 2)
        return 1 * qam16_scale;
    return 3 * qam16_scale;
}

inline complex hard_decision(Constellation c, complex z)
{
    if (c == Constellation::qpsk)
        return {z.real() >= 0 ? inv_sqrt2 : -inv_sqrt2, z.imag() >= 0 ? inv_sqrt2 : -inv_sqrt2};
    return {slice_16qam_axis(z.real()), slice_16qam_axis(z.imag())};
}

inline std::size_t state_index(const ChannelState& cs, int label)
{
    for (std::size_t s = 0; s < cs.labels.size(); ++s)
        if (cs.labels[s] == label)
            return s;
    throw Error("unknown sensing state label " + std::to_string(label));
}

inline constexpr std::uint64_t sensing_stream = 1;
inline constexpr std::uint64_t ser_stream = 2;

} // namespace detail

template <class Rng>
PsdEstimate simulate_received_psd(std::span<const double> p, const ChannelState& cs, int true_state,
                                  const LinkParams& link, Rng& rng)
{
    require(p.size() == cs.n_subcarriers(), "simulate_received_psd: allocation length mismatch");
    const auto& h = cs.gains[detail::state_index(cs, true_state)];
    const double b = cs.subcarrier_bandwidth;
    const double sigma = std::sqrt(cs.noise_psd * b / 2.0);   // per real component
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<complex> faded(p.size());
    for (std::size_t k = 0; k < p.size(); ++k)
        faded[k] = std::sqrt(p[k]) * h[k];

    PsdEstimate est{std::vector<double>(p.size(), 0.0)};
    for (int m = 0; m < link.n_frames; ++m)
        for (std::size_t k = 0; k < p.size(); ++k) {
            complex y = faded[k] * detail::draw_symbol(link.constellation, rng);
            if (sigma > 0)
                y += complex(sigma * noise(rng), sigma * noise(rng));
            est.s_hat[k] += std::norm(y);
        }
    const double scale = 1.0 / (static_cast<double>(link.n_frames) * b);
    for (double& v : est.s_hat)
        v *= scale;
    return est;
}

/// Expected received PSD per state, in label order of the channel state.
inline std::vector<std::vector<double>> state_templates(std::span<const double> p, const ChannelState& cs)
{
    require(p.size() == cs.n_subcarriers(), "state_templates: allocation length mismatch");
    std::vector<std::vector<double>> t(cs.n_states(), std::vector<double>(p.size()));
    for (std::size_t s = 0; s < cs.n_states(); ++s)
        for (std::size_t k = 0; k < p.size(); ++k)
            t[s][k] = p[k] * std::norm(cs.gains[s][k]) / cs.subcarrier_bandwidth + cs.noise_psd;
    return t;
}

/// Index of the nearest template in squared Euclidean distance; ties go to the lowest index.
inline std::size_t classify_state(std::span<const double> s_hat,
                                  const std::vector<std::vector<double>>& templates)
{
    require(!templates.empty(), "classify_state: no templates");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < templates.size(); ++s) {
        require(templates[s].size() == s_hat.size(), "classify_state: template length mismatch");
        double d = 0;
        for (std::size_t k = 0; k < s_hat.size(); ++k) {
            const double e = s_hat[k] - templates[s][k];
            d += e * e;
        }
        if (d < best_d) {
            best_d = d;
            best = s;
        }
    }
    return best;
}

/// Label-returning form over a channel state's templates.
inline int classify_state(const PsdEstimate& est, const std::vector<std::vector<double>>& templates,
                          const ChannelState& cs)
{
    return cs.labels[classify_state(est.s_hat, templates)];
}

inline double binomial_half_width(double rate, long n)
{
    return 1.96 * std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
}

/**
 * Monte-Carlo sensing accuracy. Trial t draws its true state and all of its
 * noise from its own stream of the link seed, so any partition of the trials
 * gives the same counts.
 */
inline AccuracyReport sensing_accuracy(const ChannelState& cs, std::span<const double> p,
                                       const LinkParams& link)
{
    link.validate();
    const std::size_t n_states = cs.n_states();
    require(n_states >= 2, "sensing_accuracy: at least two sensing states required");
    const auto templates = state_templates(p, cs);

    AccuracyReport rep;
    rep.confusion.assign(n_states, std::vector<long>(n_states, 0));
    for (long t = 0; t < link.n_trials; ++t) {
        auto rng = make_stream(link.rng_seed, detail::sensing_stream, static_cast<std::uint64_t>(t));
        std::uniform_int_distribution<std::size_t> pick(0, n_states - 1);
        const std::size_t truth = pick(rng);
        const auto est = simulate_received_psd(p, cs, cs.labels[truth], link, rng);
        const std::size_t decided = classify_state(est.s_hat, templates);
        ++rep.confusion[truth][decided];
        if (decided == truth)
            ++rep.correct;
    }
    rep.trials = link.n_trials;
    rep.accuracy = static_cast<double>(rep.correct) / static_cast<double>(rep.trials);
    rep.half_width = binomial_half_width(rep.accuracy, rep.trials);
    return rep;
}

inline AccuracyReport sensing_accuracy(const ScenarioConfig& scenario, std::span<const double> p,
                                       const LinkParams& link)
{
    return sensing_accuracy(build_channel_state(scenario), p, link);
}

/**
 * Symbol error rate after ideal one-tap equalisation, over link.n_trials OFDM
 * frames. Only subcarriers with p_k > 0 are counted.
 */
inline SerReport genie_symbol_error_rate(std::span<const double> p, const ChannelState& cs, int state,
                                         const LinkParams& link)
{
    link.validate();
    require(p.size() == cs.n_subcarriers(), "genie_symbol_error_rate: allocation length mismatch");
    const auto& h = cs.gains[detail::state_index(cs, state)];
    const double sigma = std::sqrt(cs.noise_psd * cs.subcarrier_bandwidth / 2.0);

    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k] > 0)
            active.push_back(k);
    require(!active.empty(), "genie_symbol_error_rate: no subcarrier carries power");

    SerReport rep;
    for (long t = 0; t < link.n_trials; ++t) {
        auto rng = make_stream(link.rng_seed, detail::ser_stream, static_cast<std::uint64_t>(t));
        std::normal_distribution<double> noise(0.0, 1.0);
        for (std::size_t k : active) {
            const complex tap = std::sqrt(p[k]) * h[k];
            const complex x = detail::draw_symbol(link.constellation, rng);
            complex y = tap * x;
            if (sigma > 0)
                y += complex(sigma * noise(rng), sigma * noise(rng));
            if (detail::hard_decision(link.constellation, y / tap) != x)
                ++rep.errors;
            ++rep.symbols;
        }
    }
    rep.ser = static_cast<double>(rep.errors) / static_cast<double>(rep.symbols);
    return rep;
}

} // namespace metabs

#endif
