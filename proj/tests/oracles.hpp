// Independent reference computations used by the unit and acceptance suites.
// Nothing here calls into the solver paths it is used to check.

#ifndef METABS_TESTS_ORACLES_HPP
#define METABS_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "metabs/channel_model.hpp"

namespace oracle
{

/// Shannon capacity written out directly from the channel gains.
inline double capacity(const std::vector<double>& p, const metabs::ChannelState& cs)
{
    double total = 0;
    for (const auto& h : cs.gains)
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double snr = p[k] * std::norm(h[k]) / (cs.noise_psd * cs.subcarrier_bandwidth);
            total += cs.subcarrier_bandwidth * std::log2(1.0 + snr);
        }
    return total / static_cast<double>(cs.gains.size());
}

struct GridOptimum
{
    double capacity = -1;
    std::vector<double> p;
    long feasible_points = 0;
};

/**
 * Exhaustive search over allocations p = (n_1, ..., n_K) * budget / steps with
 * sum n = steps, keeping those with sum p w >= delta^2.
 */
inline GridOptimum simplex_grid(const metabs::ChannelState& cs, const std::vector<double>& w, double budget,
                                double delta, int steps = 200)
{
    const std::size_t n = w.size();
    GridOptimum best;
    std::vector<int> parts(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int left) {
        if (idx + 1 == n) {
            parts[idx] = left;
            std::vector<double> p(n);
            double sq = 0;
            for (std::size_t k = 0; k < n; ++k) {
                p[k] = budget * parts[k] / steps;
                sq += p[k] * w[k];
            }
            if (sq < delta * delta)
                return;
            ++best.feasible_points;
            const double c = capacity(p, cs);
            if (c > best.capacity) {
                best.capacity = c;
                best.p = p;
            }
            return;
        }
        for (int v = 0; v <= left; ++v) {
            parts[idx] = v;
            rec(idx + 1, left - v);
        }
    };
    rec(0, steps);
    return best;
}

inline double qfunc(double x)
{
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

/// Exact QPSK symbol error rate at Es/N0 = snr with Gray-labelled quadrants.
inline double qpsk_ser(double snr)
{
    const double q = qfunc(std::sqrt(snr));
    return 2 * q - q * q;
}

/// Small two- or more-state channel with unit noise and unit bandwidth, so that
/// the SNR slope of each subcarrier equals |H|^2.
inline metabs::ChannelState toy_channel(std::vector<std::vector<std::complex<double>>> gains)
{
    metabs::ChannelState cs;
    const std::size_t k = gains.front().size();
    for (std::size_t i = 0; i < k; ++i)
        cs.grid.push_back(1.0 + static_cast<double>(i));
    for (std::size_t s = 0; s < gains.size(); ++s)
        cs.labels.push_back(static_cast<int>(s));
    cs.gains = std::move(gains);
    cs.noise_psd = 1.0;
    cs.subcarrier_bandwidth = 1.0;
    return cs;
}

/// The K <= 4 fixtures shared by the solver tests and the acceptance suite.
inline std::vector<metabs::ChannelState> small_fixtures()
{
    using c = std::complex<double>;
    return {
        toy_channel({{c(1.0, 0.0), c(0.6, 0.2)}, {c(0.9, 0.1), c(0.2, 0.1)}}),
        toy_channel({{c(2.0, 0.0), c(1.0, 0.5), c(0.3, 0.0)}, {c(1.9, 0.0), c(0.5, 0.2), c(0.8, 0.1)}}),
        toy_channel({{c(1.5, 0.2), c(1.2, 0.0), c(0.7, 0.3), c(0.4, 0.0)},
                     {c(1.4, 0.2), c(1.0, 0.4), c(0.2, 0.1), c(1.1, 0.0)}}),
        toy_channel({{c(0.8, 0.0), c(1.1, 0.0), c(1.3, 0.0), c(0.5, 0.5)},
                     {c(0.8, 0.1), c(0.9, 0.0), c(1.0, 0.6), c(0.5, 0.4)},
                     {c(0.7, 0.0), c(1.2, 0.3), c(1.3, 0.1), c(0.1, 0.2)}}),
    };
}

} // namespace oracle

#endif
