#ifndef METABS_WAVEFORM_OPT_HPP
#define METABS_WAVEFORM_OPT_HPP

/**
 * @file waveform_opt.hpp
 * @brief Subcarrier power allocation under a sensing-distance constraint.
 *
 * Maximises the state-averaged Shannon capacity
 *
 *     C(p) = (1/S) sum_s sum_k B log2(1 + p_k g_{k,s}),   g_{k,s} = |H_k(s)|^2 / (N0 B)
 *
 * subject to sum_k p_k <= P, p >= 0 and sum_k p_k w_k >= delta^2, where w is the
 * mean squared pairwise separation of the received amplitudes. The squared
 * distance is linear in p, so the problem is a concave maximisation over a
 * polytope and is solved through its two Lagrange multipliers:
 * lambda (power) and mu (sensing).
 */

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "channel_model.hpp"
#include "common.hpp"

namespace metabs
{

struct PowerAllocation
{
    std::vector<double> p;   // W per subcarrier
    double budget = 0;       // W
};

enum class SolveStatus { optimal, infeasible, fallback };

inline std::string to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::fallback: return "fallback";
    }
    return "unknown";
}

/// Multipliers are in spectral-efficiency units: bits/s/Hz per watt.
struct AllocationReport
{
    PowerAllocation allocation;
    double capacity = 0;         // bits/s
    double distance = 0;         // sqrt(sum p w)
    double psd_distance = 0;     // reported only, see psd_domain_distance
    double lambda = 0;
    double mu = 0;
    double kkt_residual = 0;
    int iterations = 0;
    SolveStatus status = SolveStatus::optimal;
};

inline double avg_capacity(std::span<const double> p, const ChannelState& cs)
{
    require(p.size() == cs.n_subcarriers(), "avg_capacity: allocation length mismatch");
    const double b = cs.subcarrier_bandwidth;
    const double scale = 1.0 / (cs.noise_psd * b);
    double total = 0;
    for (const auto& h : cs.gains)
        for (std::size_t k = 0; k < p.size(); ++k)
            total += std::log1p(p[k] * std::norm(h[k]) * scale);
    return b * total / (std::numbers::ln2 * static_cast<double>(cs.n_states()));
}

/// dC/dp_k in bits/s per watt.
inline std::vector<double> avg_capacity_gradient(std::span<const double> p, const ChannelState& cs)
{
    require(p.size() == cs.n_subcarriers(), "avg_capacity_gradient: allocation length mismatch");
    const double b = cs.subcarrier_bandwidth;
    const double scale = 1.0 / (cs.noise_psd * b);
    std::vector<double> grad(p.size(), 0.0);
    for (const auto& h : cs.gains)
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double g = std::norm(h[k]) * scale;
            grad[k] += g / (1.0 + p[k] * g);
        }
    const double factor = b / (std::numbers::ln2 * static_cast<double>(cs.n_states()));
    for (double& x : grad)
        x *= factor;
    return grad;
}

inline double sensing_distance(std::span<const double> p, std::span<const double> w)
{
    require(p.size() == w.size(), "sensing_distance: length mismatch");
    double sq = 0;
    for (std::size_t k = 0; k < p.size(); ++k)
        sq += p[k] * w[k];
    return std::sqrt(std::max(sq, 0.0));
}

inline double uniform_reference_distance(std::span<const double> w, double budget)
{
    require(!w.empty(), "uniform_reference_distance: need at least one subcarrier");
    const std::vector<double> p(w.size(), budget / static_cast<double>(w.size()));
    return sensing_distance(p, w);
}

/// Root-mean pairwise separation of the noiseless received PSDs, sum_k (p_k (|H_k(i)|^2 - |H_k(j)|^2))^2.
inline double psd_domain_distance(std::span<const double> p, const ChannelState& cs)
{
    const std::size_t n = cs.n_states();
    if (n < 2)
        return 0;
    double total = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = 0; k < p.size(); ++k) {
                const double d = p[k] * (std::norm(cs.gains[i][k]) - std::norm(cs.gains[j][k]));
                total += d * d;
            }
    return std::sqrt(2.0 * total / (static_cast<double>(n) * static_cast<double>(n - 1)));
}

namespace detail
{

/// SNR slopes laid out per subcarrier: slopes[k][s].
inline std::vector<std::vector<double>> carrier_major_slopes(const ChannelState& cs)
{
    const auto by_state = cs.snr_slopes();
    std::vector<std::vector<double>> out(cs.n_subcarriers(), std::vector<double>(cs.n_states()));
    for (std::size_t s = 0; s < by_state.size(); ++s)
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k][s] = by_state[s][k];
    return out;
}

/// Marginal spectral efficiency (bits/s/Hz/W) of one subcarrier at power p.
inline double marginal(std::span<const double> slopes, double p)
{
    double acc = 0;
    for (double g : slopes)
        acc += g / (1.0 + p * g);
    return acc / (std::numbers::ln2 * static_cast<double>(slopes.size()));
}

/**
 * Power at which the marginal efficiency of one subcarrier falls to target.
 *
 * The marginal m(p) is positive and decreasing; 1/m(p) is increasing and
 * concave (a scaled harmonic mean of affine functions), so Newton on 1/m
 * started from p = 0 moves monotonically up to the root and is exact when
 * S = 1. Returns infinity for a non-positive target.
 */
inline double carrier_power(std::span<const double> slopes, double target)
{
    if (!(target > 0))
        return std::numeric_limits<double>::infinity();
    if (marginal(slopes, 0.0) <= target)
        return 0.0;
    const double inv_target = 1.0 / target;
    const double norm = 1.0 / (std::numbers::ln2 * static_cast<double>(slopes.size()));
    // m(p) <= 1 / (ln2 p), so the root is below this
    const double upper = 1.0 / (std::numbers::ln2 * target);
    double p = 0;
    for (int it = 0; it < 100; ++it) {
        double m = 0, dm = 0;
        for (double g : slopes) {
            const double u = 1.0 / (1.0 + p * g);
            m += g * u;
            dm -= g * g * u * u;
        }
        m *= norm;
        dm *= norm;
        const double residual = inv_target - 1.0 / m;   // >= 0 on the left of the root
        if (residual <= 0)
            break;
        const double slope = -dm / (m * m);
        double next = p + residual / slope;
        next = std::min(next, upper);
        if (next - p <= 1e-15 * std::max(next, 1e-300))
        {
            p = next;
            break;
        }
        p = next;
    }
    return p;
}

/// Separable solver for fixed multipliers; everything in bits/s/Hz per watt.
class DualSolver
{
public:
    DualSolver(const ChannelState& cs, std::span<const double> w)
        : slopes_(carrier_major_slopes(cs)), w_(w.begin(), w.end())
    {
        require(w_.size() == slopes_.size(), "weight vector length mismatch");
        w_max_ = w_.empty() ? 0.0 : *std::max_element(w_.begin(), w_.end());
    }

    std::size_t size() const { return slopes_.size(); }
    double w_max() const { return w_max_; }
    std::span<const double> weights() const { return w_; }

    double marginal_at(std::size_t k, double p) const { return marginal(slopes_[k], p); }

    void allocate(double lambda, double mu, std::vector<double>& p) const
    {
        p.resize(slopes_.size());
        for (std::size_t k = 0; k < slopes_.size(); ++k)
            p[k] = carrier_power(slopes_[k], lambda - mu * w_[k]);
    }

    double total(double lambda, double mu, std::vector<double>& p) const
    {
        allocate(lambda, mu, p);
        double sum = 0;
        for (double x : p)
            sum += x;
        return sum;
    }

    /// Largest lambda at which some subcarrier still receives power.
    double lambda_ceiling(double mu) const
    {
        double top = 0;
        for (std::size_t k = 0; k < slopes_.size(); ++k)
            top = std::max(top, marginal(slopes_[k], 0.0) + mu * w_[k]);
        return top;
    }

    /// Solves sum p(lambda) = budget for fixed mu. Returns lambda; p holds the allocation,
    /// whose sum never exceeds the budget by more than 1e-10 relative.
    double fit_budget(double mu, double budget, std::vector<double>& p) const
    {
        double hi = lambda_ceiling(mu);
        require(hi > 0, "all subcarriers have zero gain");
        double lo = hi;
        std::vector<double> scratch;
        // walk down until the budget is exceeded
        for (int it = 0; it < 2000; ++it) {
            lo *= 0.5;
            if (total(lo, mu, scratch) >= budget)
                break;
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            const double sum = total(mid, mu, scratch);
            if (sum > budget)
                lo = mid;
            else
                hi = mid;
            if (std::abs(sum - budget) <= 1e-11 * budget && sum <= budget)
                break;
        }
        total(hi, mu, p);
        return hi;
    }

    double kkt_residual(std::span<const double> p, double lambda, double mu) const
    {
        double worst = 0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double g = marginal(slopes_[k], p[k]) + mu * w_[k];
            const double r = p[k] > 0 ? std::abs(g - lambda) : std::max(0.0, g - lambda);
            worst = std::max(worst, r / lambda);
        }
        return worst;
    }

private:
    std::vector<std::vector<double>> slopes_;
    std::vector<double> w_;
    double w_max_ = 0;
};

inline double sum_of(std::span<const double> v)
{
    double s = 0;
    for (double x : v)
        s += x;
    return s;
}

} // namespace detail

/**
 * Capacity-only water-filling.
 *
 * slopes[s][k] is the SNR per watt of subcarrier k in state s. With a single
 * state this is the textbook water level; with several states every carrier
 * solves (1/S) sum_s g/(1 + p g) = lambda by bisection.
 */
inline PowerAllocation classic_waterfilling(const std::vector<std::vector<double>>& slopes,
                                            double budget)
{
    require(!slopes.empty() && !slopes.front().empty(), "classic_waterfilling: empty gains");
    require(budget > 0, "classic_waterfilling: budget must be > 0");
    const std::size_t n_states = slopes.size();
    const std::size_t n = slopes.front().size();
    double best = 0;
    for (const auto& row : slopes) {
        require(row.size() == n, "classic_waterfilling: ragged gain matrix");
        for (double g : row) {
            require(g >= 0 && std::isfinite(g), "classic_waterfilling: gains must be finite and >= 0");
            best = std::max(best, g);
        }
    }
    if (best <= 0)
        throw Error("classic_waterfilling: all gains are zero, objective is flat");

    auto stationarity = [&](std::size_t k, double p) {
        double acc = 0;
        for (std::size_t s = 0; s < n_states; ++s)
            acc += slopes[s][k] / (1.0 + p * slopes[s][k]);
        return acc / static_cast<double>(n_states);
    };

    auto carrier = [&](std::size_t k, double lambda) {
        if (n_states == 1) {
            const double g = slopes[0][k];
            return g > 0 ? std::max(0.0, 1.0 / lambda - 1.0 / g) : 0.0;
        }
        if (stationarity(k, 0.0) <= lambda)
            return 0.0;
        double lo = 0, hi = 1.0 / lambda;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            (stationarity(k, mid) > lambda ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    auto allocate = [&](double lambda) {
        std::vector<double> p(n);
        for (std::size_t k = 0; k < n; ++k)
            p[k] = carrier(k, lambda);
        return p;
    };

    // bisection on the water level 1/lambda
    double level_lo = 0;
    double level_hi = budget + 1.0 / best;
    while (detail::sum_of(allocate(1.0 / level_hi)) < budget)
        level_hi *= 2;
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (level_lo + level_hi);
        if (mid <= level_lo || mid >= level_hi)
            break;
        const double sum = detail::sum_of(allocate(1.0 / mid));
        (sum > budget ? level_hi : level_lo) = mid;
        if (sum <= budget && budget - sum <= 1e-12 * budget)
            break;
    }
    PowerAllocation out{allocate(1.0 / level_lo), budget};
    return out;
}

/// State-averaged SNR slopes of a channel, in the layout classic_waterfilling expects.
inline PowerAllocation classic_waterfilling(const ChannelState& cs, double budget)
{
    return classic_waterfilling(cs.snr_slopes(), budget);
}

namespace detail
{

inline AllocationReport finish(const ChannelState& cs, const DualSolver& solver, std::vector<double> p,
                               double budget, double lambda, double mu, int iterations,
                               SolveStatus status)
{
    AllocationReport rep;
    rep.capacity = avg_capacity(p, cs);
    rep.distance = sensing_distance(p, solver.weights());
    rep.psd_distance = psd_domain_distance(p, cs);
    rep.lambda = lambda;
    rep.mu = mu;
    rep.kkt_residual = lambda > 0 ? solver.kkt_residual(p, lambda, mu) : 0.0;
    rep.iterations = iterations;
    rep.status = status;
    rep.allocation = {std::move(p), budget};
    return rep;
}

/// All power on the subcarrier with the largest weight: the largest reachable distance.
inline std::vector<double> max_distance_allocation(std::span<const double> w, double budget)
{
    std::vector<double> p(w.size(), 0.0);
    const auto best = std::max_element(w.begin(), w.end()) - w.begin();
    p[static_cast<std::size_t>(best)] = budget;
    return p;
}

/// Projected subgradient ascent on mu; keeps the best feasible iterate.
inline AllocationReport dual_ascent(const ChannelState& cs, const DualSolver& solver, double budget,
                                    double delta, double mu0, int start_iter)
{
    const double target = delta * delta;
    std::vector<double> p;
    std::vector<double> best_p;
    double best_cap = -1, best_lambda = 0, best_mu = 0;
    double mu = mu0;
    const double scale = std::max(mu0, solver.lambda_ceiling(0.0) / std::max(solver.w_max(), 1e-300));
    int it = start_iter;
    for (int t = 1; t <= 400; ++t, ++it) {
        const double lambda = solver.fit_budget(mu, budget, p);
        const double d = sensing_distance(p, solver.weights());
        if (d * d >= target * (1 - 2e-6)) {
            const double cap = avg_capacity(p, cs);
            if (cap > best_cap) {
                best_cap = cap;
                best_p = p;
                best_lambda = lambda;
                best_mu = mu;
            }
        }
        const double step = scale / (target * std::sqrt(static_cast<double>(t)));
        mu = std::max(0.0, mu + step * (target - d * d));
    }
    if (best_cap < 0) {
        auto fallback = max_distance_allocation(solver.weights(), budget);
        return finish(cs, solver, std::move(fallback), budget, 0.0, mu, it, SolveStatus::fallback);
    }
    return finish(cs, solver, std::move(best_p), budget, best_lambda, best_mu, it,
                  SolveStatus::fallback);
}

} // namespace detail

/**
 * Capacity-maximising allocation with a minimum sensing distance delta.
 *
 * mu = 0 is tried first; if the unconstrained optimum already reaches delta
 * the constraint is inactive. Otherwise mu is doubled until the distance
 * target is met and then bisected down to a relative distance tolerance of
 * 1e-6, keeping the side that satisfies the constraint. If the distance is
 * seen to decrease in mu, or the 200-iteration cap is hit, the solve falls
 * back to dual subgradient ascent.
 */
inline AllocationReport constrained_allocation(const ChannelState& cs, std::span<const double> w,
                                               double budget, double delta)
{
    require(budget > 0 && std::isfinite(budget), "constrained_allocation: budget must be > 0");
    require(delta >= 0 && std::isfinite(delta), "constrained_allocation: delta must be >= 0");
    require(w.size() == cs.n_subcarriers(), "constrained_allocation: weight length mismatch");
    for (double x : w)
        require(x >= 0 && std::isfinite(x), "constrained_allocation: weights must be >= 0");

    const detail::DualSolver solver(cs, w);
    std::vector<double> p;
    int iterations = 1;
    const double lambda0 = solver.fit_budget(0.0, budget, p);
    const double d0 = sensing_distance(p, w);
    if (d0 >= delta)
        return detail::finish(cs, solver, std::move(p), budget, lambda0, 0.0, iterations,
                              SolveStatus::optimal);

    const double target = delta * delta;
    if (target > budget * solver.w_max()) {
        auto cert = detail::max_distance_allocation(w, budget);
        return detail::finish(cs, solver, std::move(cert), budget, 0.0, 0.0, iterations,
                              SolveStatus::infeasible);
    }

    constexpr int max_iterations = 200;
    constexpr double rel_tol = 1e-6;

    double mu_lo = 0, d_lo = d0;
    double mu_hi = lambda0 / std::max(solver.w_max(), 1e-300);
    std::vector<double> p_hi;
    double lambda_hi = solver.fit_budget(mu_hi, budget, p_hi);
    double d_hi = sensing_distance(p_hi, w);
    ++iterations;
    while (d_hi < delta) {
        if (d_hi < d_lo * (1 - 1e-9) || iterations >= max_iterations)
            return detail::dual_ascent(cs, solver, budget, delta, mu_hi, iterations);
        mu_lo = mu_hi;
        d_lo = d_hi;
        mu_hi *= 2;
        lambda_hi = solver.fit_budget(mu_hi, budget, p_hi);
        d_hi = sensing_distance(p_hi, w);
        ++iterations;
    }

    std::vector<double> p_mid;
    while (d_hi > delta * (1 + rel_tol)) {
        if (iterations >= max_iterations)
            return detail::dual_ascent(cs, solver, budget, delta, mu_hi, iterations);
        const double mu_mid = 0.5 * (mu_lo + mu_hi);
        if (mu_mid <= mu_lo || mu_mid >= mu_hi)
            break;
        const double lambda_mid = solver.fit_budget(mu_mid, budget, p_mid);
        const double d_mid = sensing_distance(p_mid, w);
        ++iterations;
        if (d_mid < d_lo * (1 - 1e-9) || d_mid > d_hi * (1 + 1e-9))
            return detail::dual_ascent(cs, solver, budget, delta, mu_hi, iterations);
        if (d_mid >= delta) {
            mu_hi = mu_mid;
            d_hi = d_mid;
            lambda_hi = lambda_mid;
            p_hi.swap(p_mid);
        } else {
            mu_lo = mu_mid;
            d_lo = d_mid;
        }
    }
    return detail::finish(cs, solver, std::move(p_hi), budget, lambda_hi, mu_hi, iterations,
                          SolveStatus::optimal);
}

} // namespace metabs

#endif
