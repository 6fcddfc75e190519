#include <gtest/gtest.h>

#include <random>

#include "metabs/scenario.hpp"
#include "metabs/waveform_opt.hpp"
#include "oracles.hpp"

using namespace metabs;

namespace
{

constexpr double budget = 4.0;
using Slopes = std::vector<std::vector<double>>;

double max_weight(const std::vector<double>& w)
{
    return *std::max_element(w.begin(), w.end());
}

ChannelState random_single_state(std::mt19937_64& rng, int k)
{
    std::uniform_real_distribution<double> u(0.05, 2.0);
    std::vector<complex> h(static_cast<std::size_t>(k));
    for (auto& x : h)
        x = {u(rng), u(rng) - 1.0};
    return oracle::toy_channel({h});
}

} // namespace

TEST(AvgCapacity, ZeroPowerZeroCapacity)
{
    const auto cs = oracle::small_fixtures()[1];
    EXPECT_EQ(avg_capacity(std::vector<double>(3, 0.0), cs), 0.0);
}

TEST(AvgCapacity, UnitSnrGivesOneBitPerHertz)
{
    ChannelState cs = oracle::toy_channel({{complex(1.0, 0.0)}});
    cs.subcarrier_bandwidth = 1e6;
    cs.noise_psd = 1e-6;   // N0 B = 1
    EXPECT_NEAR(avg_capacity(std::vector<double>{1.0}, cs), 1e6, 1e-6);
}

TEST(AvgCapacity, EqualStatesMatchSingleState)
{
    const std::vector<complex> h{{0.3, 0.4}, {1.0, 0.0}};
    const auto one = oracle::toy_channel({h});
    const auto two = oracle::toy_channel({h, h});
    const std::vector<double> p{0.7, 1.3};
    EXPECT_NEAR(avg_capacity(p, two), avg_capacity(p, one), 1e-12);
}

TEST(AvgCapacity, GradientMatchesCentralDifferences)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (const auto& cs : oracle::small_fixtures()) {
        std::vector<double> p(cs.n_subcarriers());
        for (auto& x : p)
            x = u(rng);
        const auto grad = avg_capacity_gradient(p, cs);
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double h = 1e-5 * p[k];
            auto up = p, dn = p;
            up[k] += h;
            dn[k] -= h;
            const double fd = (oracle::capacity(up, cs) - oracle::capacity(dn, cs)) / (2 * h);
            EXPECT_NEAR(grad[k], fd, 1e-6 * std::abs(fd));
        }
    }
}

TEST(SensingDistance, Basics)
{
    const std::vector<double> zero{0.0, 0.0};
    const std::vector<double> p{1.0, 3.0};
    const std::vector<double> w{4.0, 1.0};
    EXPECT_EQ(sensing_distance(zero, w), 0.0);
    EXPECT_EQ(sensing_distance(p, zero), 0.0);
    EXPECT_NEAR(sensing_distance(p, w), std::sqrt(7.0), 1e-15);
}

TEST(UniformReference, Basics)
{
    EXPECT_EQ(uniform_reference_distance(std::vector<double>{0.0, 0.0, 0.0}, 3.0), 0.0);
    EXPECT_NEAR(uniform_reference_distance(std::vector<double>{1.0, 1.0}, 2.0), std::sqrt(2.0), 1e-15);
}

TEST(ClassicWaterfilling, SymmetricCarriersSplitEvenly)
{
    const auto p = classic_waterfilling(Slopes{{1.0, 1.0}}, 2.0);
    EXPECT_NEAR(p.p[0], 1.0, 1e-9);
    EXPECT_NEAR(p.p[1], 1.0, 1e-9);
}

TEST(ClassicWaterfilling, DeadCarrierGetsNothing)
{
    const auto p = classic_waterfilling(Slopes{{1.0, 0.0}}, 1.0);
    EXPECT_NEAR(p.p[0], 1.0, 1e-9);
    EXPECT_EQ(p.p[1], 0.0);
}

TEST(ClassicWaterfilling, WaterLevelOfTwo)
{
    // level 2: p1 = 2 - 1, p2 = max(0, 2 - 2)
    const auto p = classic_waterfilling(Slopes{{1.0, 0.5}}, 1.0);
    EXPECT_NEAR(p.p[0], 1.0, 1e-9);
    EXPECT_NEAR(p.p[1], 0.0, 1e-9);
}

TEST(ClassicWaterfilling, AllZeroGainsAreAnError)
{
    EXPECT_THROW(classic_waterfilling(Slopes{{0.0, 0.0}}, 1.0), Error);
}

TEST(ClassicWaterfilling, MultiStateStationarity)
{
    const std::vector<std::vector<double>> g{{2.0, 0.5, 1.0}, {0.5, 1.5, 0.2}};
    const auto p = classic_waterfilling(g, 3.0);
    double sum = 0, level = -1;
    for (std::size_t k = 0; k < 3; ++k) {
        sum += p.p[k];
        const double m = 0.5 * (g[0][k] / (1 + p.p[k] * g[0][k]) + g[1][k] / (1 + p.p[k] * g[1][k]));
        if (p.p[k] > 0) {
            if (level < 0)
                level = m;
            EXPECT_NEAR(m, level, 1e-8 * level);
        }
    }
    EXPECT_NEAR(sum, 3.0, 1e-9);
}

TEST(ConstrainedAllocation, ZeroThresholdIsWaterfilling)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto cs = random_single_state(rng, 8);
        const std::vector<double> w(8, 0.0);
        const auto rep = constrained_allocation(cs, w, budget, 0.0);
        const auto ref = classic_waterfilling(cs, budget);
        EXPECT_EQ(rep.status, SolveStatus::optimal);
        EXPECT_EQ(rep.mu, 0.0);
        for (std::size_t k = 0; k < 8; ++k)
            EXPECT_NEAR(rep.allocation.p[k], ref.p[k], 1e-8 * budget);
    }
}

TEST(ConstrainedAllocation, ThresholdAtUnconstrainedOptimumIsInactive)
{
    const auto cs = oracle::small_fixtures()[2];
    const auto w = pairwise_weight_vector(cs);
    const auto free = constrained_allocation(cs, w, budget, 0.0);
    const auto tight = constrained_allocation(cs, w, budget, free.distance);
    EXPECT_EQ(tight.mu, 0.0);
    EXPECT_EQ(tight.allocation.p, free.allocation.p);
    EXPECT_GE(tight.distance, free.distance);
}

TEST(ConstrainedAllocation, MatchesSimplexGridOracle)
{
    for (const auto& cs : oracle::small_fixtures()) {
        const auto w = pairwise_weight_vector(cs);
        const double reach = std::sqrt(budget * max_weight(w));
        for (double t : {0.0, 0.4, 0.7, 0.9}) {
            const double delta = t * reach;
            const auto rep = constrained_allocation(cs, w, budget, delta);
            const auto grid = oracle::simplex_grid(cs, w, budget, delta);
            ASSERT_GT(grid.feasible_points, 0);
            ASSERT_EQ(rep.status, SolveStatus::optimal);
            EXPECT_GE(rep.capacity, grid.capacity * (1 - 1e-12));
            EXPECT_LE(rep.capacity, grid.capacity * 1.005);
            EXPECT_LE(rep.kkt_residual, 1e-6);
        }
    }
}

TEST(ConstrainedAllocation, FeasibilityInvariants)
{
    ScenarioConfig cfg;
    const auto cs = build_channel_state(cfg);
    const auto w = pairwise_weight_vector(cs);
    const double du = uniform_reference_distance(w, cfg.power_budget);
    for (double alpha : {0.0, 1.2, 1.8, 2.4}) {
        const auto rep = constrained_allocation(cs, w, cfg.power_budget, alpha * du);
        ASSERT_EQ(rep.status, SolveStatus::optimal) << "alpha " << alpha;
        double sum = 0;
        for (double x : rep.allocation.p) {
            EXPECT_GE(x, 0.0);
            sum += x;
        }
        EXPECT_LE(sum, cfg.power_budget * (1 + 1e-9));
        EXPECT_GE(rep.distance, alpha * du * (1 - 1e-6));
        EXPECT_LE(rep.kkt_residual, 1e-6);
    }
}

TEST(ConstrainedAllocation, CapacityNonIncreasingInThreshold)
{
    const auto cs = oracle::small_fixtures()[3];
    const auto w = pairwise_weight_vector(cs);
    const double reach = std::sqrt(budget * max_weight(w));
    double previous = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 20; ++i) {
        const auto rep = constrained_allocation(cs, w, budget, reach * i / 21.0);
        EXPECT_LE(rep.capacity, previous);
        previous = rep.capacity;
    }
}

TEST(ConstrainedAllocation, UnreachableThresholdIsInfeasible)
{
    const auto cs = oracle::small_fixtures()[0];
    const auto w = pairwise_weight_vector(cs);
    const double reach = std::sqrt(budget * max_weight(w));
    const auto rep = constrained_allocation(cs, w, budget, reach * 1.01);
    EXPECT_EQ(rep.status, SolveStatus::infeasible);
    EXPECT_NEAR(rep.distance, reach, 1e-12 * reach);
}

TEST(ConstrainedAllocation, RejectsBadInputs)
{
    const auto cs = oracle::small_fixtures()[0];
    const std::vector<double> w{1.0, 1.0};
    EXPECT_THROW(constrained_allocation(cs, w, 0.0, 0.0), Error);
    EXPECT_THROW(constrained_allocation(cs, w, 1.0, -1.0), Error);
    EXPECT_THROW(constrained_allocation(cs, std::vector<double>{1.0}, 1.0, 0.0), Error);
}

TEST(ConstrainedAllocation, DeterministicOnDegenerateGains)
{
    const auto cs = oracle::toy_channel({{complex(1, 0), complex(1, 0), complex(1, 0)},
                                         {complex(1, 0.1), complex(1, 0.1), complex(1, 0.1)}});
    const auto w = pairwise_weight_vector(cs);
    const auto a = constrained_allocation(cs, w, budget, 0.1);
    const auto b = constrained_allocation(cs, w, budget, 0.1);
    EXPECT_EQ(a.allocation.p, b.allocation.p);
}
