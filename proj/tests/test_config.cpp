#include <gtest/gtest.h>

#include "metabs/config.hpp"

using namespace metabs;

namespace
{

std::string error_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(ParseConfig, EmptyTextGivesDefaults)
{
    const auto cfg = parse_config("");
    EXPECT_EQ(cfg.band.f_low, 5.6e9);
    EXPECT_EQ(cfg.band.f_high, 6.1e9);
    EXPECT_EQ(cfg.band.n_subcarriers, 512);
    EXPECT_EQ(cfg.humidity, (std::vector<double>{0.2, 0.4, 0.6, 0.8}));
    EXPECT_EQ(cfg, ScenarioConfig{});
}

TEST(ParseConfig, ReadsSectionsCommentsAndLists)
{
    const auto cfg = parse_config(R"(# scenario
[band]
f_low = 5.7e9   # narrower
subcarriers = 64

[states]
humidity = 0.1, 0.9

[link]
constellation = 16qam
seed = 18446744073709551615

[geometry]
sensor = 4, 1.5, 0.25
)");
    EXPECT_EQ(cfg.band.f_low, 5.7e9);
    EXPECT_EQ(cfg.band.n_subcarriers, 64);
    EXPECT_EQ(cfg.humidity, (std::vector<double>{0.1, 0.9}));
    EXPECT_EQ(cfg.link.constellation, Constellation::qam16);
    EXPECT_EQ(cfg.link.rng_seed, 18446744073709551615ULL);
    EXPECT_EQ(cfg.geometry.sensor_pos, (Position{4, 1.5, 0.25}));
}

TEST(ParseConfig, InvertedBandNamesKey)
{
    EXPECT_NE(error_of("[band]\nf_low = 6.2e9\n").find("band.f_low"), std::string::npos);
}

TEST(ParseConfig, ErrorsCarryKeyPaths)
{
    EXPECT_NE(error_of("[band]\nsubcarriers =\n").find("band.subcarriers"), std::string::npos);
    EXPECT_NE(error_of("[band]\nbogus = 1\n").find("band.bogus"), std::string::npos);
    EXPECT_NE(error_of("[states]\nhumidity = 0.2, 0.2\n").find("states.humidity"), std::string::npos);
    EXPECT_NE(error_of("[states]\nhumidity = 1.5, 0.2\n").find("states.humidity"), std::string::npos);
    EXPECT_NE(error_of("[link]\ntrials = 2000000\n").find("link.trials"), std::string::npos);
    EXPECT_NE(error_of("[band]\nsubcarriers = 5000\n").find("band.subcarriers"), std::string::npos);
    EXPECT_NE(error_of("[opt]\npower_budget = abc\n").find("opt.power_budget"), std::string::npos);
    EXPECT_NE(error_of("[band]\nf_low = 1\nf_low = 2\n").find("band.f_low"), std::string::npos);
    EXPECT_FALSE(error_of("[nowhere]\n").empty());
    EXPECT_FALSE(error_of("f_low = 1\n").empty());
    EXPECT_FALSE(error_of("[band]\njust words\n").empty());
}

TEST(SerializeConfig, RoundTripsDefaultsAndEdits)
{
    ScenarioConfig cfg;
    EXPECT_EQ(parse_config(serialize_config(cfg)), cfg);

    cfg.geometry.sensor_pos = {3.3, 0.1 + 0.2, -0.7};
    cfg.band.n_subcarriers = 100;
    cfg.sensor.enabled = false;
    cfg.sensor.structure.gap_width = 1.0 / 3.0 * 1e-3;
    cfg.humidity = {0.05, 0.55, 0.95};
    cfg.link.constellation = Constellation::qam16;
    cfg.search.units_per_side = {2, 4, 8};
    cfg.alpha = 1.7;
    const auto text = serialize_config(cfg);
    EXPECT_EQ(parse_config(text), cfg);
    EXPECT_EQ(serialize_config(parse_config(text)), text);
}
