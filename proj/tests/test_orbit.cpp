#include <catch2/catch_amalgamated.hpp>

#include "leosched/orbit.hpp"

#include <cmath>

namespace orbit = leosched::orbit;

namespace {
orbit::ConstellationConfig paper_constellation() {
    orbit::ConstellationConfig c;
    c.satellite_count = 12;
    c.earth_radius_km = 6371.0;
    c.orbit_altitude_km = 780.0;
    c.angular_spacing_deg = 4.0;
    c.angular_velocity_deg_s = 2e-4;
    c.visibility_bound_deg = 10.0;
    return c;
}

double circle_distance(double a, double b) {
    return std::fabs(orbit::normalize_angle_deg(a - b));
}
} // namespace

TEST_CASE("normalize wraps to (-180, 180]") {
    REQUIRE(orbit::normalize_angle_deg(180.0) == 180.0);
    REQUIRE(orbit::normalize_angle_deg(-180.0) == 180.0);
    REQUIRE(orbit::normalize_angle_deg(190.0) == Catch::Approx(-170.0));
    REQUIRE(orbit::normalize_angle_deg(540.0) == 180.0);
    REQUIRE(orbit::normalize_angle_deg(-180.1) == Catch::Approx(179.9));
}

TEST_CASE("advance: zero step leaves angles unchanged") {
    auto cfg = paper_constellation();
    auto states = orbit::initial_states(cfg);
    auto moved = orbit::advance(cfg, states, 0.0);
    for (std::size_t j = 0; j < states.size(); ++j)
        REQUIRE(moved[j].gamma_deg == states[j].gamma_deg);
}

TEST_CASE("advance: linear clockwise motion") {
    auto cfg = paper_constellation();
    orbit::SatelliteState s;
    s.gamma_deg = 0.0;
    auto moved = orbit::advance(cfg, {s}, 10000.0);
    REQUIRE(moved[0].gamma_deg == Catch::Approx(-2.0));
}

TEST_CASE("advance: wrap at the antimeridian") {
    // -179.9 deg moving clockwise by 0.2 deg lands at +179.9: the unwrapped
    // angle -180.1 re-enters the principal interval from the other side.
    auto cfg = paper_constellation();
    orbit::SatelliteState s;
    s.gamma_deg = -179.9;
    auto moved = orbit::advance(cfg, {s}, 1000.0);
    REQUIRE(moved[0].gamma_deg == Catch::Approx(179.9));
}

TEST_CASE("advance rejects negative dt") {
    auto cfg = paper_constellation();
    REQUIRE_THROWS_AS(orbit::advance(cfg, {}, -1.0), std::invalid_argument);
}

TEST_CASE("slant range closed-form points") {
    REQUIRE(orbit::slant_range(0.0, 6371.0, 780.0) == Catch::Approx(780.0).epsilon(1e-12));
    REQUIRE(orbit::slant_range(180.0, 6371.0, 780.0) == Catch::Approx(13522.0).epsilon(1e-12));
    // high-precision evaluation of the cosine rule at 10 degrees
    REQUIRE(orbit::slant_range(10.0, 6371.0, 780.0) ==
            Catch::Approx(1411.6259416389313).epsilon(1e-9));
}

TEST_CASE("visibility is strict at the cone boundary") {
    auto cfg = paper_constellation();
    REQUIRE(orbit::is_visible(0.0, cfg));
    REQUIRE(orbit::is_visible(-9.99, cfg));
    REQUIRE_FALSE(orbit::is_visible(10.0, cfg));
    REQUIRE_FALSE(orbit::is_visible(-10.0, cfg));
}

TEST_CASE("slant range: even, monotone in |gamma|, bounded") {
    const double r = 6371.0, h = 780.0;
    double prev = orbit::slant_range(0.0, r, h);
    for (double g = 1.0; g <= 180.0; g += 1.0) {
        const double s = orbit::slant_range(g, r, h);
        REQUIRE(s == orbit::slant_range(-g, r, h));
        REQUIRE(s > prev);
        REQUIRE(s >= h);
        REQUIRE(s <= 2.0 * r + h + 1e-9);
        prev = s;
    }
}

TEST_CASE("advance composes over dt and preserves spacing") {
    auto cfg = paper_constellation();
    auto states = orbit::initial_states(cfg);
    auto one = orbit::advance(cfg, orbit::advance(cfg, states, 1234.5), 7777.25);
    auto two = orbit::advance(cfg, states, 1234.5 + 7777.25);
    for (std::size_t j = 0; j < states.size(); ++j)
        REQUIRE(circle_distance(one[j].gamma_deg, two[j].gamma_deg) < 1e-9);
    for (std::size_t j = 1; j < one.size(); ++j) {
        const double gap = circle_distance(one[j].gamma_deg, one[j - 1].gamma_deg);
        REQUIRE(gap == Catch::Approx(cfg.angular_spacing_deg).margin(1e-9));
    }
}

TEST_CASE("initial states are centered and evenly spaced") {
    auto cfg = paper_constellation();
    auto states = orbit::initial_states(cfg);
    REQUIRE(states.size() == 12);
    REQUIRE(states.front().gamma_deg == Catch::Approx(-22.0));
    REQUIRE(states.back().gamma_deg == Catch::Approx(22.0));
    int visible = 0;
    for (const auto& s : states)
        if (orbit::is_visible(s, cfg)) ++visible;
    REQUIRE(visible == 4); // +-6 and +-2 degrees with a 10-degree cone
}
