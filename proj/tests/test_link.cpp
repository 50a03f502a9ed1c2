#include <catch2/catch_amalgamated.hpp>

#include "leosched/link.hpp"
#include "leosched/orbit.hpp"
#include "leosched/rng.hpp"

#include <cmath>
#include <vector>

namespace link_tests {
namespace link = leosched::link;

namespace {
link::LinkConfig paper_link() {
    link::LinkConfig c;
    c.beta0 = 2e-4;
    c.tx_power_w = 5.0;
    c.noise_power_w = 1e-6;
    c.bandwidth_hz = 2e7;
    return c;
}
} // namespace

TEST_CASE("path gain inverse-square points") {
    REQUIRE(link::path_gain(1.0, 2e-4) == 2e-4);
    REQUIRE(link::path_gain(2.0, 2e-4) == Catch::Approx(5e-5).epsilon(1e-12));
    REQUIRE(link::path_gain(780.0, 2e-4) == Catch::Approx(3.2873109796186719e-10).epsilon(1e-9));
    REQUIRE_THROWS_AS(link::path_gain(0.0, 2e-4), std::invalid_argument);
}

TEST_CASE("snr is linear in gain") {
    auto cfg = paper_link();
    REQUIRE(link::snr(0.0, cfg) == 0.0);
    cfg.noise_power_w = 1e-6;
    REQUIRE(link::snr(2e-7, cfg) == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE(link::snr(3.287e-10, cfg) == Catch::Approx(1.6435e-3).epsilon(1e-9));
}

TEST_CASE("shannon rate closed-form points") {
    REQUIRE(link::shannon_rate(0.0, 2e7) == 0.0);
    REQUIRE(link::shannon_rate(1.0, 2e7) == Catch::Approx(2e7).epsilon(1e-12));
    REQUIRE(link::shannon_rate(3.0, 2e7) == Catch::Approx(4e7).epsilon(1e-12));
}

TEST_CASE("bpsk ber endpoints and reference point") {
    REQUIRE(link::bpsk_ber(0.0) == Catch::Approx(0.5).epsilon(1e-12));
    REQUIRE(link::bpsk_ber(1.0) == Catch::Approx(0.07864960352514257).epsilon(1e-9));
    REQUIRE(link::bpsk_ber(1e6) == 0.0); // underflow at the asymptote
    double prev = link::bpsk_ber(0.0);
    for (double s = 0.1; s < 20.0; s += 0.1) {
        const double b = link::bpsk_ber(s);
        REQUIRE(b < prev);
        prev = b;
    }
}

TEST_CASE("task success probability") {
    REQUIRE(link::task_success_prob(0.3, 1e8, false, false) == 1.0);
    REQUIRE(link::task_success_prob(0.0, 1e8, true, true) == 1.0);
    REQUIRE(link::task_success_prob(0.1, 1e3, true, false) == 0.0);
    REQUIRE(link::task_success_prob(1e-9, 1e8, true, true) ==
            Catch::Approx(0.9048374179907177).epsilon(1e-9));
}

TEST_CASE("log-domain success equals direct power for small sizes") {
    leosched::rng::Stream s(17);
    for (int i = 0; i < 300; ++i) {
        const double ber = s.uniform() * 0.5;
        const double d = 1.0 + std::floor(s.uniform() * 1e4);
        const double direct = std::pow(1.0 - ber, d);
        REQUIRE(link::task_success_prob(ber, d, true, true) ==
                Catch::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("period success probability is a product, permutation invariant") {
    REQUIRE(link::period_success_prob({}) == 1.0);
    const std::vector<double> ones{1.0, 1.0, 1.0};
    REQUIRE(link::period_success_prob(ones) == 1.0);
    const std::vector<double> two{0.9, 0.9};
    REQUIRE(link::period_success_prob(two) == Catch::Approx(0.81).epsilon(1e-12));

    leosched::rng::Stream s(23);
    std::vector<double> probs;
    for (int i = 0; i < 8; ++i) probs.push_back(s.uniform());
    const double base = link::period_success_prob(probs);
    for (int trial = 0; trial < 20; ++trial) {
        s.shuffle(probs);
        REQUIRE(link::period_success_prob(probs) == Catch::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("channel chain degrades with slant range") {
    auto cfg = paper_link();
    double prev_ber = 0.0;
    for (double g = 0.0; g <= 60.0; g += 2.0) {
        const double range = leosched::orbit::slant_range(g, 6371.0, 780.0);
        const link::LinkMetrics m = link::metrics_for_range_km(range, cfg);
        REQUIRE(m.ber >= prev_ber);
        REQUIRE(m.rate_bps > 0.0);
        prev_ber = m.ber;
    }
}

TEST_CASE("meter-scale gain formula via range_scale") {
    auto cfg = paper_link();
    cfg.range_scale = 1000.0;
    const link::LinkMetrics km = link::metrics_for_range_km(780.0, paper_link());
    const link::LinkMetrics m = link::metrics_for_range_km(780.0, cfg);
    REQUIRE(m.gain == Catch::Approx(km.gain / 1e6).epsilon(1e-12));
}

} // namespace link_tests
