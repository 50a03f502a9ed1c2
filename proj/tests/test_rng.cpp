#include <catch2/catch_amalgamated.hpp>

#include "leosched/rng.hpp"

#include <cmath>
#include <vector>

using leosched::rng::Stream;
using leosched::rng::substream_seed;

TEST_CASE("same seed reproduces the same sequence") {
    Stream a(42), b(42);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.bits() == b.bits());
}

TEST_CASE("labeled substreams are distinct and stable") {
    const auto w = substream_seed(7, "workload");
    const auto v = substream_seed(7, "adversary");
    REQUIRE(w != v);
    REQUIRE(w == substream_seed(7, "workload"));
    REQUIRE(substream_seed(7, "workload", 0) != substream_seed(7, "workload", 1));
}

TEST_CASE("uniform stays in [0,1)") {
    Stream s(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = s.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("below produces unbiased small integers") {
    Stream s(3);
    std::vector<int> counts(5, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(s.below(5))];
    for (int c : counts) REQUIRE(std::fabs(c / double(n) - 0.2) < 0.01);
}

TEST_CASE("poisson zero mean is always zero") {
    Stream s(5);
    for (int i = 0; i < 1000; ++i) REQUIRE(s.poisson(0.0) == 0);
}

TEST_CASE("poisson rejects negative mean") {
    Stream s(5);
    REQUIRE_THROWS_AS(s.poisson(-1.0), std::invalid_argument);
}

TEST_CASE("poisson small-mean moments") {
    Stream s(11);
    const double mean = 3.0;
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double k = static_cast<double>(s.poisson(mean));
        sum += k;
        sq += k * k;
    }
    const double m = sum / n;
    const double var = sq / n - m * m;
    REQUIRE(std::fabs(m - mean) < 0.02);
    REQUIRE(std::fabs(var - mean) < 0.1);
}

TEST_CASE("poisson large-mean moments (transformed rejection)") {
    Stream s(13);
    const double mean = 1000.0;
    const int n = 100000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double k = static_cast<double>(s.poisson(mean));
        sum += k;
        sq += k * k;
    }
    const double m = sum / n;
    const double var = sq / n - m * m;
    REQUIRE(std::fabs(m - mean) / mean < 0.001);
    REQUIRE(std::fabs(var - mean) / mean < 0.05);
}

TEST_CASE("inversion sampler is monotone in the mean for a shared uniform") {
    // The trend experiments pair sweeps by reusing the stream; a fixed
    // uniform must map to a nondecreasing count as the mean grows.
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        std::int64_t prev = 0;
        for (double mean : {0.0, 3.0, 6.0, 9.0, 12.0}) {
            Stream s(seed);
            const std::int64_t k = s.poisson(mean);
            REQUIRE(k >= prev);
            prev = k;
        }
    }
}
