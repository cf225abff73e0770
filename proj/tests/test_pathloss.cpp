#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mmwsim/pathloss.hpp"
#include "mmwsim/rng.hpp"

using namespace mmwsim;
using Catch::Matchers::WithinAbs;

TEST_CASE("path loss at the reference distance equals the intercept") {
    const PathLossParams params{72.0, 2.92};
    REQUIRE_THAT(path_loss(params, 1.0), WithinAbs(72.0, 1e-9));
}

TEST_CASE("path loss at 100 m with default parameters") {
    const PathLossParams params{72.0, 2.92};
    REQUIRE_THAT(path_loss(params, 100.0), WithinAbs(130.4, 1e-9));
    REQUIRE_THAT(path_loss(params, 100.0, 8.2), WithinAbs(138.6, 1e-9));
}

TEST_CASE("distances below the reference clamp to it") {
    const PathLossParams params{72.0, 2.92};
    REQUIRE(path_loss(params, 0.25) == path_loss(params, 1.0));
    REQUIRE(path_loss(params, 0.0) == path_loss(params, 1.0));
}

TEST_CASE("invalid distances are rejected") {
    const PathLossParams params;
    REQUIRE_THROWS_AS(path_loss(params, -1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(path_loss(params, std::nan("")), std::invalid_argument);
    REQUIRE_THROWS_AS(path_loss(params, INFINITY), std::invalid_argument);
}

TEST_CASE("decade steps add 10 beta dB") {
    const PathLossParams params{61.4, 2.0};
    Xoshiro256pp rng(5);
    for (int i = 0; i < 200; ++i) {
        const double d = rng.uniform(10.0, 1000.0);
        const double step = path_loss(params, d) - path_loss(params, d / 10.0);
        REQUIRE_THAT(step, WithinAbs(10.0 * params.pathloss_exponent, 1e-9));
    }
}

TEST_CASE("shadow term is purely additive") {
    const PathLossParams params{72.0, 2.92};
    Xoshiro256pp rng(6);
    for (int i = 0; i < 100; ++i) {
        const double d = rng.uniform(1.0, 500.0);
        const double eta = rng.gaussian() * 8.2;
        REQUIRE_THAT(path_loss(params, d, eta) - path_loss(params, d),
                     WithinAbs(eta, 1e-9));
    }
}

TEST_CASE("shadow field queries are bit-identical and link specific") {
    const ShadowField field(9001, 8.2);
    REQUIRE(field.at(0, 0) == field.at(0, 0));
    REQUIRE(field.at(2, 7) == field.at(2, 7));
    REQUIRE(field.at(0, 0) != field.at(1, 0));
    REQUIRE(field.at(0, 0) != field.at(0, 1));

    const ShadowField other_run(9002, 8.2);
    REQUIRE(field.at(0, 0) != other_run.at(0, 0));
}

TEST_CASE("shadow field matches its configured spread") {
    const ShadowField field(77, 8.2);
    const int n = 20000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = field.at(i, 0);
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum_sq / n - mean * mean);
    REQUIRE(std::abs(mean) < 0.2);
    REQUIRE(std::abs(sd - 8.2) < 0.3);

    const ShadowField zero(77, 0.0);
    REQUIRE(zero.at(3, 4) == 0.0);
    REQUIRE_THROWS_AS(ShadowField(77, -1.0), std::invalid_argument);
}
