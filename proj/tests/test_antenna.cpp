#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "mmwsim/antenna.hpp"

using namespace mmwsim;
using Catch::Matchers::WithinAbs;

namespace {
double abs_diff(const std::complex<double>& a, const std::complex<double>& b) {
    return std::abs(a - b);
}
} // namespace

TEST_CASE("single-element response is the scalar 1") {
    const AntennaArrayConfig config{1, 1, 0.5};
    const auto response = array_response(config, 0.7, 0.1, ArraySide::tx);
    REQUIRE(response.size() == 1);
    REQUIRE_THAT(abs_diff(response[0], {1.0, 0.0}), WithinAbs(0.0, 1e-12));
}

TEST_CASE("broadside response is all ones") {
    const AntennaArrayConfig config{2, 4, 0.5};
    const auto response = array_response(config, 0.0, 0.0, ArraySide::tx);
    REQUIRE(response.size() == 2);
    for (const auto& e : response)
        REQUIRE_THAT(abs_diff(e, {1.0, 0.0}), WithinAbs(0.0, 1e-12));
}

TEST_CASE("endfire response alternates sign for four elements") {
    const AntennaArrayConfig config{16, 4, 0.5};
    const auto response =
        array_response(config, std::numbers::pi / 2.0, 0.0, ArraySide::rx);
    REQUIRE(response.size() == 4);
    REQUIRE_THAT(abs_diff(response[0], {1.0, 0.0}), WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(abs_diff(response[1], {-1.0, 0.0}), WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(abs_diff(response[2], {1.0, 0.0}), WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(abs_diff(response[3], {-1.0, 0.0}), WithinAbs(0.0, 1e-12));
}

TEST_CASE("response elements always have unit modulus") {
    const AntennaArrayConfig config{16, 4, 0.5};
    for (double az = -3.1; az <= 3.1; az += 0.37) {
        for (const auto& e : array_response(config, az, 0.0, ArraySide::tx))
            REQUIRE_THAT(std::abs(e), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("elevation does not alter a horizontal linear array") {
    const AntennaArrayConfig config{8, 4, 0.5};
    const auto a = array_response(config, 0.5, -0.3, ArraySide::tx);
    const auto b = array_response(config, 0.5, 0.4, ArraySide::tx);
    for (size_t i = 0; i < a.size(); ++i)
        REQUIRE_THAT(abs_diff(a[i], b[i]), WithinAbs(0.0, 1e-12));
}

TEST_CASE("array side picks the matching element count") {
    const AntennaArrayConfig config{16, 4, 0.5};
    REQUIRE(array_response(config, 0.1, 0, ArraySide::tx).size() == 16);
    REQUIRE(array_response(config, 0.1, 0, ArraySide::rx).size() == 4);
}

TEST_CASE("degenerate element counts are rejected") {
    const AntennaArrayConfig config{0, 4, 0.5};
    REQUIRE_THROWS_AS(array_response(config, 0, 0, ArraySide::tx),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(BeamCodebook::dft(0, 4), std::invalid_argument);
}

TEST_CASE("dft codebook beams are unit norm and orthogonal") {
    const BeamCodebook book = BeamCodebook::dft(16, 4);
    REQUIRE(book.tx_beams.size() == 16);
    REQUIRE(book.rx_beams.size() == 4);
    for (const auto& side : {book.tx_beams, book.rx_beams}) {
        for (size_t i = 0; i < side.size(); ++i) {
            double norm_sq = 0.0;
            for (const auto& e : side[i]) norm_sq += std::norm(e);
            REQUIRE_THAT(norm_sq, WithinAbs(1.0, 1e-12));
            for (size_t j = i + 1; j < side.size(); ++j) {
                std::complex<double> dot{0.0, 0.0};
                for (size_t k = 0; k < side[i].size(); ++k)
                    dot += std::conj(side[i][k]) * side[j][k];
                REQUIRE_THAT(std::abs(dot), WithinAbs(0.0, 1e-12));
            }
        }
    }
}
