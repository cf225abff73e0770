#pragma once

// Uniform linear arrays and DFT beam codebooks.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mmwsim {

struct AntennaArrayConfig {
    int n_tx = 16;
    int n_rx = 4;
    double element_spacing = 0.5; ///< in wavelengths
};

enum class ArraySide { tx, rx };

/// Steering vector of a uniform linear array for a planar wave arriving from
/// azimuth `azimuth_rad`:
///   [1, e^{j 2 pi s sin(az)}, ..., e^{j 2 pi s (n-1) sin(az)}]
/// with s the element spacing in wavelengths (pi sin(az) phase steps at
/// half-wavelength spacing).  The array is linear and horizontal, so the
/// elevation angle does not enter the response; the parameter is accepted
/// because subpaths carry one.
inline std::vector<std::complex<double>> array_response(
    const AntennaArrayConfig& config, double azimuth_rad, double elevation_rad,
    ArraySide side) {
    (void)elevation_rad;
    const int n = side == ArraySide::tx ? config.n_tx : config.n_rx;
    if (n < 1)
        throw std::invalid_argument("array_response: element count must be >= 1");
    const double step =
        2.0 * std::numbers::pi * config.element_spacing * std::sin(azimuth_rad);
    std::vector<std::complex<double>> response(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
        response[static_cast<size_t>(k)] = std::polar(1.0, step * k);
    return response;
}

/// Fixed grid of unit-norm beamforming vectors for each side of the link.
struct BeamCodebook {
    std::vector<std::vector<std::complex<double>>> tx_beams;
    std::vector<std::vector<std::complex<double>>> rx_beams;

    /// DFT codebook: beam m of an n-element array is
    ///   w_m[k] = e^{j 2 pi k m / n} / sqrt(n),
    /// one beam per element, spanning the full azimuth range.
    static BeamCodebook dft(int n_tx, int n_rx) {
        if (n_tx < 1 || n_rx < 1)
            throw std::invalid_argument("BeamCodebook::dft: sizes must be >= 1");
        BeamCodebook book;
        book.tx_beams = make_side(n_tx);
        book.rx_beams = make_side(n_rx);
        return book;
    }

  private:
    static std::vector<std::vector<std::complex<double>>> make_side(int n) {
        std::vector<std::vector<std::complex<double>>> beams(
            static_cast<size_t>(n));
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (int m = 0; m < n; ++m) {
            auto& w = beams[static_cast<size_t>(m)];
            w.resize(static_cast<size_t>(n));
            for (int k = 0; k < n; ++k)
                w[static_cast<size_t>(k)] = std::polar(
                    scale, 2.0 * std::numbers::pi * k * m / static_cast<double>(n));
        }
        return beams;
    }
};

} // namespace mmwsim
