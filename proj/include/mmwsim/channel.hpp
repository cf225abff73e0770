#pragma once

// Small-scale channel model: clustered subpaths with complex gains, the
// narrowband MIMO channel matrix they induce, first-order Gauss-Markov
// fading, and beam selection against a codebook.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "mmwsim/antenna.hpp"
#include "mmwsim/rng.hpp"

namespace mmwsim {

/// One propagation subpath: a complex gain plus departure/arrival angles.
struct Subpath {
    std::complex<double> gain;
    double aoa_azimuth = 0.0;
    double aoa_elevation = 0.0;
    double aod_azimuth = 0.0;
    double aod_elevation = 0.0;
};

struct SubpathSet {
    std::vector<Subpath> paths;
};

/// Draw a fresh subpath set: azimuths uniform over (-pi, pi], elevations
/// uniform over [-pi/6, pi/6], gains CN(0, 1).  The draw order (angles, then
/// gain, path by path) is fixed; reordering would silently change every
/// seeded run.
inline SubpathSet draw_subpaths(int count, Xoshiro256pp& rng) {
    if (count < 1)
        throw std::invalid_argument("draw_subpaths: count must be >= 1");
    SubpathSet set;
    set.paths.resize(static_cast<size_t>(count));
    constexpr double kPi = std::numbers::pi;
    for (auto& path : set.paths) {
        path.aoa_azimuth = rng.uniform(-kPi, kPi);
        path.aoa_elevation = rng.uniform(-kPi / 6.0, kPi / 6.0);
        path.aod_azimuth = rng.uniform(-kPi, kPi);
        path.aod_elevation = rng.uniform(-kPi / 6.0, kPi / 6.0);
        path.gain = rng.complex_gaussian();
    }
    return set;
}

/// Narrowband channel matrix, n_rx x n_tx, row-major.
struct ChannelMatrix {
    int n_rx = 0;
    int n_tx = 0;
    std::vector<std::complex<double>> entries;

    std::complex<double>& at(int rx, int tx) {
        return entries[static_cast<size_t>(rx) * static_cast<size_t>(n_tx) +
                       static_cast<size_t>(tx)];
    }
    const std::complex<double>& at(int rx, int tx) const {
        return entries[static_cast<size_t>(rx) * static_cast<size_t>(n_tx) +
                       static_cast<size_t>(tx)];
    }
};

/// Assemble the channel matrix from a subpath set:
///   H = (1 / sqrt(L)) * sum_l g_l * u_rx(aoa_l) * u_tx(aod_l)^H
/// The 1/sqrt(L) normalisation keeps the average channel power independent
/// of the subpath count.
inline ChannelMatrix channel_matrix(const SubpathSet& subpaths,
                                    const AntennaArrayConfig& config) {
    if (subpaths.paths.empty())
        throw std::invalid_argument("channel_matrix: empty subpath set");
    ChannelMatrix h;
    h.n_rx = config.n_rx;
    h.n_tx = config.n_tx;
    h.entries.assign(static_cast<size_t>(h.n_rx) * static_cast<size_t>(h.n_tx),
                     {0.0, 0.0});
    const double scale = 1.0 / std::sqrt(static_cast<double>(subpaths.paths.size()));
    for (const auto& path : subpaths.paths) {
        const auto u_rx = array_response(config, path.aoa_azimuth,
                                         path.aoa_elevation, ArraySide::rx);
        const auto u_tx = array_response(config, path.aod_azimuth,
                                         path.aod_elevation, ArraySide::tx);
        const std::complex<double> g = scale * path.gain;
        for (int r = 0; r < h.n_rx; ++r)
            for (int t = 0; t < h.n_tx; ++t)
                h.at(r, t) += g * u_rx[static_cast<size_t>(r)] *
                              std::conj(u_tx[static_cast<size_t>(t)]);
    }
    return h;
}

/// First-order Gauss-Markov fading parameters.
struct FadingProcess {
    double rho = 1.0;        ///< per-slot gain correlation, in [0, 1]
    double doppler_hz = 0.0;

    /// Derive the per-slot correlation from UE speed: f_D = v f_c / c,
    /// coherence time T_c = 0.423 / f_D, rho = exp(-slot / T_c).
    static FadingProcess from_speed(double speed_mps, double carrier_hz,
                                    double slot_duration_s) {
        if (speed_mps < 0.0 || carrier_hz <= 0.0 || slot_duration_s <= 0.0)
            throw std::invalid_argument("FadingProcess: bad parameters");
        FadingProcess process;
        process.doppler_hz = speed_mps * carrier_hz / 299792458.0;
        process.rho = process.doppler_hz == 0.0
                          ? 1.0
                          : std::exp(-slot_duration_s * process.doppler_hz / 0.423);
        return process;
    }
};

/// In-place fading update over a flat gain array; the allocation-free core
/// of evolve_fading used by the simulation hot loop.
inline void evolve_fading_inplace(std::span<std::complex<double>> gains,
                                  const FadingProcess& process,
                                  Xoshiro256pp& rng) {
    if (!(process.rho >= 0.0 && process.rho <= 1.0))
        throw std::invalid_argument("evolve_fading: rho must be in [0, 1]");
    const double innovation_scale = std::sqrt(1.0 - process.rho * process.rho);
    for (auto& gain : gains) {
        const std::complex<double> w = rng.complex_gaussian();
        gain = process.rho * gain + innovation_scale * w;
    }
}

/// Advance every subpath gain one slot:
///   g' = rho g + sqrt(1 - rho^2) w,   w ~ CN(0, 1)
/// which keeps |g|^2 unit-mean for any rho.  Angles are ride-along state and
/// do not change.  The innovation is drawn even when rho = 1 so that RNG
/// consumption per slot is constant; at rho = 1 the update is exactly the
/// identity.
inline SubpathSet evolve_fading(const SubpathSet& subpaths,
                                const FadingProcess& process,
                                Xoshiro256pp& rng) {
    SubpathSet next = subpaths;
    std::vector<std::complex<double>> gains(next.paths.size());
    for (size_t l = 0; l < next.paths.size(); ++l) gains[l] = next.paths[l].gain;
    evolve_fading_inplace(gains, process, rng);
    for (size_t l = 0; l < next.paths.size(); ++l) next.paths[l].gain = gains[l];
    return next;
}

/// Result of a codebook beam search.
struct BeamSelection {
    double gain_db = 0.0;
    int tx_index = 0;
    int rx_index = 0;
};

/// Exhaustive codebook search for the beam pair maximising the beamformed
/// power |w_rx^H H w_tx|^2.  Ties are broken toward the lowest (tx index,
/// rx index) pair.
inline BeamSelection beamforming_gain(const ChannelMatrix& h,
                                      const BeamCodebook& codebook) {
    if (codebook.tx_beams.empty() || codebook.rx_beams.empty())
        throw std::invalid_argument("beamforming_gain: empty codebook");
    BeamSelection best;
    double best_power = -1.0;
    for (size_t j = 0; j < codebook.tx_beams.size(); ++j) {
        const auto& w_tx = codebook.tx_beams[j];
        for (size_t i = 0; i < codebook.rx_beams.size(); ++i) {
            const auto& w_rx = codebook.rx_beams[i];
            std::complex<double> v{0.0, 0.0};
            for (int r = 0; r < h.n_rx; ++r) {
                std::complex<double> row{0.0, 0.0};
                for (int t = 0; t < h.n_tx; ++t)
                    row += h.at(r, t) * w_tx[static_cast<size_t>(t)];
                v += std::conj(w_rx[static_cast<size_t>(r)]) * row;
            }
            const double power = std::norm(v);
            if (power > best_power) {
                best_power = power;
                best.tx_index = static_cast<int>(j);
                best.rx_index = static_cast<int>(i);
            }
        }
    }
    best.gain_db = 10.0 * std::log10(best_power);
    return best;
}

/// Beam-space view of one link.  For fixed subpath angles the projection of
/// every (subpath, beam) combination onto the codebook is constant within a
/// run, so the beamformed value for pair (j, i) collapses to
///   s_ji = (1 / sqrt(L)) * sum_l g_l * c_l[j, i]
/// with c_l[j, i] = (w_rx_i^H u_rx_l)(u_tx_l^H w_tx_j) precomputed here.
/// This is algebraically identical to forming H and scanning the codebook,
/// at a fraction of the per-slot cost.
class BeamspaceLink {
  public:
    BeamspaceLink() = default;

    BeamspaceLink(const SubpathSet& subpaths, const AntennaArrayConfig& config,
                  const BeamCodebook& codebook) {
        if (subpaths.paths.empty())
            throw std::invalid_argument("BeamspaceLink: empty subpath set");
        paths_ = static_cast<int>(subpaths.paths.size());
        tx_beams_ = static_cast<int>(codebook.tx_beams.size());
        rx_beams_ = static_cast<int>(codebook.rx_beams.size());
        pair_projection_.assign(static_cast<size_t>(paths_) * pair_count(),
                                {0.0, 0.0});
        long_term_gain_.assign(pair_count(), 0.0);

        for (int l = 0; l < paths_; ++l) {
            const auto& path = subpaths.paths[static_cast<size_t>(l)];
            const auto u_rx = array_response(config, path.aoa_azimuth,
                                             path.aoa_elevation, ArraySide::rx);
            const auto u_tx = array_response(config, path.aod_azimuth,
                                             path.aod_elevation, ArraySide::tx);
            for (int j = 0; j < tx_beams_; ++j) {
                std::complex<double> tx_proj{0.0, 0.0};
                const auto& w_tx = codebook.tx_beams[static_cast<size_t>(j)];
                for (size_t t = 0; t < u_tx.size(); ++t)
                    tx_proj += std::conj(u_tx[t]) * w_tx[t];
                for (int i = 0; i < rx_beams_; ++i) {
                    std::complex<double> rx_proj{0.0, 0.0};
                    const auto& w_rx = codebook.rx_beams[static_cast<size_t>(i)];
                    for (size_t r = 0; r < w_rx.size(); ++r)
                        rx_proj += std::conj(w_rx[r]) * u_rx[r];
                    pair_projection_[index(l, j, i)] = rx_proj * tx_proj;
                }
            }
        }
        const double inv_paths = 1.0 / static_cast<double>(paths_);
        for (int l = 0; l < paths_; ++l)
            for (size_t p = 0; p < pair_count(); ++p)
                long_term_gain_[p] +=
                    inv_paths * std::norm(pair_projection_[static_cast<size_t>(l) *
                                                               pair_count() +
                                                           p]);
        best_long_term_ = argmax_long_term();
    }

    /// Beamformed complex value for pair (tx_index, rx_index) under the given
    /// per-subpath gains.
    std::complex<double> pair_value(std::span<const std::complex<double>> gains,
                                    int tx_index, int rx_index) const {
        const double scale = 1.0 / std::sqrt(static_cast<double>(paths_));
        std::complex<double> s{0.0, 0.0};
        for (int l = 0; l < paths_; ++l)
            s += gains[static_cast<size_t>(l)] * pair_projection_[index(l, tx_index, rx_index)];
        return scale * s;
    }

    struct BeamPairPower {
        double power = 0.0; ///< linear |s|^2
        int tx_index = 0;
        int rx_index = 0;
    };

    /// Exhaustive pair search on sampled gains, in linear power; same
    /// tie-break as beamforming_gain (lowest tx index, then rx index).
    BeamPairPower best_pair_power(std::span<const std::complex<double>> gains) const {
        BeamPairPower best;
        double best_power = -1.0;
        for (int j = 0; j < tx_beams_; ++j)
            for (int i = 0; i < rx_beams_; ++i) {
                const double power = std::norm(pair_value(gains, j, i));
                if (power > best_power) {
                    best_power = power;
                    best.tx_index = j;
                    best.rx_index = i;
                }
            }
        best.power = best_power;
        return best;
    }

    BeamSelection best_pair(std::span<const std::complex<double>> gains) const {
        const BeamPairPower best = best_pair_power(gains);
        return {10.0 * std::log10(best.power), best.tx_index, best.rx_index};
    }

    /// Expected beamformed power of a pair under CN(0, 1) subpath gains:
    /// (1/L) sum_l |c_l|^2.
    double long_term_gain(int tx_index, int rx_index) const {
        return long_term_gain_[static_cast<size_t>(tx_index) *
                                   static_cast<size_t>(rx_beams_) +
                               static_cast<size_t>(rx_index)];
    }

    /// The pair with the largest expected power, i.e. the alignment a
    /// controller with perfect long-term knowledge would pick.
    const BeamSelection& best_long_term() const { return best_long_term_; }

    int tx_beam_count() const { return tx_beams_; }
    int rx_beam_count() const { return rx_beams_; }

  private:
    size_t pair_count() const {
        return static_cast<size_t>(tx_beams_) * static_cast<size_t>(rx_beams_);
    }
    size_t index(int l, int j, int i) const {
        return (static_cast<size_t>(l) * static_cast<size_t>(tx_beams_) +
                static_cast<size_t>(j)) *
                   static_cast<size_t>(rx_beams_) +
               static_cast<size_t>(i);
    }
    BeamSelection argmax_long_term() const {
        BeamSelection best;
        double best_power = -1.0;
        for (int j = 0; j < tx_beams_; ++j)
            for (int i = 0; i < rx_beams_; ++i) {
                const double power = long_term_gain(j, i);
                if (power > best_power) {
                    best_power = power;
                    best.tx_index = j;
                    best.rx_index = i;
                }
            }
        best.gain_db = 10.0 * std::log10(best_power);
        return best;
    }

    int paths_ = 0;
    int tx_beams_ = 0;
    int rx_beams_ = 0;
    std::vector<std::complex<double>> pair_projection_;
    std::vector<double> long_term_gain_;
    BeamSelection best_long_term_;
};

} // namespace mmwsim
