#pragma once

// Link budget arithmetic: received power, thermal noise, interference
// accumulation and SINR.

#include <cmath>
#include <span>
#include <stdexcept>

#include "mmwsim/db.hpp"

namespace mmwsim {

/// All terms of a single link evaluation, in dB / dBm.
struct LinkBudget {
    double tx_power_dbm = 0.0;
    double beamforming_gain_db = 0.0; ///< combined tx+rx array gain
    double attenuation_db = 0.0;      ///< per-subpath attenuation term
    double path_loss_db = 0.0;
    double received_power_dbm = 0.0;
};

/// Received power of a beamformed link:
///   P_rx = P_tx + psi - delta - PL
inline LinkBudget received_power(double tx_power_dbm, double beamforming_gain_db,
                                 double attenuation_db, double path_loss_db) {
    LinkBudget budget;
    budget.tx_power_dbm = tx_power_dbm;
    budget.beamforming_gain_db = beamforming_gain_db;
    budget.attenuation_db = attenuation_db;
    budget.path_loss_db = path_loss_db;
    budget.received_power_dbm =
        tx_power_dbm + beamforming_gain_db - attenuation_db - path_loss_db;
    return budget;
}

/// Thermal noise power over `bandwidth_hz` in dBm, for a given noise power
/// spectral density in dBm/Hz.
inline double noise_power(double bandwidth_hz, double density_dbm_hz = -174.0) {
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("noise_power: bandwidth must be > 0");
    return density_dbm_hz + 10.0 * std::log10(bandwidth_hz);
}

struct SinrReport {
    double received_power_dbm = 0.0;
    double interference_dbm = kNegInfDb;
    double noise_dbm = 0.0;
    double sinr_db = 0.0;
    bool satisfied = false; ///< sinr_db >= the threshold passed to sinr()
};

/// SINR in dB.  Interference of -inf dBm denotes an interference-free link.
inline SinrReport sinr(double received_power_dbm, double interference_dbm,
                       double noise_dbm, double min_sinr_db) {
    SinrReport report;
    report.received_power_dbm = received_power_dbm;
    report.interference_dbm = interference_dbm;
    report.noise_dbm = noise_dbm;
    const double denom = db_to_linear(interference_dbm) + db_to_linear(noise_dbm);
    report.sinr_db = received_power_dbm - linear_to_db(denom);
    report.satisfied = report.sinr_db >= min_sinr_db;
    return report;
}

/// Total interference in dBm from a set of co-channel transmitters.  Each
/// contributor is its aligned-beam received power with `sidelobe_penalty_db`
/// substituted for the aligned beamforming gain advantage; contributions add
/// in the linear domain.  An empty set yields -inf dBm.
inline double interference_dbm(std::span<const double> aligned_rx_dbm,
                               double sidelobe_penalty_db) {
    double total = 0.0;
    for (double rx : aligned_rx_dbm)
        total += db_to_linear(rx - sidelobe_penalty_db);
    return linear_to_db(total);
}

} // namespace mmwsim
