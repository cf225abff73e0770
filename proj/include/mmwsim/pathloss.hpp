#pragma once

// Large-scale propagation loss: floating-intercept power-law model with
// lognormal shadowing.

#include <cmath>
#include <stdexcept>

#include "mmwsim/rng.hpp"

namespace mmwsim {

struct PathLossParams {
    double floating_intercept_db = 72.0; ///< loss at the 1 m reference distance
    double pathloss_exponent = 2.92;
};

/// Path loss in dB at `distance_m` metres:
///   PL(d) = alpha + 10 * beta * log10(d) + shadow_db
/// Distances below the 1 m reference are clamped to 1 m, so the intercept is
/// the minimum loss.  Negative or non-finite distances are input errors.
inline double path_loss(const PathLossParams& params, double distance_m,
                        double shadow_db = 0.0) {
    if (!std::isfinite(distance_m) || distance_m < 0.0)
        throw std::invalid_argument("path_loss: distance must be finite and >= 0");
    const double d = distance_m < 1.0 ? 1.0 : distance_m;
    return params.floating_intercept_db +
           10.0 * params.pathloss_exponent * std::log10(d) + shadow_db;
}

/// Per-link shadow fading, N(0, sigma^2) in dB, frozen for the lifetime of a
/// run.  Values are pure functions of (seed, gnb_id, ue_id): queries are
/// bit-identical no matter how often or in which order links are looked up.
class ShadowField {
  public:
    ShadowField(std::uint64_t seed, double sigma_db)
        : seed_(seed), sigma_db_(sigma_db) {
        if (!(sigma_db >= 0.0))
            throw std::invalid_argument("ShadowField: sigma must be >= 0");
    }

    double at(int gnb_id, int ue_id) const {
        const std::uint64_t link =
            mix_seed(seed_, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(gnb_id)) << 32) |
                                static_cast<std::uint32_t>(ue_id));
        return sigma_db_ * gaussian_at(link);
    }

    double sigma_db() const { return sigma_db_; }

  private:
    std::uint64_t seed_;
    double sigma_db_;
};

} // namespace mmwsim
