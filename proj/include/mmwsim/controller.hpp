#pragma once

// Centralised mobility management: periodic estimate refresh, serving
// cluster maintenance with enter/exit hysteresis and path preparation, and
// the baseline hard-handover state machine it is compared against.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mmwsim/errors.hpp"

namespace mmwsim {

/// One gNB-to-UE link as the controller sees it.
struct LinkSample {
    double link_gain_db = 0.0; ///< large-scale budget: slow, geometry-driven
    double sinr_db = 0.0;      ///< instantaneous measured SINR
};

/// Controller-side view of every link, refreshed on the reporting period.
/// Between refreshes the samples are held, so decisions are taken on data up
/// to `staleness` slots old.
struct VmmEstimate {
    std::vector<LinkSample> links; ///< indexed by gNB id
    std::int64_t sample_slot = -1;
    std::int64_t staleness = 0;
};

/// Holds the latest report and answers queries with its age attached.
class VmmTracker {
  public:
    explicit VmmTracker(int reporting_period_slots)
        : period_(reporting_period_slots) {
        if (reporting_period_slots < 1)
            throw ConfigError("VmmTracker: reporting period must be >= 1");
    }

    /// Ingest the current truth if a report is due this slot (every
    /// `period` slots, starting at slot 0), then return the held estimate.
    const VmmEstimate& refresh(std::span<const LinkSample> truth,
                               std::int64_t slot) {
        if (estimate_.sample_slot < 0 || slot % period_ == 0) {
            estimate_.links.assign(truth.begin(), truth.end());
            estimate_.sample_slot = slot;
        }
        estimate_.staleness = slot - estimate_.sample_slot;
        return estimate_;
    }

    const VmmEstimate& current() const { return estimate_; }
    int period() const { return period_; }

  private:
    int period_;
    VmmEstimate estimate_;
};

struct ClusterThresholds {
    double enter_db = -5.0;
    double exit_db = -13.0;

    void validate() const {
        if (!(enter_db > exit_db))
            throw ConfigError(
                "ClusterThresholds: enter threshold must exceed exit threshold");
    }
};

/// The set of gNBs jointly serving one user.  Members are kept sorted by id;
/// the anchor is the member the controller currently rates best.
struct ServingCluster {
    int ue_id = 0;
    std::vector<int> members;
    int anchor = -1;

    bool contains(int gnb_id) const {
        return std::binary_search(members.begin(), members.end(), gnb_id);
    }
};

struct ClusterUpdate {
    std::int64_t slot = 0;
    std::vector<int> additions;  ///< joined via the enter threshold
    std::vector<int> removals;   ///< dropped via the exit threshold
    int anchor_from = -1;
    int anchor_to = -1;

    bool empty() const {
        return additions.empty() && removals.empty() && anchor_from == anchor_to;
    }
};

namespace detail {
/// Member with the highest sampled SINR; ties go to the lower id.
inline int best_member(const std::vector<int>& members,
                       const VmmEstimate& estimates) {
    int best = -1;
    double best_sinr = 0.0;
    for (int id : members) {
        const double s = estimates.links[static_cast<size_t>(id)].sinr_db;
        if (best < 0 || s > best_sinr) {
            best = id;
            best_sinr = s;
        }
    }
    return best;
}
} // namespace detail

/// One cluster maintenance pass.
///
/// Non-members whose estimated SINR reaches the enter threshold join,
/// provided they appear in `eligible_joins` (path already prepared and in
/// the near set).  Members whose estimate falls below the exit threshold
/// leave, except that the cluster is never emptied: if every member fails
/// the exit test the best-estimated one stays.  The anchor is reassigned to
/// the member with the highest estimate afterwards.  Links sitting between
/// the two thresholds keep their state, which is what stops churn.
inline std::pair<ServingCluster, ClusterUpdate> update_cluster(
    const ServingCluster& cluster, const VmmEstimate& estimates,
    const ClusterThresholds& thresholds, std::int64_t slot,
    std::span<const int> eligible_joins) {
    thresholds.validate();
    if (cluster.members.empty())
        throw InvariantError("update_cluster: cluster must not be empty");

    ServingCluster next = cluster;
    ClusterUpdate update;
    update.slot = slot;
    update.anchor_from = cluster.anchor;

    for (int id : eligible_joins) {
        if (next.contains(id)) continue;
        if (estimates.links[static_cast<size_t>(id)].sinr_db >=
            thresholds.enter_db)
            update.additions.push_back(id);
    }

    std::vector<int> kept;
    kept.reserve(next.members.size());
    for (int id : next.members) {
        if (estimates.links[static_cast<size_t>(id)].sinr_db < thresholds.exit_db)
            update.removals.push_back(id);
        else
            kept.push_back(id);
    }
    if (kept.empty() && update.additions.empty()) {
        // Last-member rule: keep the least-bad link rather than drop service.
        const int survivor = detail::best_member(next.members, estimates);
        kept.push_back(survivor);
        std::erase(update.removals, survivor);
    }

    next.members = std::move(kept);
    next.members.insert(next.members.end(), update.additions.begin(),
                        update.additions.end());
    std::sort(next.members.begin(), next.members.end());
    next.anchor = detail::best_member(next.members, estimates);
    update.anchor_to = next.anchor;
    return {next, update};
}

/// Convenience overload with every gNB join-eligible.
inline std::pair<ServingCluster, ClusterUpdate> update_cluster(
    const ServingCluster& cluster, const VmmEstimate& estimates,
    const ClusterThresholds& thresholds, std::int64_t slot = 0) {
    std::vector<int> all(estimates.links.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return update_cluster(cluster, estimates, thresholds, slot, all);
}

enum class PrepareAck { prepared, already_member };

/// Data-path preparation ledger.  A gNB prepared at slot t becomes
/// join-eligible at slot t + 1; membership clears the entry.
class PathPreparer {
  public:
    PrepareAck prepare(int gnb_id, const ServingCluster& cluster,
                       std::int64_t slot) {
        if (cluster.contains(gnb_id)) return PrepareAck::already_member;
        prepared_.try_emplace(gnb_id, slot);
        return PrepareAck::prepared;
    }

    bool eligible(int gnb_id, std::int64_t slot) const {
        const auto it = prepared_.find(gnb_id);
        return it != prepared_.end() && slot > it->second;
    }

    void on_joined(int gnb_id) { prepared_.erase(gnb_id); }

  private:
    std::map<int, std::int64_t> prepared_; ///< gnb id -> slot prepared
};

struct HandoverEvent {
    std::int64_t slot = 0;
    int from_gnb = -1;
    int to_gnb = -1;
    int interruption_slots = 0;
};

struct BaselineParams {
    double hysteresis_db = 3.0;
    int time_to_trigger_slots = 100;
    int interruption_slots = 50;
};

/// Hard-handover state for the single-connectivity baseline.
struct BaselineState {
    int serving = -1;
    std::int64_t last_handover_slot = 0;
    std::int64_t interruption_until = 0; ///< slots below this are outage

    bool interrupted(std::int64_t slot) const { return slot < interruption_until; }
};

/// One baseline decision pass.  The serving gNB is swapped when another
/// link's large-scale gain estimate beats the current one by the hysteresis
/// margin, at most once per time-to-trigger window; each swap starts an
/// interruption of `interruption_slots`.  The first call seeds the serving
/// choice (strongest link, no event, no interruption).
inline std::optional<HandoverEvent> baseline_handover(
    BaselineState& state, const VmmEstimate& estimates,
    const BaselineParams& params, std::int64_t slot) {
    if (params.hysteresis_db < 0.0 || params.time_to_trigger_slots < 0 ||
        params.interruption_slots < 0)
        throw ConfigError("baseline_handover: negative parameter");

    int best = -1;
    double best_gain = 0.0;
    for (size_t id = 0; id < estimates.links.size(); ++id) {
        const double gain = estimates.links[id].link_gain_db;
        if (best < 0 || gain > best_gain) {
            best = static_cast<int>(id);
            best_gain = gain;
        }
    }

    if (state.serving < 0) {
        state.serving = best;
        state.last_handover_slot = slot - params.time_to_trigger_slots;
        state.interruption_until = slot;
        return std::nullopt;
    }

    const double current_gain =
        estimates.links[static_cast<size_t>(state.serving)].link_gain_db;
    const bool stronger = best != state.serving &&
                          best_gain > current_gain + params.hysteresis_db;
    const bool ttt_expired =
        slot - state.last_handover_slot >= params.time_to_trigger_slots;
    if (!stronger || !ttt_expired) return std::nullopt;

    HandoverEvent event;
    event.slot = slot;
    event.from_gnb = state.serving;
    event.to_gnb = best;
    event.interruption_slots = params.interruption_slots;
    state.serving = best;
    state.last_handover_slot = slot;
    state.interruption_until = slot + params.interruption_slots;
    return event;
}

} // namespace mmwsim
