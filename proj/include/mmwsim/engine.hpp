#pragma once

// Slotted downlink simulation: one mobile cell-edge user crossing a row of
// coordinated cells, evaluated under single-connectivity handover or
// multi-connectivity cluster service.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mmwsim/channel.hpp"
#include "mmwsim/controller.hpp"
#include "mmwsim/db.hpp"
#include "mmwsim/errors.hpp"
#include "mmwsim/linkbudget.hpp"
#include "mmwsim/mobility.hpp"
#include "mmwsim/pathloss.hpp"
#include "mmwsim/rng.hpp"
#include "mmwsim/scenario.hpp"
#include "mmwsim/topology.hpp"

namespace mmwsim {

enum class Scheme { single, multi };

inline std::string to_string(Scheme scheme) {
    return scheme == Scheme::single ? "single" : "multi";
}

enum class SlotCause { ok, below_threshold, handover_interruption };

inline std::string to_string(SlotCause cause) {
    switch (cause) {
        case SlotCause::ok: return "ok";
        case SlotCause::below_threshold: return "below-threshold";
        default: return "handover-interruption";
    }
}

struct SlotOutcome {
    std::int64_t slot = 0;
    bool success = false;
    SlotCause cause = SlotCause::ok;
    double best_sinr_db = kNegInfDb;
    int serving_count = 0;
};

/// Selection-combining transmission verdict over the serving set's link
/// reports.  An interruption (baseline handover in progress) fails the slot
/// outright; otherwise the slot succeeds when any serving link meets its
/// threshold.
inline SlotOutcome evaluate_transmission(std::span<const SinrReport> links,
                                         bool interrupted, std::int64_t slot) {
    SlotOutcome outcome;
    outcome.slot = slot;
    outcome.serving_count = static_cast<int>(links.size());
    for (const auto& report : links) {
        outcome.best_sinr_db = std::max(outcome.best_sinr_db, report.sinr_db);
        outcome.success = outcome.success || report.satisfied;
    }
    if (interrupted) {
        outcome.success = false;
        outcome.cause = SlotCause::handover_interruption;
    } else {
        outcome.cause = outcome.success ? SlotCause::ok : SlotCause::below_threshold;
    }
    return outcome;
}

struct RunMetrics {
    double speed_kmh = 0.0;
    Scheme scheme = Scheme::single;
    int run_index = 0;
    std::int64_t transmitted = 0;
    std::int64_t succeeded = 0;
    std::int64_t interruption_slots = 0; ///< slots lost to handover outage
    std::int64_t handovers = 0;          ///< serving swaps / anchor moves
    double cluster_size_sum = 0.0;

    double success_rate() const {
        return transmitted > 0
                   ? static_cast<double>(succeeded) / static_cast<double>(transmitted)
                   : 0.0;
    }
    double mean_cluster_size() const {
        return transmitted > 0 ? cluster_size_sum / static_cast<double>(transmitted)
                               : 0.0;
    }
};

/// Per-slot record handed to an attached trace sink.
struct TraceRecord {
    double speed_kmh = 0.0;
    Scheme scheme = Scheme::single;
    int run_index = 0;
    SlotOutcome outcome;
    std::vector<int> serving;            ///< serving gNB id(s), sorted
    int anchor = -1;
    std::vector<SinrReport> links;       ///< one per serving gNB
    const ClusterUpdate* cluster_update = nullptr; ///< non-null if non-trivial
    const HandoverEvent* handover = nullptr;       ///< non-null on a swap
};

using TraceSink = std::function<void(const TraceRecord&)>;

/// One simulation run: fixed scenario, speed, scheme and run index.
///
/// Randomness policy: the run draws everything from a stream seeded by
/// mix_seed(base_seed, run_index).  Speed and scheme deliberately do not
/// enter the seed, and per-slot RNG consumption is scheme independent, so
/// runs sharing a run index experience identical shadowing, geometry and
/// fading innovations across every sweep point.  Differences between sweep
/// points are then paired, which is what makes small effects measurable.
class SlotSimulation {
  public:
    SlotSimulation(const Scenario& scenario, double speed_kmh, Scheme scheme,
                   int run_index)
        : scenario_(scenario), speed_kmh_(speed_kmh), scheme_(scheme),
          run_index_(run_index),
          rng_(mix_seed(scenario.base_seed, static_cast<std::uint64_t>(run_index))) {
        if (!(speed_kmh > 0.0))
            throw ConfigError("SlotSimulation: speed must be > 0");
        speed_mps_ = speed_kmh / 3.6;

        gnbs_ = place_grid(scenario.gnb_count, scenario.cell_radius_m);
        if (scenario.trajectory_waypoints.empty())
            trajectory_ = default_edge_trajectory(gnbs_, scenario.cell_radius_m,
                                                  scenario.edge_offset_factor);
        else
            trajectory_.waypoints = scenario.trajectory_waypoints;
        trajectory_.validate();
        mobility_ = start_of(trajectory_);

        total_slots_ = scenario.total_slots > 0
                           ? scenario.total_slots
                           : traversal_slots(trajectory_, speed_mps_,
                                             scenario.slot_duration_s());

        // Setup draws.  Shadowing comes from an order-independent field;
        // everything drawn from the run stream happens here in fixed order.
        const ShadowField shadow(
            mix_seed(mix_seed(scenario.base_seed,
                              static_cast<std::uint64_t>(run_index)),
                     0x5ade0ull),
            scenario.shadow_sigma_db);
        const AntennaArrayConfig array{scenario.n_tx, scenario.n_rx, 0.5};
        const BeamCodebook codebook = BeamCodebook::dft(scenario.n_tx, scenario.n_rx);

        const int b_count = scenario.gnb_count;
        const int l_count = scenario.subpath_count;
        links_.resize(static_cast<size_t>(b_count));
        gains_.resize(static_cast<size_t>(b_count) * static_cast<size_t>(l_count));
        for (int b = 0; b < b_count; ++b) {
            auto& link = links_[static_cast<size_t>(b)];
            link.shadow_db = shadow.at(b, /*ue=*/0);
            SubpathSet paths = draw_subpaths(l_count, rng_);
            link.beams = BeamspaceLink(paths, array, codebook);
            for (int l = 0; l < l_count; ++l)
                gains_[gain_index(b, l)] = paths.paths[static_cast<size_t>(l)].gain;
            link.held_tx = link.beams.best_long_term().tx_index;
            link.held_rx = link.beams.best_long_term().rx_index;
            link.long_term_gain_lin = link.beams.long_term_gain(
                link.held_tx, link.held_rx);
            // Everything constant in the budget folds into one linear factor:
            // tx power, subpath attenuation, intercept loss and shadowing.
            link.budget_const_lin = db_to_linear(
                scenario.tx_power_dbm - scenario.subpath_attenuation_db -
                scenario.pathloss_intercept_db - link.shadow_db);
        }

        fading_ = FadingProcess::from_speed(speed_mps_, scenario.carrier_hz(),
                                            scenario.slot_duration_s());
        tracker_.emplace(scenario.reporting_period_slots);
        thresholds_ = ClusterThresholds{scenario.enter_threshold_db,
                                        scenario.exit_threshold_db};
        thresholds_.validate();
        baseline_params_ = BaselineParams{scenario.handover_hysteresis_db,
                                          scenario.time_to_trigger_slots,
                                          scenario.interruption_slots};
        noise_lin_ = db_to_linear(noise_power(scenario.bandwidth_hz(),
                                              scenario.noise_dbm_hz));
        min_sinr_lin_ = db_to_linear(scenario.min_sinr_db);
        penalty_lin_ = db_to_linear(-scenario.sidelobe_penalty_db);
        cluster_.ue_id = 0;

        truth_.resize(static_cast<size_t>(b_count));
        active_.assign(static_cast<size_t>(b_count), 0);
        rx_ls_lin_.assign(static_cast<size_t>(b_count), 0.0);
        near_ids_.reserve(static_cast<size_t>(b_count));
        eligible_.reserve(static_cast<size_t>(b_count));
        scratch_reports_.reserve(static_cast<size_t>(b_count));
        serving_scratch_.reserve(static_cast<size_t>(b_count));

        metrics_.speed_kmh = speed_kmh;
        metrics_.scheme = scheme;
        metrics_.run_index = run_index;
    }

    /// Advance the simulation one slot and score the transmission.
    SlotOutcome run_slot(const TraceSink& sink = {}) {
        const std::int64_t t = slot_;
        const Scenario& sc = scenario_;
        const int b_count = sc.gnb_count;

        // 1. Mobility.
        mobility_ = step(mobility_, trajectory_, speed_mps_, sc.slot_duration_s());
        ue_.position = mobility_.position;

        // 2. Fading evolution (fixed draw order: gNB-major, path-minor).
        evolve_fading_inplace(gains_, fading_, rng_);

        // 3. Background activity.  Drawn for every gNB, serving included, so
        // the stream advances identically whatever the controller chose.
        for (int b = 0; b < b_count; ++b)
            active_[static_cast<size_t>(b)] =
                rng_.uniform() < sc.background_activity_prob ? 1 : 0;

        // 4. Geometry-driven large-scale budgets (linear domain).
        for (int b = 0; b < b_count; ++b) {
            auto& link = links_[static_cast<size_t>(b)];
            const double d =
                distance(ue_.position, gnbs_[static_cast<size_t>(b)].position);
            link.pl_geo_lin =
                std::pow(d < 1.0 ? 1.0 : d, -sc.pathloss_exponent);
            rx_ls_lin_[static_cast<size_t>(b)] =
                link.budget_const_lin * link.pl_geo_lin * link.long_term_gain_lin;
        }

        // 5. Near set under the configured metric (no allocation: ids kept in
        // a reused buffer, best first).
        compute_near_ids();

        // 6. Report refresh.  On due slots the controller re-measures every
        // link with a fresh codebook search and the beams found are held for
        // data transmission until the next report.
        const bool due = !initialised_ || t % tracker_->period() == 0;
        if (due) {
            for (int b = 0; b < b_count; ++b) {
                auto& link = links_[static_cast<size_t>(b)];
                const auto best = link.beams.best_pair_power(link_gains(b));
                link.held_tx = best.tx_index;
                link.held_rx = best.rx_index;
                const double rx_sample_lin =
                    link.budget_const_lin * link.pl_geo_lin * best.power;
                const double interference_lin = estimate_interference_lin(b);
                truth_[static_cast<size_t>(b)] = LinkSample{
                    linear_to_db(rx_ls_lin_[static_cast<size_t>(b)]),
                    linear_to_db(rx_sample_lin / (noise_lin_ + interference_lin))};
            }
        }
        const VmmEstimate& estimate = tracker_->refresh(truth_, t);

        // 7. Controller pass.
        const HandoverEvent* handover_for_trace = nullptr;
        const ClusterUpdate* update_for_trace = nullptr;
        HandoverEvent handover_storage;
        if (!initialised_) {
            initialise_serving(estimate, t);
            initialised_ = true;
            controller_dirty_ = true;
        } else if (scheme_ == Scheme::single) {
            auto event = baseline_handover(baseline_, estimate, baseline_params_, t);
            if (event) {
                ++metrics_.handovers;
                handover_storage = *event;
                handover_for_trace = &handover_storage;
            }
        } else if (due || controller_dirty_) {
            update_for_trace = multi_controller_pass(estimate, t);
        }

        // 8. Transmission evaluation over the serving set.
        serving_scratch_.clear();
        if (scheme_ == Scheme::single)
            serving_scratch_.push_back(baseline_.serving);
        else
            serving_scratch_ = cluster_.members;
        if (serving_scratch_.empty())
            throw InvariantError("run_slot: serving set empty");

        const double interference_lin = transmission_interference_lin();
        const bool interrupted =
            scheme_ == Scheme::single && baseline_.interrupted(t);

        double best_sinr_lin = 0.0;
        bool any_satisfied = false;
        scratch_reports_.clear();
        for (int b : serving_scratch_) {
            const auto& link = links_[static_cast<size_t>(b)];
            const std::complex<double> s =
                link.beams.pair_value(link_gains(b), link.held_tx, link.held_rx);
            const double rx_lin =
                link.budget_const_lin * link.pl_geo_lin * std::norm(s);
            const double sinr_lin = rx_lin / (noise_lin_ + interference_lin);
            best_sinr_lin = std::max(best_sinr_lin, sinr_lin);
            any_satisfied = any_satisfied || sinr_lin >= min_sinr_lin_;
            if (sink) {
                SinrReport report;
                report.received_power_dbm = linear_to_db(rx_lin);
                report.interference_dbm = linear_to_db(interference_lin);
                report.noise_dbm = linear_to_db(noise_lin_);
                report.sinr_db = linear_to_db(sinr_lin);
                report.satisfied = sinr_lin >= min_sinr_lin_;
                scratch_reports_.push_back(report);
            }
        }

        SlotOutcome outcome;
        outcome.slot = t;
        outcome.serving_count = static_cast<int>(serving_scratch_.size());
        outcome.best_sinr_db = linear_to_db(best_sinr_lin);
        if (interrupted) {
            outcome.success = false;
            outcome.cause = SlotCause::handover_interruption;
            ++metrics_.interruption_slots;
        } else {
            outcome.success = any_satisfied;
            outcome.cause =
                any_satisfied ? SlotCause::ok : SlotCause::below_threshold;
        }

        ++metrics_.transmitted;
        if (outcome.success) ++metrics_.succeeded;
        metrics_.cluster_size_sum += static_cast<double>(serving_scratch_.size());

        if (sink) {
            TraceRecord record;
            record.speed_kmh = speed_kmh_;
            record.scheme = scheme_;
            record.run_index = run_index_;
            record.outcome = outcome;
            record.serving = serving_scratch_;
            record.anchor = scheme_ == Scheme::single ? baseline_.serving
                                                      : cluster_.anchor;
            record.links = scratch_reports_;
            record.cluster_update = update_for_trace;
            record.handover = handover_for_trace;
            sink(record);
        }

        ++slot_;
        return outcome;
    }

    /// Run the configured number of slots and return the tallies.
    RunMetrics run_all(const TraceSink& sink = {}) {
        while (slot_ < total_slots_) run_slot(sink);
        return metrics_;
    }

    std::int64_t total_slots() const { return total_slots_; }
    std::int64_t slot() const { return slot_; }
    const Vec2& ue_position() const { return ue_.position; }
    const ServingCluster& cluster() const { return cluster_; }
    const BaselineState& baseline() const { return baseline_; }
    const RunMetrics& metrics() const { return metrics_; }
    const VmmEstimate& estimates() const { return tracker_->current(); }
    std::pair<int, int> held_beams(int gnb_id) const {
        const auto& link = links_[static_cast<size_t>(gnb_id)];
        return {link.held_tx, link.held_rx};
    }

  private:
    struct LinkState {
        BeamspaceLink beams;
        double shadow_db = 0.0;
        double budget_const_lin = 0.0;  ///< tx power, attenuation, intercept, shadow
        double long_term_gain_lin = 0.0;
        double pl_geo_lin = 0.0;        ///< d^(-beta), refreshed every slot
        int held_tx = 0;
        int held_rx = 0;
    };

    size_t gain_index(int b, int l) const {
        return static_cast<size_t>(b) * static_cast<size_t>(scenario_.subpath_count) +
               static_cast<size_t>(l);
    }
    std::span<const std::complex<double>> link_gains(int b) const {
        return {gains_.data() + gain_index(b, 0),
                static_cast<size_t>(scenario_.subpath_count)};
    }

    /// Interference as the controller would estimate it while sampling:
    /// every active gNB outside the current serving set leaks its aligned
    /// large-scale budget minus the sidelobe penalty.  For the link being
    /// measured the serving set is taken pre-update.
    double estimate_interference_lin(int measured_gnb) const {
        double total = 0.0;
        for (int b = 0; b < scenario_.gnb_count; ++b) {
            if (b == measured_gnb || !active_[static_cast<size_t>(b)]) continue;
            if (in_serving_set(b)) continue;
            total += rx_ls_lin_[static_cast<size_t>(b)] * penalty_lin_;
        }
        return total;
    }

    double transmission_interference_lin() const {
        double total = 0.0;
        for (int b = 0; b < scenario_.gnb_count; ++b) {
            if (!active_[static_cast<size_t>(b)]) continue;
            bool serving = false;
            for (int s : serving_scratch_)
                if (s == b) { serving = true; break; }
            if (!serving)
                total += rx_ls_lin_[static_cast<size_t>(b)] * penalty_lin_;
        }
        return total;
    }

    bool in_serving_set(int b) const {
        if (!initialised_) return false;
        if (scheme_ == Scheme::single) return baseline_.serving == b;
        return cluster_.contains(b);
    }

    /// Both schemes seed their serving choice from the strongest large-scale
    /// link at the first report, so reduced configurations stay comparable.
    void initialise_serving(const VmmEstimate& estimate, std::int64_t t) {
        int best = 0;
        for (size_t b = 1; b < estimate.links.size(); ++b)
            if (estimate.links[b].link_gain_db >
                estimate.links[static_cast<size_t>(best)].link_gain_db)
                best = static_cast<int>(b);
        if (scheme_ == Scheme::single) {
            baseline_handover(baseline_, estimate, baseline_params_, t);
        } else {
            cluster_.members = {best};
            cluster_.anchor = best;
        }
    }

    void compute_near_ids() {
        near_ids_.clear();
        const int b_count = scenario_.gnb_count;
        const bool by_gain = scenario_.near_set_metric == "channel_gain";
        for (int b = 0; b < b_count; ++b) near_ids_.push_back(b);
        std::sort(near_ids_.begin(), near_ids_.end(), [&](int lhs, int rhs) {
            if (by_gain) {
                const double gl = rx_ls_lin_[static_cast<size_t>(lhs)];
                const double gr = rx_ls_lin_[static_cast<size_t>(rhs)];
                if (gl != gr) return gl > gr;
            } else {
                const double dl = distance(ue_.position,
                                           gnbs_[static_cast<size_t>(lhs)].position);
                const double dr = distance(ue_.position,
                                           gnbs_[static_cast<size_t>(rhs)].position);
                if (dl != dr) return dl < dr;
            }
            return lhs < rhs;
        });
        if (static_cast<int>(near_ids_.size()) > scenario_.near_set_size)
            near_ids_.resize(static_cast<size_t>(scenario_.near_set_size));
    }

    bool in_near_set(int b) const {
        return std::find(near_ids_.begin(), near_ids_.end(), b) != near_ids_.end();
    }

    /// Cluster maintenance: join candidates must clear the enter threshold,
    /// sit in the near set and have a prepared path (one-slot-old prepare).
    /// Runs only when its inputs could have changed; skipped slots are exact
    /// no-ops by construction.
    const ClusterUpdate* multi_controller_pass(const VmmEstimate& estimate,
                                               std::int64_t t) {
        eligible_.clear();
        std::vector<int> to_prepare;
        for (int b : near_ids_) {
            if (cluster_.contains(b)) continue;
            if (estimate.links[static_cast<size_t>(b)].sinr_db <
                thresholds_.enter_db)
                continue;
            if (preparer_.eligible(b, t)) eligible_.push_back(b);
            else to_prepare.push_back(b);
        }
        auto [next, update] =
            update_cluster(cluster_, estimate, thresholds_, t, eligible_);
        cluster_ = std::move(next);
        for (int b : update.additions) preparer_.on_joined(b);
        for (int b : to_prepare) preparer_.prepare(b, cluster_, t);
        if (update.anchor_from != update.anchor_to && update.anchor_from >= 0)
            ++metrics_.handovers;
        controller_dirty_ = !to_prepare.empty() || !update.additions.empty() ||
                            !update.removals.empty();
        if (!update.empty()) {
            last_update_ = update;
            return &last_update_;
        }
        return nullptr;
    }

    Scenario scenario_;
    double speed_kmh_;
    Scheme scheme_;
    int run_index_;
    Xoshiro256pp rng_;
    double speed_mps_ = 0.0;

    std::vector<Gnb> gnbs_;
    Trajectory trajectory_;
    MobilityState mobility_;
    Ue ue_;
    std::vector<LinkState> links_;
    std::vector<std::complex<double>> gains_; ///< [gnb * L + path]
    FadingProcess fading_;
    std::optional<VmmTracker> tracker_;
    ClusterThresholds thresholds_;
    BaselineParams baseline_params_;
    ServingCluster cluster_;
    BaselineState baseline_;
    PathPreparer preparer_;
    ClusterUpdate last_update_;

    double noise_lin_ = 0.0;
    double min_sinr_lin_ = 0.0;
    double penalty_lin_ = 0.0;

    std::vector<LinkSample> truth_;
    std::vector<char> active_;
    std::vector<double> rx_ls_lin_;
    std::vector<int> near_ids_;
    std::vector<int> eligible_;
    std::vector<int> serving_scratch_;
    std::vector<SinrReport> scratch_reports_;

    std::int64_t slot_ = 0;
    std::int64_t total_slots_ = 0;
    bool initialised_ = false;
    bool controller_dirty_ = false;
    RunMetrics metrics_;
};

/// Aggregated sweep row, one per (speed, scheme).
struct AggregateRow {
    double speed_kmh = 0.0;
    std::string scheme;
    int seeds = 0;
    double success_rate_mean = 0.0;
    double success_rate_stderr = 0.0;
    double handovers_mean = 0.0;
    double cluster_size_mean = 0.0;
};

struct SweepResult {
    std::vector<RunMetrics> runs;   ///< every (speed, scheme, run) outcome
    std::vector<AggregateRow> rows; ///< sorted by (speed, scheme name)
};

inline std::vector<Scheme> schemes_of(const Scenario& scenario) {
    switch (scenario.scheme) {
        case SchemeChoice::single: return {Scheme::single};
        case SchemeChoice::multi: return {Scheme::multi};
        default: return {Scheme::single, Scheme::multi};
    }
}

namespace detail {
inline AggregateRow aggregate(std::span<const RunMetrics> runs, double speed_kmh,
                              Scheme scheme) {
    AggregateRow row;
    row.speed_kmh = speed_kmh;
    row.scheme = to_string(scheme);
    std::vector<double> rates;
    for (const auto& run : runs) {
        if (run.speed_kmh != speed_kmh || run.scheme != scheme) continue;
        rates.push_back(run.success_rate());
        row.handovers_mean += static_cast<double>(run.handovers);
        row.cluster_size_mean += run.mean_cluster_size();
    }
    const auto n = static_cast<double>(rates.size());
    row.seeds = static_cast<int>(rates.size());
    if (rates.empty()) return row;
    for (double r : rates) row.success_rate_mean += r;
    row.success_rate_mean /= n;
    row.handovers_mean /= n;
    row.cluster_size_mean /= n;
    if (rates.size() > 1) {
        double ss = 0.0;
        for (double r : rates) {
            const double d = r - row.success_rate_mean;
            ss += d * d;
        }
        row.success_rate_stderr = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return row;
}
} // namespace detail

/// Run the full sweep: every speed, every configured scheme, `seeds`
/// independent runs each.  `jobs` > 1 distributes runs across threads;
/// results are identical regardless because each run is self-seeded.  A
/// trace sink forces single-threaded execution so event order stays
/// deterministic.
inline SweepResult run_scenario(const Scenario& scenario,
                                const TraceSink& sink = {}, int jobs = 1) {
    const auto problems = scenario.validate();
    if (!problems.empty()) throw ConfigError("invalid scenario: " + problems.front());

    const auto schemes = schemes_of(scenario);
    struct Task {
        double speed;
        Scheme scheme;
        int run;
    };
    std::vector<Task> tasks;
    for (double speed : scenario.speed_sweep)
        for (Scheme scheme : schemes)
            for (int run = 0; run < scenario.seeds; ++run)
                tasks.push_back({speed, scheme, run});

    SweepResult result;
    result.runs.resize(tasks.size());

    const int workers = sink ? 1 : std::max(1, jobs);
    if (workers == 1) {
        for (size_t i = 0; i < tasks.size(); ++i) {
            SlotSimulation sim(scenario, tasks[i].speed, tasks[i].scheme,
                               tasks[i].run);
            result.runs[i] = sim.run_all(sink);
        }
    } else {
        std::atomic<size_t> cursor{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        std::exception_ptr first_error;
        std::mutex error_mutex;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const size_t i = cursor.fetch_add(1);
                    if (i >= tasks.size()) return;
                    try {
                        SlotSimulation sim(scenario, tasks[i].speed,
                                           tasks[i].scheme, tasks[i].run);
                        result.runs[i] = sim.run_all();
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        for (auto& thread : pool) thread.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    std::vector<double> speeds = scenario.speed_sweep;
    std::sort(speeds.begin(), speeds.end());
    speeds.erase(std::unique(speeds.begin(), speeds.end()), speeds.end());
    for (double speed : speeds) {
        std::vector<AggregateRow> at_speed;
        for (Scheme scheme : schemes)
            at_speed.push_back(detail::aggregate(result.runs, speed, scheme));
        std::sort(at_speed.begin(), at_speed.end(),
                  [](const AggregateRow& a, const AggregateRow& b) {
                      return a.scheme < b.scheme;
                  });
        for (auto& row : at_speed) result.rows.push_back(std::move(row));
    }
    return result;
}

} // namespace mmwsim
