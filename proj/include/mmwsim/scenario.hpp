#pragma once

// Scenario configuration: defaults, JSON loading with strict key checking,
// semantic validation and a normalised echo for inspection.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmwsim/errors.hpp"
#include "mmwsim/topology.hpp"

namespace mmwsim {

enum class SchemeChoice { single, multi, both };

inline std::string to_string(SchemeChoice choice) {
    switch (choice) {
        case SchemeChoice::single: return "single";
        case SchemeChoice::multi: return "multi";
        default: return "both";
    }
}

/// Full experiment description.  Every field has a default reproducing the
/// reference setup: three 100 m cells in a row, a cell-edge traversal, and a
/// speed sweep from 30 to 90 km/h.
struct Scenario {
    // Radio
    double carrier_ghz = 28.0;
    double bandwidth_ghz = 1.0;
    double tx_power_dbm = 37.0;
    double shadow_sigma_db = 8.2;
    double noise_dbm_hz = -174.0;
    double min_sinr_db = -10.0;
    double pathloss_intercept_db = 72.0;
    double pathloss_exponent = 2.92;
    int subpath_count = 2;
    double subpath_attenuation_db = 0.0;
    int n_tx = 16;
    int n_rx = 4;
    double sidelobe_penalty_db = 20.0;

    // Deployment and load
    int gnb_count = 3;
    double cell_radius_m = 100.0;
    int users_per_cell = 100;
    double background_activity_prob = 0.5;
    int near_set_size = 3;
    std::string near_set_metric = "distance";

    // Control plane
    double slot_duration_ms = 1.0;
    int reporting_period_slots = 5;
    double enter_threshold_db = -5.0;
    double exit_threshold_db = -13.0;
    double handover_hysteresis_db = 3.0;
    int time_to_trigger_slots = 100;
    int interruption_slots = 50;

    // Experiment
    std::vector<double> speed_sweep = {30, 45, 60, 75, 90}; ///< km/h
    SchemeChoice scheme = SchemeChoice::both;
    int seeds = 100;
    std::uint64_t base_seed = 1;
    std::int64_t total_slots = -1; ///< -1: full traversal at each speed
    std::vector<Vec2> trajectory_waypoints; ///< empty: auto cell-edge line
    double edge_offset_factor = 0.9;

    /// Optional pre-seeded association state, checked by validation only.
    std::optional<AssociationState> association;

    double carrier_hz() const { return carrier_ghz * 1e9; }
    double bandwidth_hz() const { return bandwidth_ghz * 1e9; }
    double slot_duration_s() const { return slot_duration_ms * 1e-3; }

    /// Range and consistency checks.  Returns every problem found.
    std::vector<std::string> validate() const {
        std::vector<std::string> problems;
        auto require = [&](bool ok, const std::string& what) {
            if (!ok) problems.push_back(what);
        };
        require(carrier_ghz > 0, "carrier_ghz must be > 0");
        require(bandwidth_ghz > 0, "bandwidth_ghz must be > 0");
        require(shadow_sigma_db >= 0, "shadow_sigma_db must be >= 0");
        require(pathloss_exponent > 0, "pathloss_exponent must be > 0");
        require(subpath_count >= 1, "subpath_count must be >= 1");
        require(n_tx >= 1 && n_rx >= 1, "n_tx and n_rx must be >= 1");
        require(sidelobe_penalty_db >= 0, "sidelobe_penalty_db must be >= 0");
        require(gnb_count >= 1, "gnb_count must be >= 1");
        require(cell_radius_m > 0, "cell_radius_m must be > 0");
        require(users_per_cell >= 0, "users_per_cell must be >= 0");
        require(background_activity_prob >= 0 && background_activity_prob <= 1,
                "background_activity_prob must be in [0, 1]");
        require(near_set_size >= 1, "near_set_size must be >= 1");
        require(near_set_metric == "distance" || near_set_metric == "channel_gain",
                "near_set_metric must be \"distance\" or \"channel_gain\"");
        require(slot_duration_ms > 0, "slot_duration_ms must be > 0");
        require(reporting_period_slots >= 1, "reporting_period_slots must be >= 1");
        require(enter_threshold_db > exit_threshold_db,
                "enter_threshold_db must exceed exit_threshold_db");
        require(handover_hysteresis_db >= 0, "handover_hysteresis_db must be >= 0");
        require(time_to_trigger_slots >= 0, "time_to_trigger_slots must be >= 0");
        require(interruption_slots >= 0, "interruption_slots must be >= 0");
        require(!speed_sweep.empty(), "speed_sweep must not be empty");
        for (double v : speed_sweep)
            require(v > 0, "speed_sweep entries must be > 0");
        require(seeds >= 1, "seeds must be >= 1");
        require(total_slots == -1 || total_slots >= 1,
                "total_slots must be >= 1 when given");
        if (!trajectory_waypoints.empty()) {
            require(trajectory_waypoints.size() >= 2,
                    "trajectory needs at least 2 waypoints");
            for (size_t i = 1; i < trajectory_waypoints.size(); ++i)
                require(trajectory_waypoints[i].x != trajectory_waypoints[i - 1].x ||
                            trajectory_waypoints[i].y != trajectory_waypoints[i - 1].y,
                        "trajectory waypoints must be pairwise distinct in sequence");
        } else {
            require(gnb_count >= 2,
                    "auto edge trajectory needs gnb_count >= 2 "
                    "(or give explicit trajectory waypoints)");
        }
        if (association) {
            const auto& assoc = *association;
            require(assoc.users >= 1 && assoc.gnbs >= 1,
                    "association block must have users >= 1 and gnbs >= 1");
            require(assoc.gnbs == gnb_count,
                    "association block gnb dimension must match gnb_count");
        }
        return problems;
    }
};

namespace detail {

inline const std::vector<std::string>& scenario_keys() {
    static const std::vector<std::string> keys = {
        "carrier_ghz", "bandwidth_ghz", "tx_power_dbm", "shadow_sigma_db",
        "noise_dbm_hz", "min_sinr_db", "pathloss_intercept_db",
        "pathloss_exponent", "subpath_count", "subpath_attenuation_db", "n_tx",
        "n_rx", "sidelobe_penalty_db", "gnb_count", "cell_radius_m",
        "users_per_cell", "background_activity_prob", "near_set_size",
        "near_set_metric", "slot_duration_ms", "reporting_period_slots",
        "enter_threshold_db", "exit_threshold_db", "handover_hysteresis_db",
        "time_to_trigger_slots", "interruption_slots", "speed_sweep", "scheme",
        "seeds", "base_seed", "total_slots", "trajectory", "edge_offset_factor",
        "association"};
    return keys;
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("scenario key \"") + key +
                          "\" has the wrong type");
    }
}

inline std::vector<std::vector<char>> read_binary_matrix(const nlohmann::json& j,
                                                         const char* key) {
    std::vector<std::vector<char>> rows;
    for (const auto& row : j.at(key)) {
        std::vector<char> r;
        for (const auto& cell : row) {
            const int v = cell.get<int>();
            if (v != 0 && v != 1)
                throw ConfigError(std::string("association \"") + key +
                                  "\" entries must be 0 or 1");
            r.push_back(static_cast<char>(v));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

inline AssociationState read_association(const nlohmann::json& j) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "serving" && key != "near_set" && key != "activity")
            throw ConfigError("unknown key \"" + key + "\" in association block");
    }
    if (!j.contains("serving") || !j.contains("near_set") ||
        !j.contains("activity"))
        throw ConfigError(
            "association block needs \"serving\", \"near_set\" and \"activity\"");
    try {
        const auto serving = read_binary_matrix(j, "serving");
        const auto near = read_binary_matrix(j, "near_set");
        std::vector<char> activity;
        for (const auto& cell : j.at("activity")) {
            const int v = cell.get<int>();
            if (v != 0 && v != 1)
                throw ConfigError("association \"activity\" entries must be 0 or 1");
            activity.push_back(static_cast<char>(v));
        }
        const int users = static_cast<int>(serving.size());
        const int gnbs = static_cast<int>(activity.size());
        AssociationState state(users, gnbs);
        if (near.size() != serving.size())
            throw ConfigError("association matrices must have equal row counts");
        for (int u = 0; u < users; ++u) {
            if (static_cast<int>(serving[static_cast<size_t>(u)].size()) != gnbs ||
                static_cast<int>(near[static_cast<size_t>(u)].size()) != gnbs)
                throw ConfigError(
                    "association rows must all have one entry per gNB");
            for (int b = 0; b < gnbs; ++b) {
                state.serving[state.link(u, b)] =
                    serving[static_cast<size_t>(u)][static_cast<size_t>(b)];
                state.near_set[state.link(u, b)] =
                    near[static_cast<size_t>(u)][static_cast<size_t>(b)];
            }
        }
        state.activity = activity;
        return state;
    } catch (const ConfigError&) {
        throw;
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("association block is malformed");
    }
}

} // namespace detail

/// Build a Scenario from parsed JSON.  Unknown keys are rejected; absent
/// keys keep their defaults.
inline Scenario scenario_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ConfigError("scenario file must contain a JSON object");
    const auto& known = detail::scenario_keys();
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown scenario key \"" + key + "\"");
    }

    Scenario sc;
    detail::read_field(j, "carrier_ghz", sc.carrier_ghz);
    detail::read_field(j, "bandwidth_ghz", sc.bandwidth_ghz);
    detail::read_field(j, "tx_power_dbm", sc.tx_power_dbm);
    detail::read_field(j, "shadow_sigma_db", sc.shadow_sigma_db);
    detail::read_field(j, "noise_dbm_hz", sc.noise_dbm_hz);
    detail::read_field(j, "min_sinr_db", sc.min_sinr_db);
    detail::read_field(j, "pathloss_intercept_db", sc.pathloss_intercept_db);
    detail::read_field(j, "pathloss_exponent", sc.pathloss_exponent);
    detail::read_field(j, "subpath_count", sc.subpath_count);
    detail::read_field(j, "subpath_attenuation_db", sc.subpath_attenuation_db);
    detail::read_field(j, "n_tx", sc.n_tx);
    detail::read_field(j, "n_rx", sc.n_rx);
    detail::read_field(j, "sidelobe_penalty_db", sc.sidelobe_penalty_db);
    detail::read_field(j, "gnb_count", sc.gnb_count);
    detail::read_field(j, "cell_radius_m", sc.cell_radius_m);
    detail::read_field(j, "users_per_cell", sc.users_per_cell);
    detail::read_field(j, "background_activity_prob", sc.background_activity_prob);
    detail::read_field(j, "near_set_size", sc.near_set_size);
    detail::read_field(j, "near_set_metric", sc.near_set_metric);
    detail::read_field(j, "slot_duration_ms", sc.slot_duration_ms);
    detail::read_field(j, "reporting_period_slots", sc.reporting_period_slots);
    detail::read_field(j, "enter_threshold_db", sc.enter_threshold_db);
    detail::read_field(j, "exit_threshold_db", sc.exit_threshold_db);
    detail::read_field(j, "handover_hysteresis_db", sc.handover_hysteresis_db);
    detail::read_field(j, "time_to_trigger_slots", sc.time_to_trigger_slots);
    detail::read_field(j, "interruption_slots", sc.interruption_slots);
    detail::read_field(j, "speed_sweep", sc.speed_sweep);
    detail::read_field(j, "seeds", sc.seeds);
    detail::read_field(j, "base_seed", sc.base_seed);
    detail::read_field(j, "edge_offset_factor", sc.edge_offset_factor);

    if (j.contains("total_slots") && j.at("total_slots").is_string()) {
        // "auto" round-trips the normalised echo of the -1 sentinel.
        if (j.at("total_slots").get<std::string>() != "auto")
            throw ConfigError("total_slots must be a positive count or \"auto\"");
    } else {
        detail::read_field(j, "total_slots", sc.total_slots);
        if (j.contains("total_slots") && sc.total_slots < 1)
            throw ConfigError("total_slots must be >= 1 when given");
    }

    if (j.contains("scheme")) {
        std::string scheme;
        detail::read_field(j, "scheme", scheme);
        if (scheme == "single") sc.scheme = SchemeChoice::single;
        else if (scheme == "multi") sc.scheme = SchemeChoice::multi;
        else if (scheme == "both") sc.scheme = SchemeChoice::both;
        else throw ConfigError("scheme must be \"single\", \"multi\" or \"both\"");
    }
    if (j.contains("trajectory")) {
        const auto& t = j.at("trajectory");
        if (t.is_string()) {
            if (t.get<std::string>() != "auto-edge")
                throw ConfigError(
                    "trajectory must be \"auto-edge\" or a waypoint list");
        } else if (t.is_array()) {
            for (const auto& wp : t) {
                if (!wp.is_array() || wp.size() != 2)
                    throw ConfigError("trajectory waypoints must be [x, y] pairs");
                sc.trajectory_waypoints.push_back(
                    {wp[0].get<double>(), wp[1].get<double>()});
            }
        } else {
            throw ConfigError("trajectory must be \"auto-edge\" or a waypoint list");
        }
    }
    if (j.contains("association"))
        sc.association = detail::read_association(j.at("association"));
    return sc;
}

/// Parse scenario JSON text.  Syntax errors are reported with the byte
/// offset nlohmann supplies.
inline Scenario scenario_from_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("scenario parse error: ") + e.what());
    }
    return scenario_from_json(j);
}

/// Normalised scenario echo: every effective value, defaults included.  The
/// optional association block is validation-only input and is not echoed.
inline nlohmann::json scenario_to_json(const Scenario& sc) {
    nlohmann::json j;
    j["carrier_ghz"] = sc.carrier_ghz;
    j["bandwidth_ghz"] = sc.bandwidth_ghz;
    j["tx_power_dbm"] = sc.tx_power_dbm;
    j["shadow_sigma_db"] = sc.shadow_sigma_db;
    j["noise_dbm_hz"] = sc.noise_dbm_hz;
    j["min_sinr_db"] = sc.min_sinr_db;
    j["pathloss_intercept_db"] = sc.pathloss_intercept_db;
    j["pathloss_exponent"] = sc.pathloss_exponent;
    j["subpath_count"] = sc.subpath_count;
    j["subpath_attenuation_db"] = sc.subpath_attenuation_db;
    j["n_tx"] = sc.n_tx;
    j["n_rx"] = sc.n_rx;
    j["sidelobe_penalty_db"] = sc.sidelobe_penalty_db;
    j["gnb_count"] = sc.gnb_count;
    j["cell_radius_m"] = sc.cell_radius_m;
    j["users_per_cell"] = sc.users_per_cell;
    j["background_activity_prob"] = sc.background_activity_prob;
    j["near_set_size"] = sc.near_set_size;
    j["near_set_metric"] = sc.near_set_metric;
    j["slot_duration_ms"] = sc.slot_duration_ms;
    j["reporting_period_slots"] = sc.reporting_period_slots;
    j["enter_threshold_db"] = sc.enter_threshold_db;
    j["exit_threshold_db"] = sc.exit_threshold_db;
    j["handover_hysteresis_db"] = sc.handover_hysteresis_db;
    j["time_to_trigger_slots"] = sc.time_to_trigger_slots;
    j["interruption_slots"] = sc.interruption_slots;
    j["speed_sweep"] = sc.speed_sweep;
    j["scheme"] = to_string(sc.scheme);
    j["seeds"] = sc.seeds;
    j["base_seed"] = sc.base_seed;
    if (sc.total_slots < 0) j["total_slots"] = "auto";
    else j["total_slots"] = sc.total_slots;
    if (sc.trajectory_waypoints.empty()) {
        j["trajectory"] = "auto-edge";
    } else {
        auto list = nlohmann::json::array();
        for (const auto& wp : sc.trajectory_waypoints)
            list.push_back({wp.x, wp.y});
        j["trajectory"] = list;
    }
    j["edge_offset_factor"] = sc.edge_offset_factor;
    return j;
}

} // namespace mmwsim
