#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmwsim/errors.hpp"
#include "mmwsim/scenario.hpp"

using namespace mmwsim;
using nlohmann::json;

TEST_CASE("defaults describe the reference setup") {
    const Scenario sc;
    REQUIRE(sc.carrier_ghz == 28.0);
    REQUIRE(sc.bandwidth_ghz == 1.0);
    REQUIRE(sc.tx_power_dbm == 37.0);
    REQUIRE(sc.shadow_sigma_db == 8.2);
    REQUIRE(sc.noise_dbm_hz == -174.0);
    REQUIRE(sc.min_sinr_db == -10.0);
    REQUIRE(sc.pathloss_intercept_db == 72.0);
    REQUIRE(sc.pathloss_exponent == 2.92);
    REQUIRE(sc.subpath_count == 2);
    REQUIRE(sc.n_tx == 16);
    REQUIRE(sc.n_rx == 4);
    REQUIRE(sc.sidelobe_penalty_db == 20.0);
    REQUIRE(sc.gnb_count == 3);
    REQUIRE(sc.cell_radius_m == 100.0);
    REQUIRE(sc.users_per_cell == 100);
    REQUIRE(sc.background_activity_prob == 0.5);
    REQUIRE(sc.near_set_size == 3);
    REQUIRE(sc.near_set_metric == "distance");
    REQUIRE(sc.slot_duration_ms == 1.0);
    REQUIRE(sc.reporting_period_slots == 5);
    REQUIRE(sc.enter_threshold_db == -5.0);
    REQUIRE(sc.exit_threshold_db == -13.0);
    REQUIRE(sc.handover_hysteresis_db == 3.0);
    REQUIRE(sc.time_to_trigger_slots == 100);
    REQUIRE(sc.interruption_slots == 50);
    REQUIRE(sc.speed_sweep == std::vector<double>{30, 45, 60, 75, 90});
    REQUIRE(sc.scheme == SchemeChoice::both);
    REQUIRE(sc.seeds == 100);
    REQUIRE(sc.base_seed == 1);
    REQUIRE(sc.total_slots == -1);
    REQUIRE(sc.trajectory_waypoints.empty());
    REQUIRE(sc.edge_offset_factor == 0.9);
    REQUIRE_FALSE(sc.association.has_value());
    REQUIRE(sc.validate().empty());
    REQUIRE(sc.carrier_hz() == 28e9);
    REQUIRE(sc.bandwidth_hz() == 1e9);
    REQUIRE(sc.slot_duration_s() == 1e-3);
}

TEST_CASE("an empty object yields the defaults") {
    const Scenario sc = scenario_from_text("{}");
    const Scenario ref;
    REQUIRE(sc.carrier_ghz == ref.carrier_ghz);
    REQUIRE(sc.speed_sweep == ref.speed_sweep);
    REQUIRE(sc.total_slots == ref.total_slots);
    REQUIRE(sc.validate().empty());
}

TEST_CASE("overrides apply and the rest keeps its defaults") {
    const Scenario sc = scenario_from_text(R"({
        "tx_power_dbm": 30.0,
        "speed_sweep": [10, 20],
        "scheme": "single",
        "seeds": 7,
        "total_slots": 500,
        "near_set_metric": "channel_gain"
    })");
    REQUIRE(sc.tx_power_dbm == 30.0);
    REQUIRE(sc.speed_sweep == std::vector<double>{10, 20});
    REQUIRE(sc.scheme == SchemeChoice::single);
    REQUIRE(sc.seeds == 7);
    REQUIRE(sc.total_slots == 500);
    REQUIRE(sc.near_set_metric == "channel_gain");
    REQUIRE(sc.carrier_ghz == 28.0);
    REQUIRE(sc.gnb_count == 3);
}

TEST_CASE("unknown keys are rejected by name") {
    try {
        scenario_from_text(R"({"carrier_ghzz": 28})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(std::string(e.what()).find("carrier_ghzz") != std::string::npos);
    }
}

TEST_CASE("wrongly typed values are rejected by key") {
    try {
        scenario_from_text(R"({"seeds": "many"})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(std::string(e.what()).find("seeds") != std::string::npos);
    }
    REQUIRE_THROWS_AS(scenario_from_text(R"({"speed_sweep": 30})"), ConfigError);
    REQUIRE_THROWS_AS(scenario_from_text(R"({"scheme": "dual"})"), ConfigError);
    REQUIRE_THROWS_AS(scenario_from_text(R"([1, 2])"), ConfigError);
}

TEST_CASE("total_slots accepts a count or the auto sentinel") {
    REQUIRE(scenario_from_text(R"({"total_slots": 100})").total_slots == 100);
    REQUIRE(scenario_from_text(R"({"total_slots": "auto"})").total_slots == -1);
    REQUIRE_THROWS_AS(scenario_from_text(R"({"total_slots": 0})"), ConfigError);
    REQUIRE_THROWS_AS(scenario_from_text(R"({"total_slots": -5})"), ConfigError);
    REQUIRE_THROWS_AS(scenario_from_text(R"({"total_slots": "forever"})"),
                      ConfigError);
}

TEST_CASE("trajectory accepts the auto keyword or waypoints") {
    const Scenario autoed = scenario_from_text(R"({"trajectory": "auto-edge"})");
    REQUIRE(autoed.trajectory_waypoints.empty());

    const Scenario listed =
        scenario_from_text(R"({"trajectory": [[-100, 90], [500, 90]]})");
    REQUIRE(listed.trajectory_waypoints.size() == 2);
    REQUIRE(listed.trajectory_waypoints[0].x == -100.0);
    REQUIRE(listed.trajectory_waypoints[1].y == 90.0);

    REQUIRE_THROWS_AS(scenario_from_text(R"({"trajectory": "line"})"), ConfigError);
    REQUIRE_THROWS_AS(scenario_from_text(R"({"trajectory": [[1, 2, 3]]})"),
                      ConfigError);
    REQUIRE_THROWS_AS(scenario_from_text(R"({"trajectory": 5})"), ConfigError);
}

TEST_CASE("syntax errors carry the parser diagnostics") {
    try {
        scenario_from_text("{\"seeds\": 5,}");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(std::string(e.what()).find("parse error") != std::string::npos);
    }
}

TEST_CASE("validation collects every problem at once") {
    Scenario sc;
    sc.carrier_ghz = 0;
    sc.seeds = 0;
    sc.speed_sweep = {30, -5};
    sc.enter_threshold_db = -20;
    const std::vector<std::string> problems = sc.validate();
    REQUIRE(problems.size() == 4);
    auto mentions = [&](const std::string& fragment) {
        return std::any_of(problems.begin(), problems.end(),
                           [&](const std::string& p) {
                               return p.find(fragment) != std::string::npos;
                           });
    };
    REQUIRE(mentions("carrier_ghz"));
    REQUIRE(mentions("seeds"));
    REQUIRE(mentions("speed_sweep"));
    REQUIRE(mentions("enter_threshold_db"));
}

TEST_CASE("the auto trajectory needs at least two cells") {
    Scenario sc;
    sc.gnb_count = 1;
    REQUIRE_FALSE(sc.validate().empty());
    sc.trajectory_waypoints = {{0, 0}, {10, 0}};
    REQUIRE(sc.validate().empty());
}

TEST_CASE("association blocks parse into binary state") {
    const Scenario sc = scenario_from_text(R"({
        "gnb_count": 2,
        "association": {
            "serving":  [[1, 0], [0, 1]],
            "near_set": [[1, 1], [0, 1]],
            "activity": [1, 1]
        }
    })");
    REQUIRE(sc.association.has_value());
    const AssociationState& a = *sc.association;
    REQUIRE(a.users == 2);
    REQUIRE(a.gnbs == 2);
    REQUIRE(a.serving[a.link(0, 0)] == 1);
    REQUIRE(a.serving[a.link(0, 1)] == 0);
    REQUIRE(a.near_set[a.link(1, 1)] == 1);
    REQUIRE(a.activity == std::vector<char>{1, 1});
    REQUIRE(sc.validate().empty());
}

TEST_CASE("malformed association blocks are rejected") {
    REQUIRE_THROWS_AS(scenario_from_text(R"({"association": {"serving": [[1]]}})"),
                      ConfigError);
    REQUIRE_THROWS_AS(scenario_from_text(R"({
        "association": {"serving": [[2]], "near_set": [[1]], "activity": [1]}
    })"),
                      ConfigError);
    REQUIRE_THROWS_AS(scenario_from_text(R"({
        "association": {"serving": [[1, 0]], "near_set": [[1]], "activity": [1]}
    })"),
                      ConfigError);
    REQUIRE_THROWS_AS(scenario_from_text(R"({
        "association": {"serving": [[1]], "near_set": [[1]], "activity": [1],
                        "extra": 3}
    })"),
                      ConfigError);

    // Dimension mismatch against the deployment is a validation problem.
    const Scenario sc = scenario_from_text(R"({
        "gnb_count": 3,
        "association": {"serving": [[1]], "near_set": [[1]], "activity": [1]}
    })");
    REQUIRE_FALSE(sc.validate().empty());
}

TEST_CASE("the normalised echo round-trips") {
    Scenario sc;
    sc.tx_power_dbm = 33.0;
    sc.scheme = SchemeChoice::multi;
    sc.trajectory_waypoints = {{0, 0}, {40, 30}};
    sc.total_slots = 1234;

    const json echoed = scenario_to_json(sc);
    const Scenario back = scenario_from_json(echoed);
    REQUIRE(back.tx_power_dbm == 33.0);
    REQUIRE(back.scheme == SchemeChoice::multi);
    REQUIRE(back.trajectory_waypoints.size() == 2);
    REQUIRE(back.trajectory_waypoints[1].x == 40.0);
    REQUIRE(back.total_slots == 1234);
    REQUIRE(scenario_to_json(back) == echoed);

    // The auto sentinels echo as their keywords and parse back.
    const Scenario defaults;
    const json echo = scenario_to_json(defaults);
    REQUIRE(echo.at("total_slots") == "auto");
    REQUIRE(echo.at("trajectory") == "auto-edge");
    const Scenario reparsed = scenario_from_json(echo);
    REQUIRE(reparsed.total_slots == -1);
    REQUIRE(reparsed.trajectory_waypoints.empty());
    REQUIRE(scenario_to_json(reparsed) == echo);
}
