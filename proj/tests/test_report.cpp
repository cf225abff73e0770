#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmwsim/report.hpp"

using namespace mmwsim;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<AggregateRow> sample_rows() {
    AggregateRow multi;
    multi.speed_kmh = 30.0;
    multi.scheme = "multi";
    multi.seeds = 100;
    multi.success_rate_mean = 0.9591234;
    multi.success_rate_stderr = 0.0012341;
    multi.handovers_mean = 0.25;
    multi.cluster_size_mean = 2.0401;

    AggregateRow single = multi;
    single.scheme = "single";
    single.success_rate_mean = 0.93;
    single.handovers_mean = 1.5;
    single.cluster_size_mean = 1.0;

    AggregateRow multi90 = multi;
    multi90.speed_kmh = 90.0;
    multi90.success_rate_mean = 0.9581;
    AggregateRow single90 = single;
    single90.speed_kmh = 90.0;
    single90.success_rate_mean = 0.9279;

    return {multi, single, multi90, single90};
}

std::string read_file(const fs::path& path) {
    std::ifstream stream(path, std::ios::binary);
    REQUIRE(stream);
    return {std::istreambuf_iterator<char>(stream),
            std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("the results csv carries the exact header and formatting") {
    const std::string csv = results_csv(sample_rows());
    const std::string expected_header =
        "speed_kmh,scheme,seeds,success_rate_mean,success_rate_stderr,"
        "handovers_mean,cluster_size_mean\n";
    REQUIRE(csv.substr(0, expected_header.size()) == expected_header);

    REQUIRE(csv.find("30,multi,100,0.959123,0.001234,0.250000,2.040100\n") !=
            std::string::npos);
    REQUIRE(csv.find("30,single,100,0.930000,0.001234,1.500000,1.000000\n") !=
            std::string::npos);
    REQUIRE(csv.find("90,multi,") != std::string::npos);
    REQUIRE(csv.find('\r') == std::string::npos);
    REQUIRE(csv.back() == '\n');

    const std::string empty = results_csv({});
    REQUIRE(empty == expected_header);
}

TEST_CASE("atomic writes land complete and replace previous content") {
    const fs::path dir = fs::temp_directory_path() / "mmwsim_report_test";
    fs::create_directories(dir);
    const fs::path target = dir / "out.txt";

    write_text_atomic(target, "first\n");
    REQUIRE(read_file(target) == "first\n");
    REQUIRE_FALSE(fs::exists(dir / "out.txt.tmp"));

    write_text_atomic(target, "second\n");
    REQUIRE(read_file(target) == "second\n");

    REQUIRE_THROWS_AS(
        write_text_atomic(dir / "missing_dir" / "out.txt", "content"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("trace records serialise to one json object per line") {
    TraceRecord record;
    record.speed_kmh = 45.0;
    record.scheme = Scheme::multi;
    record.run_index = 3;
    record.outcome.slot = 120;
    record.outcome.success = true;
    record.outcome.cause = SlotCause::ok;
    record.outcome.best_sinr_db = 4.25;
    record.outcome.serving_count = 2;
    record.serving = {0, 1};
    record.anchor = 1;

    const std::string line = jsonl_line(record);
    REQUIRE(line.find('\n') == std::string::npos);

    const json j = json::parse(line);
    REQUIRE(j.at("speed_kmh") == 45.0);
    REQUIRE(j.at("scheme") == "multi");
    REQUIRE(j.at("run") == 3);
    REQUIRE(j.at("slot") == 120);
    REQUIRE(j.at("success") == true);
    REQUIRE(j.at("cause") == "ok");
    REQUIRE(j.at("best_sinr_db") == 4.25);
    REQUIRE(j.at("serving") == json::array({0, 1}));
    REQUIRE(j.at("anchor") == 1);
    REQUIRE_FALSE(j.contains("cluster_update"));
    REQUIRE_FALSE(j.contains("handover"));
}

TEST_CASE("cluster updates and handovers appear when attached") {
    TraceRecord record;
    record.scheme = Scheme::multi;
    record.serving = {0, 2};

    ClusterUpdate update;
    update.additions = {2};
    update.removals = {1};
    update.anchor_from = 1;
    update.anchor_to = 0;
    record.cluster_update = &update;

    const json with_update = json::parse(jsonl_line(record));
    REQUIRE(with_update.at("cluster_update").at("additions") == json::array({2}));
    REQUIRE(with_update.at("cluster_update").at("removals") == json::array({1}));
    REQUIRE(with_update.at("cluster_update").at("anchor_from") == 1);
    REQUIRE(with_update.at("cluster_update").at("anchor_to") == 0);

    TraceRecord swap;
    swap.scheme = Scheme::single;
    swap.serving = {1};
    HandoverEvent event;
    event.slot = 40;
    event.from_gnb = 0;
    event.to_gnb = 1;
    event.interruption_slots = 50;
    swap.handover = &event;

    const json with_handover = json::parse(jsonl_line(swap));
    REQUIRE(with_handover.at("handover").at("from") == 0);
    REQUIRE(with_handover.at("handover").at("to") == 1);
    REQUIRE(with_handover.at("handover").at("interruption_slots") == 50);

    // A trivial update attached by the engine is elided from the line.
    TraceRecord quiet;
    ClusterUpdate trivial;
    quiet.cluster_update = &trivial;
    REQUIRE_FALSE(json::parse(jsonl_line(quiet)).contains("cluster_update"));
}

TEST_CASE("an unreachable sinr serialises as a large negative number") {
    TraceRecord record;
    record.outcome.best_sinr_db = kNegInfDb;
    const json j = json::parse(jsonl_line(record));
    REQUIRE(j.at("best_sinr_db") == -1e9);
}

TEST_CASE("the success figure is a self-contained svg") {
    const std::string svg = render_success_figure(sample_rows());
    REQUIRE(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") == 0);
    REQUIRE(svg.rfind("</svg>\n") == svg.size() - 7);
    REQUIRE(svg.find("Average success rate vs UE speed") != std::string::npos);
    REQUIRE(svg.find("multi-connectivity cluster") != std::string::npos);
    REQUIRE(svg.find("single-connectivity handover") != std::string::npos);
    REQUIRE(svg.find("polyline") != std::string::npos);
    REQUIRE(svg.find("UE speed (km/h)") != std::string::npos);

    // Self-contained: no external fetches, scripts or links.
    REQUIRE(svg.find("http://") == svg.find("http://www.w3.org/2000/svg"));
    REQUIRE(svg.find("https://") == std::string::npos);
    REQUIRE(svg.find("href") == std::string::npos);
    REQUIRE(svg.find("url(") == std::string::npos);
    REQUIRE(svg.find("<script") == std::string::npos);
    REQUIRE(svg.find("@import") == std::string::npos);

    // Speed ticks for every swept speed.
    REQUIRE(svg.find(">30<") != std::string::npos);
    REQUIRE(svg.find(">90<") != std::string::npos);

    const std::string empty = render_success_figure({});
    REQUIRE(empty.find("<svg") == 0);
}

TEST_CASE("the figure survives degenerate inputs") {
    AggregateRow row;
    row.speed_kmh = 30.0;
    row.scheme = "single";
    row.seeds = 1;
    row.success_rate_mean = 1.0;
    row.success_rate_stderr = 0.0;
    const std::vector<AggregateRow> rows = {row};
    const std::string svg = render_success_figure(rows);
    REQUIRE(svg.find("<svg") == 0);
    REQUIRE(svg.find("NaN") == std::string::npos);
    REQUIRE(svg.find("nan") == std::string::npos);
    REQUIRE(svg.find("inf") == std::string::npos);
}
