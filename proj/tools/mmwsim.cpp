// Command line front end: run sweeps, validate scenario files, and print
// standalone link budgets.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmwsim/mmwsim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitIo = 4;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream)
        throw mmwsim::IoError("cannot read scenario file " + path.string());
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    if (stream.bad())
        throw mmwsim::IoError("error while reading " + path.string());
    return buffer.str();
}

mmwsim::Scenario load_scenario(const std::string& path) {
    if (path.empty()) return mmwsim::Scenario{};
    return mmwsim::scenario_from_text(read_file(path));
}

struct RunOptions {
    std::string scenario_path;
    std::vector<double> speeds;
    int seeds = -1;
    std::optional<std::uint64_t> base_seed;
    std::string scheme;
    std::string out_dir = ".";
    bool trace = false;
    bool quiet = false;
    int jobs = 1;
};

void apply_overrides(mmwsim::Scenario& scenario, const RunOptions& options) {
    if (!options.speeds.empty()) scenario.speed_sweep = options.speeds;
    if (options.seeds > 0) scenario.seeds = options.seeds;
    if (options.base_seed) scenario.base_seed = *options.base_seed;
    if (!options.scheme.empty()) {
        if (options.scheme == "single") scenario.scheme = mmwsim::SchemeChoice::single;
        else if (options.scheme == "multi") scenario.scheme = mmwsim::SchemeChoice::multi;
        else if (options.scheme == "both") scenario.scheme = mmwsim::SchemeChoice::both;
        else throw mmwsim::ConfigError("scheme must be single, multi or both");
    }
}

int report_problems(const std::vector<std::string>& problems) {
    for (const auto& problem : problems)
        std::cerr << "error: " << problem << "\n";
    return kExitConfig;
}

int cmd_run(const RunOptions& options) {
    mmwsim::Scenario scenario = load_scenario(options.scenario_path);
    apply_overrides(scenario, options);
    const auto problems = scenario.validate();
    if (!problems.empty()) return report_problems(problems);

    const std::filesystem::path out_dir(options.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw mmwsim::IoError("cannot create output directory " +
                              out_dir.string() + ": " + ec.message());

    const auto started = std::chrono::steady_clock::now();
    mmwsim::SweepResult result;
    const std::filesystem::path events_path = out_dir / "events.jsonl";
    if (options.trace) {
        const std::filesystem::path tmp = events_path.string() + ".tmp";
        {
            std::ofstream events(tmp, std::ios::binary | std::ios::trunc);
            if (!events)
                throw mmwsim::IoError("cannot open " + tmp.string() +
                                      " for writing");
            mmwsim::TraceSink sink = [&events](const mmwsim::TraceRecord& record) {
                events << mmwsim::jsonl_line(record) << '\n';
            };
            try {
                result = mmwsim::run_scenario(scenario, sink, options.jobs);
            } catch (...) {
                events.close();
                std::filesystem::remove(tmp);
                throw;
            }
            if (!events)
                throw mmwsim::IoError("write failed for " + tmp.string());
        }
        std::filesystem::rename(tmp, events_path, ec);
        if (ec) {
            std::filesystem::remove(tmp);
            throw mmwsim::IoError("cannot move " + tmp.string() +
                                  " into place: " + ec.message());
        }
    } else {
        result = mmwsim::run_scenario(scenario, {}, options.jobs);
    }
    const auto elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    const std::string csv = mmwsim::results_csv(result.rows);
    mmwsim::write_text_atomic(out_dir / "results.csv", csv);
    mmwsim::write_text_atomic(out_dir / "figure_success_rate.svg",
                              mmwsim::render_success_figure(result.rows));

    if (!options.quiet) {
        std::cout << csv;
        std::printf("completed %zu runs in %.1f s\n", result.runs.size(),
                    elapsed);
        std::cout << "wrote " << (out_dir / "results.csv").string() << "\n";
        std::cout << "wrote " << (out_dir / "figure_success_rate.svg").string()
                  << "\n";
        if (options.trace)
            std::cout << "wrote " << events_path.string() << "\n";
    }
    return kExitOk;
}

int cmd_validate(const std::string& scenario_path) {
    mmwsim::Scenario scenario = load_scenario(scenario_path);
    std::vector<std::string> problems = scenario.validate();
    if (scenario.association) {
        const auto violations = mmwsim::validate_constraints(*scenario.association);
        for (const auto& violation : violations) {
            std::ostringstream what;
            if (violation.kind == mmwsim::Violation::Kind::inactive_serving)
                what << "association: gNB " << violation.gnb
                     << " serves user " << violation.user
                     << " but is marked inactive";
            else
                what << "association: user " << violation.user
                     << " has no effective serving gNB";
            problems.push_back(what.str());
        }
    }
    if (!problems.empty()) return report_problems(problems);
    std::cout << mmwsim::scenario_to_json(scenario).dump(2) << "\n";
    std::cout << "ok\n";
    return kExitOk;
}

struct LinkBudgetOptions {
    std::string scenario_path;
    double distance_m = 0.0;
    double gain_db = 0.0;
    double delta_db = 0.0;
    double shadow_db = 0.0;
    std::optional<double> tx_power_dbm;
    std::optional<double> min_sinr_db;
};

int cmd_linkbudget(const LinkBudgetOptions& options) {
    mmwsim::Scenario scenario = load_scenario(options.scenario_path);
    const auto problems = scenario.validate();
    if (!problems.empty()) return report_problems(problems);

    const mmwsim::PathLossParams params{scenario.pathloss_intercept_db,
                                        scenario.pathloss_exponent};
    const double tx_power =
        options.tx_power_dbm ? *options.tx_power_dbm : scenario.tx_power_dbm;
    const double min_sinr =
        options.min_sinr_db ? *options.min_sinr_db : scenario.min_sinr_db;

    const double pl = mmwsim::path_loss(params, options.distance_m,
                                        options.shadow_db);
    const auto budget = mmwsim::received_power(tx_power, options.gain_db,
                                               options.delta_db, pl);
    const double noise = mmwsim::noise_power(scenario.bandwidth_hz(),
                                             scenario.noise_dbm_hz);
    const auto report = mmwsim::sinr(budget.received_power_dbm, mmwsim::kNegInfDb,
                                     noise, min_sinr);

    std::printf("distance_m: %g\n", options.distance_m);
    std::printf("tx_power_dbm: %g\n", tx_power);
    std::printf("beamforming_gain_db: %g\n", options.gain_db);
    std::printf("attenuation_db: %g\n", options.delta_db);
    std::printf("shadow_db: %g\n", options.shadow_db);
    std::printf("path_loss_db: %g\n", pl);
    std::printf("received_power_dbm: %g\n", budget.received_power_dbm);
    std::printf("noise_dbm: %g\n", noise);
    std::printf("sinr_db: %g\n", report.sinr_db);
    std::printf("min_sinr_db: %g\n", min_sinr);
    std::printf("satisfied: %s\n", report.satisfied ? "yes" : "no");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Slotted simulator of a coordinated mmWave downlink: "
                 "multi-connectivity clusters vs hard handover for a mobile "
                 "cell-edge user"};
    app.require_subcommand(1);

    RunOptions run_options;
    auto* run = app.add_subcommand("run", "Run the speed sweep experiment");
    run->add_option("--scenario", run_options.scenario_path,
                    "Scenario JSON file (defaults apply when omitted)");
    run->add_option("--speeds", run_options.speeds,
                    "Override the speed sweep, km/h (comma separated)")
        ->delimiter(',');
    run->add_option("--seeds", run_options.seeds,
                    "Override the number of runs per sweep point");
    run->add_option("--seed", run_options.base_seed, "Override the base seed");
    run->add_option("--scheme", run_options.scheme,
                    "Scheme selection: single, multi or both");
    run->add_option("--out", run_options.out_dir,
                    "Output directory (default: current directory)");
    run->add_flag("--trace", run_options.trace,
                  "Write a per-slot event log to events.jsonl");
    run->add_flag("--quiet", run_options.quiet, "Suppress progress output");
    run->add_option("--jobs", run_options.jobs,
                    "Worker threads (runs stay bit-identical regardless)");

    std::string validate_path;
    auto* validate =
        app.add_subcommand("validate", "Check a scenario file and echo the "
                                       "effective configuration");
    validate->add_option("--scenario", validate_path, "Scenario JSON file");

    LinkBudgetOptions lb_options;
    auto* linkbudget = app.add_subcommand(
        "linkbudget", "Print the link budget chain for one distance");
    linkbudget->add_option("--scenario", lb_options.scenario_path,
                           "Scenario JSON file for the radio parameters");
    linkbudget
        ->add_option("--distance", lb_options.distance_m, "Link distance in m")
        ->required();
    linkbudget->add_option("--gain-db", lb_options.gain_db,
                           "Beamforming gain in dB (default 0)");
    linkbudget->add_option("--delta-db", lb_options.delta_db,
                           "Subpath attenuation in dB (default 0)");
    linkbudget->add_option("--shadow-db", lb_options.shadow_db,
                           "Shadow fading term in dB (default 0)");
    linkbudget->add_option("--tx-power", lb_options.tx_power_dbm,
                           "Transmit power override in dBm");
    linkbudget->add_option("--min-sinr", lb_options.min_sinr_db,
                           "Decode threshold override in dB");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(run_options);
        if (validate->parsed()) return cmd_validate(validate_path);
        if (linkbudget->parsed()) return cmd_linkbudget(lb_options);
    } catch (const mmwsim::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const mmwsim::InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const mmwsim::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return kExitOk;
}
