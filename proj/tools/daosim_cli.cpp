// daosim: replay governance scenarios and flash-loan attacks from scenario files.
//
//   daosim run <scenario>... [--out report.csv] [--workers N] [--no-timing]
//   daosim sweep <scenario>... [same flags]        (every file needs a [sweep] section)
//   daosim validate <scenario>...
//
// Exit codes: 0 success, 1 parse/validation failure, 2 runtime scenario error.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <daosim/harness.hpp>

namespace {

constexpr int exit_invalid = 1;
constexpr int exit_runtime = 2;

struct Options {
    std::vector<std::string> files;
    std::string out;
    unsigned workers = 1;
    bool no_timing = false;
};

int load_all(const std::vector<std::string>& files, std::vector<daosim::ScenarioConfig>& configs)
{
    for (const auto& f : files) {
        try {
            configs.push_back(daosim::load_scenario(f));
        } catch (const daosim::error& e) {
            std::cerr << daosim::to_string(e.code()) << ": " << e.what() << '\n';
            return exit_invalid;
        }
    }
    return 0;
}

int execute(const Options& opt, bool require_sweep)
{
    std::vector<daosim::ScenarioConfig> configs;
    if (int rc = load_all(opt.files, configs))
        return rc;
    if (require_sweep) {
        for (const auto& c : configs) {
            if (!c.sweep) {
                std::cerr << "ValidationError: scenario " << c.id << " has no [sweep] section\n";
                return exit_invalid;
            }
        }
    }
    try {
        const auto rows = daosim::run_all(configs, {opt.workers});
        if (opt.out.empty())
            daosim::write_csv(rows, std::cout, !opt.no_timing);
        else
            daosim::emit_csv(rows, opt.out, !opt.no_timing);
    } catch (const daosim::error& e) {
        std::cerr << daosim::to_string(e.code()) << ": " << e.what() << '\n';
        return exit_runtime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return 0;
}

void add_run_flags(CLI::App* cmd, Options& opt)
{
    cmd->add_option("scenario", opt.files, "Scenario file(s)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out, "Write the CSV report here instead of stdout");
    cmd->add_option("--workers", opt.workers, "Parallel sweep workers")->check(CLI::Range(1u, 1024u));
    cmd->add_flag("--no-timing", opt.no_timing, "Leave the wall_time_ms column empty");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Governance voting and flash-loan attack simulator"};
    app.require_subcommand(1);

    Options run_opt;
    Options sweep_opt;
    std::vector<std::string> validate_files;

    auto* run_cmd = app.add_subcommand("run", "Run scenarios and emit a CSV report");
    add_run_flags(run_cmd, run_opt);
    auto* sweep_cmd = app.add_subcommand("sweep", "Run scenarios that carry a [sweep] section");
    add_run_flags(sweep_cmd, sweep_opt);
    auto* validate_cmd = app.add_subcommand("validate", "Parse and check scenario files");
    validate_cmd->add_option("scenario", validate_files, "Scenario file(s)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_invalid;
    }

    if (*run_cmd)
        return execute(run_opt, false);
    if (*sweep_cmd)
        return execute(sweep_opt, true);

    std::vector<daosim::ScenarioConfig> configs;
    if (int rc = load_all(validate_files, configs))
        return rc;
    for (const auto& c : configs)
        std::cout << c.id << ": ok\n";
    return 0;
}
