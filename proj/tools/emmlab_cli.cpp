#include "emmlab/emmlab.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

namespace {

// Owns a string handed out by the library.
struct LibString {
    char* p = nullptr;
    ~LibString() { emmlab_string_free(p); }
    char** out() { return &p; }
};

struct TreeHandle {
    emmlab_tree* p = nullptr;
    ~TreeHandle() { emmlab_tree_free(p); }
};

struct ConfigHandle {
    emmlab_config* p = nullptr;
    ~ConfigHandle() { emmlab_config_free(p); }
};

// Prints whatever output exists, then the error for a nonzero status.
int finish(int status, const LibString& text) {
    if (text.p) std::fputs(text.p, stdout);
    if (status != EMMLAB_OK) std::fprintf(stderr, "error: %s\n", emmlab_last_error());
    return status;
}

int fail(int status) {
    std::fprintf(stderr, "error: %s\n", emmlab_last_error());
    return status;
}

struct Caps {
    std::size_t paths = 0;
    std::size_t periods = 0;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Martingale-measure lab: exact finite-tree checks and Monte Carlo Doob-Meyer diagnostics"};
    app.set_version_flag("--version", std::string(emmlab_version()));
    app.require_subcommand(1);

    std::string tree_path, filtration, group, format, config_path, out_dir = "out", caps_text, report_dir;
    bool emit_measure = false;
    int drivers = 3;
    std::uint64_t seed = 0;

    auto* exact = app.add_subcommand("exact", "Exact engine on finite scenario trees");
    exact->require_subcommand(1);
    // Empty until given; each command applies its own default.
    auto add_format = [&](CLI::App* cmd, std::vector<std::string> allowed) {
        cmd->add_option("--format", format, "Output format")->check(CLI::IsMember(allowed));
    };

    auto* check = exact->add_subcommand("check", "Existence, dimension and completeness of the martingale measure set");
    auto* complete = exact->add_subcommand("complete", "Completeness check; fails if no martingale measure exists");
    for (auto* cmd : {check, complete}) {
        cmd->add_option("tree", tree_path, "Scenario tree JSON file")->required();
        cmd->add_option("filtration", filtration, "full | trivial | leak | natural:ID,.. | filtration JSON file")
            ->required();
        cmd->add_option("group", group, "Comma-separated asset ids")->required();
        cmd->add_flag("--emit-measure", emit_measure, "Include the certificate measure");
        add_format(cmd, {"json", "csv"});
    }

    auto* search = exact->add_subcommand("search", "Enumerate filtrations and report the minimal pricing ones");
    search->add_option("tree", tree_path, "Scenario tree JSON file")->required();
    search->add_option("group", group, "Comma-separated asset ids")->required();
    search->add_option("--caps", caps_text, "Enumeration caps as paths,periods");
    add_format(search, {"json", "csv"});

    auto* demo = exact->add_subcommand("demo-obstruction", "Local, pairwise and global constraint satisfiability");
    demo->add_option("--drivers", drivers, "Number of drivers")->check(CLI::Range(1, 3));
    add_format(demo, {"json", "csv"});

    auto* mc = app.add_subcommand("mc", "Monte Carlo simulation and diagnostics");
    mc->require_subcommand(1);
    auto* simulate = mc->add_subcommand("simulate", "Simulate drivers and log prices into paths.csv");
    auto* diagnose = mc->add_subcommand("diagnose", "Simulate, fit all five structures and write diagnostics");
    for (auto* cmd : {simulate, diagnose}) {
        cmd->add_option("config", config_path, "Key-value config file")->required();
        cmd->add_option("--seed", seed, "Override the config seed");
        cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    }
    add_format(diagnose, {"text", "csv", "json"});

    auto* report = app.add_subcommand("report", "Render diagnostics.csv from a run directory");
    report->add_option("dir", report_dir, "Run directory")->required();
    add_format(report, {"text", "csv", "json"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    const bool exact_cmd = exact->parsed();
    if (format.empty()) format = exact_cmd ? "json" : "text";
    LibString out;

    if (check->parsed() || complete->parsed() || search->parsed()) {
        TreeHandle tree;
        if (int s = emmlab_tree_load(tree_path.c_str(), &tree.p)) return fail(s);
        if (search->parsed()) {
            Caps caps;
            if (!caps_text.empty()) {
                const auto comma = caps_text.find(',');
                try {
                    if (comma == std::string::npos) throw std::invalid_argument("missing comma");
                    std::size_t used = 0;
                    caps.paths = std::stoul(caps_text.substr(0, comma), &used);
                    if (used != comma) throw std::invalid_argument("trailing characters");
                    const auto rest = caps_text.substr(comma + 1);
                    caps.periods = std::stoul(rest, &used);
                    if (used != rest.size() || caps.paths == 0 || caps.periods == 0)
                        throw std::invalid_argument("bad value");
                } catch (const std::exception&) {
                    std::cerr << "error: --caps expects two positive integers as paths,periods\n\n" << search->help();
                    return 1;
                }
            }
            return finish(
                emmlab_exact_search(tree.p, group.c_str(), caps.paths, caps.periods, format.c_str(), out.out()), out);
        }
        auto fn = check->parsed() ? emmlab_exact_check : emmlab_exact_complete;
        return finish(fn(tree.p, filtration.c_str(), group.c_str(), emit_measure ? 1 : 0, format.c_str(), out.out()),
                      out);
    }

    if (demo->parsed()) return finish(emmlab_exact_demo_obstruction(drivers, format.c_str(), out.out()), out);

    if (simulate->parsed() || diagnose->parsed()) {
        ConfigHandle config;
        if (int s = emmlab_config_load(config_path.c_str(), &config.p)) return fail(s);
        const auto* cmd = simulate->parsed() ? simulate : diagnose;
        if (cmd->count("--seed")) emmlab_config_set_seed(config.p, seed);
        if (simulate->parsed()) return finish(emmlab_mc_simulate(config.p, out_dir.c_str(), out.out()), out);
        LibString manifest;
        if (int s = emmlab_mc_diagnose(config.p, out_dir.c_str(), manifest.out())) return fail(s);
        return finish(emmlab_report(out_dir.c_str(), format.c_str(), out.out()), out);
    }

    if (report->parsed()) return finish(emmlab_report(report_dir.c_str(), format.c_str(), out.out()), out);

    std::cerr << app.help();
    return 1;
}
