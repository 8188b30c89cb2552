#include "emmlab/emmlab.h"

#include "emmlab/asset_group.hpp"
#include "emmlab/error.hpp"
#include "emmlab/lab.hpp"
#include "emmlab/mc_io.hpp"
#include "emmlab/reports.hpp"
#include "emmlab/tree_io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

struct emmlab_tree {
    emmlab::ScenarioTree tree;
};

struct emmlab_config {
    emmlab::SimConfig config;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int fail(int status, const std::string& message) {
    last_error = message;
    return status;
}

// Runs body, mapping library exceptions onto status codes.
template <class F>
int guarded(F&& body) {
    last_error.clear();
    try {
        return body();
    } catch (const emmlab::BudgetError& e) {
        return fail(EMMLAB_ERR_BUDGET, e.what());
    } catch (const std::exception& e) {
        return fail(EMMLAB_ERR_INPUT, e.what());
    } catch (...) {
        return fail(EMMLAB_ERR_INPUT, "unknown error");
    }
}

void require(const void* p, const char* what) {
    if (!p) throw emmlab::ValidationError(std::string(what) + " is null");
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw emmlab::IoError("cannot write '" + path.string() + "'");
    out << body;
    if (!out) throw emmlab::IoError("write failed for '" + path.string() + "'");
}

template <class Writer, class... Args>
void write_csv(const std::filesystem::path& path, Writer writer, const Args&... args) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw emmlab::IoError("cannot write '" + path.string() + "'");
    writer(out, args...);
    if (!out) throw emmlab::IoError("write failed for '" + path.string() + "'");
}

std::filesystem::path prepare_dir(const char* out_dir) {
    require(out_dir, "out_dir");
    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw emmlab::IoError("cannot create '" + dir.string() + "': " + ec.message());
    return dir;
}

std::string finish_manifest(const std::filesystem::path& dir, const std::string& command,
                            const emmlab::SimConfig& config, std::vector<std::string> outputs) {
    outputs.push_back("manifest.json");
    const auto text = emmlab::manifest_json(
        {command, emmlab::config_digest(config), config.seed, EMMLAB_VERSION, std::move(outputs)});
    write_file(dir / "manifest.json", text);
    return text;
}

emmlab::ReportFormat format_of(const char* format) {
    return emmlab::parse_report_format(format ? format : "json");
}

int exact_query(const emmlab_tree* tree, const char* filtration, const char* group, int emit_measure,
                const char* format, char** text_out, bool need_feasible) {
    return guarded([&] {
        require(tree, "tree");
        require(filtration, "filtration");
        require(group, "group");
        require(text_out, "text_out");
        const auto fmt = format_of(format);
        const emmlab::AssetGroup g(tree->tree, emmlab::split_ids(group));
        const auto f = emmlab::resolve_filtration(tree->tree, filtration);
        if (need_feasible && !emmlab::emm_exists(tree->tree, f, g))
            throw emmlab::PreconditionError("no equivalent martingale measure exists for group " + g.label() +
                                            " on filtration '" + filtration + "'");
        *text_out = dup(emmlab::emm_query_report(tree->tree, f, filtration, g, emit_measure != 0, fmt));
        return EMMLAB_OK;
    });
}

}  // namespace

extern "C" {

const char* emmlab_version(void) { return EMMLAB_VERSION; }

const char* emmlab_last_error(void) { return last_error.c_str(); }

void emmlab_string_free(char* text) { std::free(text); }

int emmlab_tree_load(const char* path, emmlab_tree** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new emmlab_tree{emmlab::load_tree_file(path)};
        return EMMLAB_OK;
    });
}

int emmlab_tree_parse(const char* json, emmlab_tree** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = new emmlab_tree{emmlab::parse_tree_json(json)};
        return EMMLAB_OK;
    });
}

void emmlab_tree_free(emmlab_tree* tree) { delete tree; }

int emmlab_exact_check(const emmlab_tree* tree, const char* filtration, const char* group, int emit_measure,
                       const char* format, char** text_out) {
    return exact_query(tree, filtration, group, emit_measure, format, text_out, false);
}

int emmlab_exact_complete(const emmlab_tree* tree, const char* filtration, const char* group, int emit_measure,
                          const char* format, char** text_out) {
    return exact_query(tree, filtration, group, emit_measure, format, text_out, true);
}

int emmlab_exact_search(const emmlab_tree* tree, const char* group, size_t max_paths, size_t max_periods,
                        const char* format, char** text_out) {
    return guarded([&]() -> int {
        require(tree, "tree");
        require(group, "group");
        require(text_out, "text_out");
        const auto fmt = format_of(format);
        const emmlab::AssetGroup g(tree->tree, emmlab::split_ids(group));
        emmlab::LabOptions options;
        if (max_paths) options.caps.max_paths = max_paths;
        if (max_periods) options.caps.max_periods = max_periods;
        const auto report = emmlab::minimality_report(tree->tree, g, options);
        *text_out = dup(emmlab::minimality_report_text(tree->tree, g, report, fmt));
        if (report.theorem_violation)
            return fail(EMMLAB_THEOREM_VIOLATION,
                        "minimal pricing-feasible filtration is not unique or differs from the natural filtration");
        return EMMLAB_OK;
    });
}

int emmlab_exact_demo_obstruction(int drivers, const char* format, char** text_out) {
    return guarded([&] {
        require(text_out, "text_out");
        const auto fmt = format_of(format);
        if (drivers < 1 || drivers > 3) throw emmlab::ValidationError("drivers must be 1, 2 or 3");
        emmlab::ObstructionConfig config;
        config.drivers = drivers;
        const auto scenario = emmlab::build_three_driver_tree(config);
        const auto report = emmlab::obstruction_report(scenario.tree, scenario.metadata,
                                                       emmlab::default_constraints(scenario.metadata));
        *text_out = dup(emmlab::obstruction_report_text(report, fmt));
        return EMMLAB_OK;
    });
}

int emmlab_config_load(const char* path, emmlab_config** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new emmlab_config{emmlab::load_config(path)};
        return EMMLAB_OK;
    });
}

int emmlab_config_parse(const char* text, emmlab_config** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new emmlab_config{emmlab::parse_config(text)};
        return EMMLAB_OK;
    });
}

void emmlab_config_free(emmlab_config* config) { delete config; }

void emmlab_config_set_seed(emmlab_config* config, uint64_t seed) {
    if (config) config->config.seed = seed;
}

int emmlab_config_text(const emmlab_config* config, char** text_out) {
    return guarded([&] {
        require(config, "config");
        require(text_out, "text_out");
        *text_out = dup(emmlab::config_to_text(config->config));
        return EMMLAB_OK;
    });
}

int emmlab_config_digest(const emmlab_config* config, char** digest_out) {
    return guarded([&] {
        require(config, "config");
        require(digest_out, "digest_out");
        *digest_out = dup(emmlab::config_digest(config->config));
        return EMMLAB_OK;
    });
}

int emmlab_mc_simulate(const emmlab_config* config, const char* out_dir, char** manifest_out) {
    return guarded([&] {
        require(config, "config");
        const auto dir = prepare_dir(out_dir);
        const auto panel = emmlab::simulate(config->config);
        write_csv(dir / "paths.csv", emmlab::write_paths_csv, panel);
        const auto manifest = finish_manifest(dir, "mc simulate", config->config, {"paths.csv"});
        if (manifest_out) *manifest_out = dup(manifest);
        return EMMLAB_OK;
    });
}

int emmlab_mc_diagnose(const emmlab_config* config, const char* out_dir, char** manifest_out) {
    return guarded([&] {
        require(config, "config");
        const auto dir = prepare_dir(out_dir);
        const auto panel = emmlab::simulate(config->config);
        const auto results = emmlab::run_structures(panel);
        write_csv(dir / "paths.csv", emmlab::write_paths_csv, panel);
        write_csv(dir / "diagnostics.csv", emmlab::write_diagnostics_csv, results);
        write_csv(dir / "at_paths.csv", emmlab::write_at_paths_csv, results);
        write_csv(dir / "m_hist.csv", emmlab::write_m_hist_csv, results);
        const auto manifest = finish_manifest(dir, "mc diagnose", config->config,
                                              {"paths.csv", "diagnostics.csv", "at_paths.csv", "m_hist.csv"});
        if (manifest_out) *manifest_out = dup(manifest);
        return EMMLAB_OK;
    });
}

int emmlab_report(const char* dir, const char* format, char** text_out) {
    return guarded([&] {
        require(dir, "dir");
        require(text_out, "text_out");
        const std::string fmt = format ? format : "text";
        if (fmt != "text" && fmt != "csv" && fmt != "json")
            throw emmlab::ValidationError("unknown format '" + fmt + "' (expected text, csv or json)");
        const auto path = std::filesystem::path(dir) / "diagnostics.csv";
        std::ifstream in(path);
        if (!in) throw emmlab::IoError("cannot read '" + path.string() + "'");
        const auto rows = emmlab::read_diagnostics_csv(in);
        *text_out = dup(fmt == "csv"    ? emmlab::render_report_csv(rows)
                        : fmt == "json" ? emmlab::render_report_json(rows)
                                        : emmlab::render_report(rows));
        return EMMLAB_OK;
    });
}

}  // extern "C"
