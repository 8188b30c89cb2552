// One PASS/FAIL line per acceptance criterion. Run all, or one with
// --criterion <name>; the exit code is nonzero if any selected criterion fails.

#include "support/properties.hpp"

#include "emmlab/doob_meyer.hpp"
#include "emmlab/lab.hpp"
#include "emmlab/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <sys/wait.h>

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Run {
    int code = -1;
    std::string out;
};

Run run_cli(const std::string& args) {
    Run r;
    FILE* pipe = popen((std::string(EMMLAB_CLI) + " " + args + " 2>/dev/null").c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<double> cross_asset_qv(const emmlab::SimConfig& config) {
    std::vector<double> out;
    for (const auto& r : emmlab::run_structures(emmlab::simulate(config))) out.push_back(r.average.fraction_qv);
    return out;
}

Outcome exact_oracle() {
    const auto start = Clock::now();
    const auto tally = testsupport::feasibility_agreement(1001, 200);
    const double secs = seconds_since(start);
    return {tally.clean() && tally.instances == 200 && secs < 60.0,
            "feasibility agrees with the vertex oracle on " + tally.summary() + " trees in " + fmt("%.2f", secs) +
                " s (limit 60 s)"};
}

Outcome property_suites() {
    const auto t = testsupport::property_suite(1002, 200);
    const bool ok = t.reduction.clean() && t.tower.clean() && t.restriction.clean() && t.aggregation.clean() &&
                    t.scaling.clean();
    return {ok, "reduction " + t.reduction.summary() + ", tower " + t.tower.summary() + ", restriction " +
                    t.restriction.summary() + ", aggregation " + t.aggregation.summary() + ", scaling " +
                    t.scaling.summary()};
}

Outcome minimality() {
    const auto tally = testsupport::minimality_suite(1003, 100);
    const auto cli = run_cli(std::string("exact search ") + EMMLAB_TEST_DATA + "/binomial.json S1");
    return {tally.clean() && cli.code == 0,
            "unique minimal = meet = natural on " + tally.summary() + " trees; CLI search exit " +
                std::to_string(cli.code)};
}

Outcome completeness() {
    const auto t = testsupport::property_suite(1004, 300);
    return {t.completeness.clean() && t.completeness.instances >= 300,
            "is_complete == (affine_dimension == 0) on " + t.completeness.summary() + " feasible instances"};
}

Outcome obstruction() {
    const auto start = Clock::now();
    bool ok = true;
    std::string detail;
    for (int d : {3, 1, 2}) {
        const auto r = run_cli("exact demo-obstruction --drivers " + std::to_string(d));
        if (r.code != 0) {
            ok = false;
            detail += "drivers " + std::to_string(d) + ": exit " + std::to_string(r.code) + "; ";
            continue;
        }
        const auto j = nlohmann::json::parse(r.out);
        int singles = 0, pairs = 0;
        for (const auto& row : j["rows"]) {
            const bool sat = row["satisfiable"];
            const auto size = row["must_contain"].size();
            if (size == 1 && sat) ++singles;
            if (size == 2 && sat) ++pairs;
        }
        const bool global = j["global"]["satisfiable"];
        const bool want_global = d < 3;
        const bool row_ok = singles == d && pairs == d * (d - 1) / 2 && global == want_global;
        ok = ok && row_ok;
        detail += "drivers " + std::to_string(d) + ": local " + std::to_string(singles) + "/" + std::to_string(d) +
                  ", pairwise " + std::to_string(pairs) + "/" + std::to_string(d * (d - 1) / 2) + ", global " +
                  (global ? "satisfiable" : "unsatisfiable") + "; ";
    }
    const double secs = seconds_since(start);
    ok = ok && secs < 30.0;
    return {ok, detail + fmt("%.2f s (limit 30 s)", secs)};
}

Outcome leak_mechanism() {
    const auto scenario = emmlab::build_three_driver_tree();
    const auto& leak = scenario.metadata.candidate("global_future_leak").filtration;
    const emmlab::AssetGroup group(scenario.tree, scenario.metadata.assets);
    const auto witness = emmlab::anticipativity_witness(scenario.tree, leak);
    const bool absent = !emmlab::emm_exists(scenario.tree, leak, group, {emmlab::NumericMode::Exact}).has_value();
    return {witness.has_value() && absent,
            std::string("global_future_leak ") + (witness ? "anticipative at t=" + std::to_string(witness->t) : "adapted") +
                ", EMM " + (absent ? "absent" : "exists")};
}

Outcome mc_ordering() {
    const auto start = Clock::now();
    int leak_wins = 0, ordered = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        emmlab::SimConfig c;
        c.seed = seed;
        const auto q = cross_asset_qv(c);
        if (q[4] > q[0]) ++leak_wins;
        if (q[0] <= q[1] && q[1] <= q[2] && q[2] <= q[3] && q[3] <= q[4]) ++ordered;
    }
    const double secs = seconds_since(start);
    return {leak_wins == 10 && ordered >= 7 && secs < 60.0,
            "leak > price-only in " + std::to_string(leak_wins) + "/10 seeds, full weak ordering in " +
                std::to_string(ordered) + "/10 (need 7), " + fmt("%.2f s (limit 60 s)", secs)};
}

Outcome magnitude() {
    const auto q = cross_asset_qv(emmlab::SimConfig{});
    const bool price = q[0] >= 1e-5 && q[0] <= 5e-3;
    const bool leak = q[4] >= 2e-3 && q[4] <= 1e-1;
    return {price && leak, "price-only " + fmt("%.3e", q[0]) + " in [1e-5, 5e-3], future-leak " + fmt("%.3e", q[4]) +
                               " in [2e-3, 1e-1]"};
}

Outcome beta_null() {
    double worst = 0.0;
    int worst_seed = -1, worst_structure = -1, breaches = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        emmlab::SimConfig c;
        c.seed = seed;
        c.beta = 0.0;
        const auto q = cross_asset_qv(c);
        for (std::size_t s = 0; s < q.size(); ++s) {
            if (q[s] >= 5e-3) ++breaches;
            if (q[s] > worst) {
                worst = q[s];
                worst_seed = static_cast<int>(seed);
                worst_structure = static_cast<int>(s);
            }
        }
    }
    return {breaches == 0,
            std::to_string(breaches) + "/50 (seed, structure) pairs at or above 5e-3; max " + fmt("%.3e", worst) +
                " (" + emmlab::structure_name(static_cast<emmlab::StructureKind>(worst_structure)) + ", seed " +
                std::to_string(worst_seed) + ")"};
}

Outcome ou_variance() {
    emmlab::SimConfig c;
    c.n_steps = 5'040'000;
    const double target = c.nu * c.nu / (2.0 * c.kappa);
    bool ok = true;
    std::string detail = "target " + fmt("%.4f", target) + ";";
    for (int i = 0; i < c.n_assets; ++i) {
        const auto y = emmlab::simulate_driver(c, i);
        const std::size_t from = y.size() / 2;
        double mean = 0.0;
        for (std::size_t t = from; t < y.size(); ++t) mean += y[t];
        mean /= static_cast<double>(y.size() - from);
        double var = 0.0;
        for (std::size_t t = from; t < y.size(); ++t) var += (y[t] - mean) * (y[t] - mean);
        var /= static_cast<double>(y.size() - from - 1);
        const double ratio = var / target;
        ok = ok && ratio >= 0.8 && ratio <= 1.2;
        detail += " Y" + std::to_string(i + 1) + " " + fmt("%.4f", var) + " (ratio " + fmt("%.3f", ratio) + ")";
    }
    return {ok, detail + " over the last half of 5040000 steps"};
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "emmlab_acceptance_determinism";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    {
        std::ofstream cfg(dir / "default.cfg");
        cfg << "# defaults\n";
    }
    const auto cfg = (dir / "default.cfg").string();
    const auto a = run_cli("mc diagnose " + cfg + " --out " + (dir / "a").string());
    const auto b = run_cli("mc diagnose " + cfg + " --out " + (dir / "b").string());
    bool ok = a.code == 0 && b.code == 0;
    int identical = 0;
    for (const char* f : {"paths.csv", "diagnostics.csv", "at_paths.csv", "m_hist.csv"}) {
        const auto x = slurp(dir / "a" / f);
        const bool same = !x.empty() && x == slurp(dir / "b" / f);
        ok = ok && same;
        identical += same;
    }
    std::filesystem::remove_all(dir);
    return {ok, std::to_string(identical) + "/4 CSVs byte-identical across two mc diagnose runs"};
}

const std::vector<Criterion> criteria{
    {"exact_oracle", exact_oracle},   {"property_suites", property_suites}, {"minimality", minimality},
    {"completeness", completeness},   {"obstruction", obstruction},         {"leak_mechanism", leak_mechanism},
    {"mc_ordering", mc_ordering},     {"magnitude", magnitude},             {"beta_null", beta_null},
    {"ou_variance", ou_variance},     {"determinism", determinism},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::string only;
    std::vector<std::string> names;
    for (const auto& c : criteria) names.push_back(c.name);
    app.add_option("--criterion", only, "Run a single criterion")->check(CLI::IsMember(names));
    CLI11_PARSE(app, argc, argv);

    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && only != c.name) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
