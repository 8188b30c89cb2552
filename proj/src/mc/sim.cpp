#include "emmlab/sim.hpp"

#include "emmlab/error.hpp"
#include "emmlab/rng.hpp"

#include <cmath>
#include <string>
#include <thread>

namespace emmlab {
namespace {

void require(bool ok, const std::string& field, const std::string& rule) {
    if (!ok) throw ValidationError(field + ": " + rule);
}

void check_per_asset(const std::vector<double>& values, int n_assets, const std::string& field, bool positive) {
    require(values.size() == 1 || values.size() == static_cast<std::size_t>(n_assets), field,
            "expected 1 or n_assets values");
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::string where = field + "[" + std::to_string(i) + "]";
        require(std::isfinite(values[i]), where, "must be finite");
        if (positive) require(values[i] > 0.0, where, "must be > 0");
    }
}

// Drivers need only their own stream, so each is filled independently.
void fill_driver(const SimConfig& c, int i, std::vector<double>& y) {
    const Substream b(c.seed, "B" + std::to_string(i + 1));
    const auto n = static_cast<std::size_t>(c.n_steps);
    const double decay = c.epsilon * c.kappa * c.dt;
    const double vol = std::sqrt(c.epsilon) * c.nu * std::sqrt(c.dt);
    y.assign(n + 1, 0.0);
    y[0] = c.y0_of(i);
    for (std::size_t t = 0; t < n; ++t) y[t + 1] = y[t] - decay * y[t] + vol * b.normal(t);
}

}  // namespace

void SimConfig::validate() const {
    require(n_assets >= 1, "n_assets", "must be >= 1");
    require(std::isfinite(epsilon) && epsilon >= 0.0, "epsilon", "must be >= 0");
    require(std::isfinite(kappa) && kappa > 0.0, "kappa", "must be > 0");
    require(std::isfinite(nu) && nu >= 0.0, "nu", "must be >= 0");
    require(std::isfinite(mu0), "mu0", "must be finite");
    require(std::isfinite(beta), "beta", "must be finite");
    require(std::isfinite(sigma) && sigma >= 0.0, "sigma", "must be >= 0");
    require(std::isfinite(dt) && dt > 0.0, "dt", "must be > 0");
    require(n_steps >= 1, "n_steps", "must be >= 1");
    check_per_asset(y0, n_assets, "y0", false);
    check_per_asset(s0, n_assets, "s0", true);
}

std::vector<double> simulate_driver(const SimConfig& config, int i) {
    config.validate();
    if (i < 0 || i >= config.n_assets) throw RangeError("driver index " + std::to_string(i) + " out of range");
    std::vector<double> y;
    fill_driver(config, i, y);
    return y;
}

PathPanel simulate(const SimConfig& config) {
    config.validate();
    StreamRegistry registry(config.seed);
    const int k = config.n_assets;
    const auto n = static_cast<std::size_t>(config.n_steps);
    for (int i = 0; i < k; ++i) {
        registry.open("B" + std::to_string(i + 1));
        registry.open("W" + std::to_string(i + 1));
    }

    PathPanel panel;
    panel.y.resize(static_cast<std::size_t>(k));
    panel.log_s.resize(static_cast<std::size_t>(k));
    panel.returns.resize(static_cast<std::size_t>(k));

    auto fill_asset = [&](int i) {
        const auto idx = static_cast<std::size_t>(i);
        fill_driver(config, i, panel.y[idx]);
        const Substream w(config.seed, "W" + std::to_string(i + 1));
        const double vol = config.sigma * std::sqrt(config.dt);
        auto& ls = panel.log_s[idx];
        auto& r = panel.returns[idx];
        const auto& y = panel.y[idx];
        ls.assign(n + 1, 0.0);
        r.assign(n, 0.0);
        ls[0] = std::log(config.s0_of(i));
        for (std::size_t t = 0; t < n; ++t) {
            ls[t + 1] = ls[t] + (config.mu0 + config.beta * y[t]) * config.dt + vol * w.normal(t);
            r[t] = ls[t + 1] - ls[t];
        }
    };

    // Each asset owns its driver and both streams, so threads never share
    // state and the schedule cannot change the numbers.
    std::vector<std::thread> pool;
    for (int i = 1; i < k; ++i) pool.emplace_back(fill_asset, i);
    fill_asset(0);
    for (auto& th : pool) th.join();
    return panel;
}

}  // namespace emmlab
