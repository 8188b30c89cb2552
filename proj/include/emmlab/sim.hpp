#pragma once

#include <cstdint>
#include <vector>

namespace emmlab {

// Slow OU drivers and log prices loaded on them, one driver per asset:
//   dY_i    = -eps kappa Y_i dt + sqrt(eps) nu dB_i
//   dlog S_i = (mu0 + beta Y_i) dt + sigma dW_i
struct SimConfig {
    int n_assets = 3;
    double epsilon = 0.05;
    double kappa = 1.0;
    double nu = 0.3;
    double mu0 = 0.0;
    double beta = 0.5;
    double sigma = 0.25;
    double dt = 1.0 / 252.0;
    std::int64_t n_steps = 2520;
    std::uint64_t seed = 0;
    // One value per asset; a single value is broadcast.
    std::vector<double> y0{0.0};
    std::vector<double> s0{1.0};

    // Throws ValidationError naming the offending field.
    void validate() const;
    double y0_of(int i) const { return y0.size() == 1 ? y0[0] : y0[static_cast<std::size_t>(i)]; }
    double s0_of(int i) const { return s0.size() == 1 ? s0[0] : s0[static_cast<std::size_t>(i)]; }
    bool operator==(const SimConfig&) const = default;
};

struct PathPanel {
    std::vector<std::vector<double>> y;        // [driver][0..n]
    std::vector<std::vector<double>> log_s;    // [asset][0..n]
    std::vector<std::vector<double>> returns;  // [asset][0..n-1], log_s[t+1] - log_s[t]

    std::size_t n_steps() const { return returns.empty() ? 0 : returns.front().size(); }
    std::size_t n_assets() const { return log_s.size(); }
};

// Euler-Maruyama with left-endpoint drift. Stream labels are "B<i>" and
// "W<i>" (1-based); step t uses draw t of each stream.
PathPanel simulate(const SimConfig& config);

// Driver i (0-based) alone, for long runs that do not need prices.
std::vector<double> simulate_driver(const SimConfig& config, int i);

}  // namespace emmlab
