#include "emmlab/doob_meyer.hpp"

#include "emmlab/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

namespace emmlab {
namespace {

// Solves A x = b by Gaussian elimination with partial pivoting; false if a
// pivot vanishes relative to the matrix scale.
bool solve_dense(std::vector<double> a, std::vector<double> b, std::size_t d, std::vector<double>& x) {
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    const double tiny = 1e-13 * std::max(scale, 1e-300);
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < d; ++r)
            if (std::abs(a[r * d + c]) > std::abs(a[p * d + c])) p = r;
        if (std::abs(a[p * d + c]) <= tiny) return false;
        if (p != c) {
            for (std::size_t j = 0; j < d; ++j) std::swap(a[p * d + j], a[c * d + j]);
            std::swap(b[p], b[c]);
        }
        for (std::size_t r = c + 1; r < d; ++r) {
            const double f = a[r * d + c] / a[c * d + c];
            if (f == 0.0) continue;
            for (std::size_t j = c; j < d; ++j) a[r * d + j] -= f * a[c * d + j];
            b[r] -= f * b[c];
        }
    }
    x.assign(d, 0.0);
    for (std::size_t c = d; c-- > 0;) {
        double s = b[c];
        for (std::size_t j = c + 1; j < d; ++j) s -= a[c * d + j] * x[j];
        x[c] = s / a[c * d + c];
    }
    return true;
}

void check_driver(const PathPanel& panel, int d) {
    if (d < 0 || static_cast<std::size_t>(d) >= panel.y.size())
        throw RangeError("driver index " + std::to_string(d) + " out of range");
}

}  // namespace

InformationStructure InformationStructure::price_only() { return {}; }

InformationStructure InformationStructure::local(int driver) {
    InformationStructure s;
    s.kind_ = StructureKind::Local;
    s.a_ = driver;
    return s;
}

InformationStructure InformationStructure::pairwise(int first, int second) {
    if (first == second) throw ValidationError("pairwise structure needs two distinct drivers");
    InformationStructure s;
    s.kind_ = StructureKind::Pairwise;
    s.a_ = first;
    s.b_ = second;
    return s;
}

InformationStructure InformationStructure::global_smoothed(int window) {
    if (window < 3 || window % 2 == 0) throw ValidationError("smoothing window must be odd and >= 3");
    InformationStructure s;
    s.kind_ = StructureKind::GlobalSmoothed;
    s.window_ = window;
    return s;
}

InformationStructure InformationStructure::global_future_leak() {
    InformationStructure s;
    s.kind_ = StructureKind::GlobalFutureLeak;
    return s;
}

std::size_t InformationStructure::first_time() const {
    if (kind_ == StructureKind::GlobalSmoothed) return std::max<std::size_t>(1, static_cast<std::size_t>(window_ / 2));
    return 1;
}

std::size_t InformationStructure::dimension(std::size_t n_drivers) const {
    switch (kind_) {
        case StructureKind::PriceOnly: return 2;
        case StructureKind::Local: return 3;
        case StructureKind::Pairwise: return 4;
        case StructureKind::GlobalSmoothed: return 2 + n_drivers;
        case StructureKind::GlobalFutureLeak: return 2 + 2 * n_drivers;
    }
    return 0;
}

const char* structure_name(StructureKind kind) {
    switch (kind) {
        case StructureKind::PriceOnly: return "price_only";
        case StructureKind::Local: return "local";
        case StructureKind::Pairwise: return "pairwise";
        case StructureKind::GlobalSmoothed: return "global_smoothed";
        case StructureKind::GlobalFutureLeak: return "global_future_leak";
    }
    return "?";
}

StructureKind parse_structure_name(const std::string& name) {
    for (auto k : {StructureKind::PriceOnly, StructureKind::Local, StructureKind::Pairwise,
                   StructureKind::GlobalSmoothed, StructureKind::GlobalFutureLeak})
        if (name == structure_name(k)) return k;
    throw ValidationError("unknown information structure '" + name + "'");
}

std::vector<double> features(const PathPanel& panel, const InformationStructure& info, int asset, std::size_t t) {
    const std::size_t n = panel.n_steps();
    if (asset < 0 || static_cast<std::size_t>(asset) >= panel.n_assets())
        throw RangeError("asset index " + std::to_string(asset) + " out of range");
    if (t < info.first_time() || t >= n)
        throw RangeError("time " + std::to_string(t) + " outside [" + std::to_string(info.first_time()) + ", " +
                         std::to_string(n) + ")");
    std::vector<double> x{1.0, panel.returns[static_cast<std::size_t>(asset)][t - 1]};
    switch (info.kind()) {
        case StructureKind::PriceOnly: break;
        case StructureKind::Local:
            check_driver(panel, info.driver());
            x.push_back(panel.y[static_cast<std::size_t>(info.driver())][t]);
            break;
        case StructureKind::Pairwise:
            check_driver(panel, info.driver());
            check_driver(panel, info.second_driver());
            x.push_back(panel.y[static_cast<std::size_t>(info.driver())][t]);
            x.push_back(panel.y[static_cast<std::size_t>(info.second_driver())][t]);
            break;
        case StructureKind::GlobalSmoothed: {
            const std::size_t h = static_cast<std::size_t>(info.window() / 2);
            const std::size_t hi = std::min(n, t + h);
            for (const auto& y : panel.y) {
                double s = 0.0;
                for (std::size_t u = t - h; u <= hi; ++u) s += y[u];
                x.push_back(s / static_cast<double>(hi - (t - h) + 1));
            }
            break;
        }
        case StructureKind::GlobalFutureLeak:
            for (const auto& y : panel.y) x.push_back(y[t]);
            for (const auto& y : panel.y) x.push_back(y[t + 1] - y[t]);
            break;
    }
    return x;
}

FeatureSeries feature_series(const PathPanel& panel, const InformationStructure& info, int asset) {
    FeatureSeries out;
    out.first = info.first_time();
    const std::size_t n = panel.n_steps();
    if (info.kind() != StructureKind::GlobalSmoothed) {
        for (std::size_t t = out.first; t < n; ++t) out.rows.push_back(features(panel, info, asset, t));
        return out;
    }
    // Running window sums instead of re-averaging at every t.
    const std::size_t h = static_cast<std::size_t>(info.window() / 2);
    const auto& r = panel.returns[static_cast<std::size_t>(asset)];
    std::vector<std::vector<double>> prefix;
    for (const auto& y : panel.y) {
        std::vector<double> p(y.size() + 1, 0.0);
        for (std::size_t u = 0; u < y.size(); ++u) p[u + 1] = p[u] + y[u];
        prefix.push_back(std::move(p));
    }
    for (std::size_t t = out.first; t < n; ++t) {
        const std::size_t lo = t - h;
        const std::size_t hi = std::min(n, t + h);
        std::vector<double> x{1.0, r[t - 1]};
        for (const auto& p : prefix) x.push_back((p[hi + 1] - p[lo]) / static_cast<double>(hi - lo + 1));
        out.rows.push_back(std::move(x));
    }
    return out;
}

std::vector<double> expanding_ols(const std::vector<double>& targets, const FeatureSeries& x, std::size_t warmup,
                                  double ridge) {
    if (!(ridge >= 0.0)) throw ValidationError("ridge must be >= 0");
    const std::size_t n = targets.size();
    if (x.first + x.rows.size() != n) throw ValidationError("feature series does not cover the return series");
    const std::size_t d = x.rows.empty() ? 0 : x.rows.front().size();
    if (warmup < d + 10) throw ValidationError("warmup must be at least feature dimension + 10");

    std::vector<double> m(n, 0.0);
    std::vector<double> xtx(d * d, 0.0), xty(d, 0.0), coef;
    for (std::size_t k = 0; k < x.rows.size(); ++k) {
        const std::size_t t = x.first + k;
        const auto& row = x.rows[k];
        if (t >= warmup) {
            std::vector<double> a = xtx;
            for (std::size_t j = 1; j < d; ++j) a[j * d + j] += ridge;
            if (!solve_dense(std::move(a), xty, d, coef))
                throw EstimationError("normal equations are singular at t=" + std::to_string(t) +
                                      "; use a positive ridge");
            double fit = 0.0;
            for (std::size_t j = 0; j < d; ++j) fit += coef[j] * row[j];
            m[t] = fit;
        }
        for (std::size_t i = 0; i < d; ++i) {
            xty[i] += row[i] * targets[t];
            for (std::size_t j = 0; j < d; ++j) xtx[i * d + j] += row[i] * row[j];
        }
    }
    return m;
}

Decomposition decompose(const std::vector<double>& returns, const std::vector<double>& m_hat, std::size_t warmup) {
    if (returns.size() != m_hat.size()) throw ValidationError("returns and m_hat differ in length");
    Decomposition out;
    const std::size_t n = returns.size();
    out.martingale.resize(n);
    out.a_path.assign(n + 1, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        out.martingale[t] = returns[t] - m_hat[t];
        out.a_path[t + 1] = out.a_path[t] + (t >= warmup ? m_hat[t] : 0.0);
    }
    return out;
}

Diagnostics diagnostics(const std::vector<double>& returns, const std::vector<double>& m_hat, std::size_t warmup) {
    if (returns.size() != m_hat.size()) throw ValidationError("returns and m_hat differ in length");
    if (returns.size() < warmup + 100)
        throw ValidationError("at least 100 post-warmup samples are needed, have " +
                              std::to_string(returns.size() > warmup ? returns.size() - warmup : 0));
    Diagnostics out;
    double abs_sum = 0.0, m2 = 0.0, r2 = 0.0;
    for (std::size_t t = warmup; t < returns.size(); ++t) {
        abs_sum += std::abs(m_hat[t]);
        m2 += m_hat[t] * m_hat[t];
        r2 += returns[t] * returns[t];
        out.m_path.push_back(m_hat[t]);
    }
    const auto count = static_cast<double>(returns.size() - warmup);
    out.mean_abs_m = abs_sum / count;
    out.rms_m = std::sqrt(m2 / count);
    out.degenerate = r2 == 0.0;
    out.fraction_qv = out.degenerate ? 0.0 : m2 / r2;
    out.a_path = decompose(returns, m_hat, warmup).a_path;
    return out;
}

SummaryRow cross_asset_average(const std::vector<Diagnostics>& rows) {
    if (rows.empty()) throw ValidationError("cannot average an empty list of diagnostics");
    SummaryRow out;
    for (const auto& r : rows) {
        out.mean_abs_m += r.mean_abs_m;
        out.rms_m += r.rms_m;
        out.fraction_qv += r.fraction_qv;
    }
    const auto k = static_cast<double>(rows.size());
    out.mean_abs_m /= k;
    out.rms_m /= k;
    out.fraction_qv /= k;
    return out;
}

std::vector<StructureResult> run_structures(const PathPanel& panel, const DiagnoseOptions& options) {
    const int k = static_cast<int>(panel.n_assets());
    if (k < 2) throw ValidationError("diagnostics need at least two assets for the pairwise structure");
    constexpr std::array kinds{StructureKind::PriceOnly, StructureKind::Local, StructureKind::Pairwise,
                               StructureKind::GlobalSmoothed, StructureKind::GlobalFutureLeak};
    auto info_for = [&](StructureKind kind, int i) {
        switch (kind) {
            case StructureKind::PriceOnly: return InformationStructure::price_only();
            case StructureKind::Local: return InformationStructure::local(i);
            case StructureKind::Pairwise: return InformationStructure::pairwise(i, (i + 1) % k);
            case StructureKind::GlobalSmoothed: return InformationStructure::global_smoothed(options.window);
            case StructureKind::GlobalFutureLeak: break;
        }
        return InformationStructure::global_future_leak();
    };
    // Validate structure parameters up front so worker threads never throw on them.
    info_for(StructureKind::GlobalSmoothed, 0);

    std::vector<StructureResult> out;
    for (auto kind : kinds) out.push_back({kind, std::vector<Diagnostics>(static_cast<std::size_t>(k)), {}});

    // One job per (structure, asset), each writing only its own slot.
    std::vector<std::exception_ptr> errors(kinds.size() * static_cast<std::size_t>(k));
    std::vector<std::thread> pool;
    for (std::size_t s = 0; s < kinds.size(); ++s) {
        for (int i = 0; i < k; ++i) {
            pool.emplace_back([&, s, i] {
                try {
                    const auto idx = static_cast<std::size_t>(i);
                    const auto x = feature_series(panel, info_for(kinds[s], i), i);
                    const auto m = expanding_ols(panel.returns[idx], x, options.warmup, options.ridge);
                    out[s].per_asset[idx] = diagnostics(panel.returns[idx], m, options.warmup);
                } catch (...) {
                    errors[s * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)] = std::current_exception();
                }
            });
        }
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (auto& r : out) r.average = cross_asset_average(r.per_asset);
    return out;
}

}  // namespace emmlab
