#include "maxlab/errors.hpp"
#include "maxlab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <tuple>

namespace maxlab::lab {

namespace {

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
    bool ok = false;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    Line l;
    if (!(sxx > 0.0)) return l;
    l.slope = sxy / sxx;
    l.intercept = my - l.slope * mx;
    l.ok = true;
    return l;
}

/// Linear interpolation between order statistics.
double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

RateFitReport fit_rate(const std::vector<RatePair>& pairs, std::uint64_t seed, int resamples) {
    if (pairs.size() < 4) throw DataError("fit_rate: need at least 4 pairs, got " + std::to_string(pairs.size()));
    for (const auto& p : pairs) {
        if (!(p.delta_xi > 0.0) || !std::isfinite(p.delta_xi))
            throw DataError("fit_rate: delta_xi must be positive and finite");
        if (!(p.error > 0.0) || !std::isfinite(p.error))
            throw DataError("fit_rate: non-positive error (identical runs?)");
    }
    if (resamples < 1) throw DataError("fit_rate: need at least one bootstrap resample");

    std::vector<double> x, y;
    for (const auto& p : pairs) {
        x.push_back(std::log(p.delta_xi));
        y.push_back(std::log(p.error));
    }
    const Line fit = least_squares(x, y);
    if (!fit.ok) throw DataError("fit_rate: all delta_xi are equal");

    RateFitReport r;
    r.pairs = pairs;
    r.slope = fit.slope;
    r.intercept = fit.intercept;
    r.constant = std::exp(fit.intercept);
    for (const auto& p : pairs) r.constant_unit_slope = std::max(r.constant_unit_slope, p.error / p.delta_xi);
    r.resamples = resamples;
    r.seed = seed;

    std::mt19937_64 rng(seed);
    const auto n = pairs.size();
    std::vector<double> slopes;
    slopes.reserve(static_cast<std::size_t>(resamples));
    std::vector<double> bx(n), by(n);
    while (slopes.size() < static_cast<std::size_t>(resamples)) {
        for (std::size_t k = 0; k < n; ++k) {
            const auto idx = static_cast<std::size_t>(rng() % n);
            bx[k] = x[idx];
            by[k] = y[idx];
        }
        const Line b = least_squares(bx, by);
        if (b.ok) slopes.push_back(b.slope);  // resamples with a single distinct delta carry no slope
    }
    r.slope_ci_low = percentile(slopes, 0.025);
    r.slope_ci_high = percentile(slopes, 0.975);
    return r;
}

nlohmann::json to_json(const RateFitReport& r) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : r.pairs) pairs.push_back({{"delta_xi", p.delta_xi}, {"error", p.error}});
    return {{"pairs", pairs},
            {"slope", r.slope},
            {"intercept", r.intercept},
            {"slope_ci", {r.slope_ci_low, r.slope_ci_high}},
            {"constant", r.constant},
            {"constant_unit_slope", r.constant_unit_slope},
            {"bootstrap_resamples", r.resamples},
            {"seed", r.seed}};
}

std::vector<GroupFit> fit_results(const std::vector<ResultRow>& rows, std::uint64_t seed) {
    struct Key {
        std::string scenario;
        double xi_2;
        bool operator<(const Key& o) const { return std::tie(scenario, xi_2) < std::tie(o.scenario, o.xi_2); }
    };
    struct Acc {
        double error = 0.0;
        double t = -1.0;
    };
    // Keeps first-appearance order of groups and of xi_1 within a group.
    std::vector<Key> order;
    std::map<Key, std::vector<double>> xi_order;
    std::map<Key, std::map<double, Acc>> acc;
    for (const auto& row : rows) {
        if (!row.xi_1 || !row.xi_2 || !row.t || !row.l2_diff) continue;
        const Key key{row.scenario, *row.xi_2};
        if (!acc.count(key)) order.push_back(key);
        auto& group = acc[key];
        if (!group.count(*row.xi_1)) xi_order[key].push_back(*row.xi_1);
        Acc& a = group[*row.xi_1];
        const bool sup = row.scenario.rfind("shear", 0) == 0;
        if (sup) {
            a.error = std::max(a.error, *row.l2_diff);
        } else if (*row.t >= a.t) {
            a.t = *row.t;
            a.error = *row.l2_diff;
        }
    }
    if (order.empty()) throw DataError("fit_results: no sweep rows with xi_1, xi_2, t and l2_diff");

    std::vector<GroupFit> out;
    for (const auto& key : order) {
        std::vector<RatePair> pairs;
        for (double xi1 : xi_order[key]) {
            const double e = acc[key][xi1].error;
            if (e <= 1e-12) continue;
            pairs.push_back({std::abs(xi1 - key.xi_2), e});
        }
        out.push_back({key.scenario, key.xi_2, fit_rate(pairs, seed)});
    }
    return out;
}

}  // namespace maxlab::lab
