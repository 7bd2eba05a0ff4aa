#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "latflow/oracle.hpp"

namespace latflow {

// Sorted sample of uncensored observations plus the censored count; the
// censored ones never enter the ECDF but stay visible for rate reporting.
struct EmpiricalDist {
    std::vector<double> values;  // sorted ascending
    long long censored = 0;

    static EmpiricalDist from(std::vector<double> v, long long censored_count = 0) {
        std::sort(v.begin(), v.end());
        return EmpiricalDist{std::move(v), censored_count};
    }

    long long n() const { return static_cast<long long>(values.size()); }
    double censoring_rate() const {
        const double total = static_cast<double>(n() + censored);
        return total > 0.0 ? static_cast<double>(censored) / total : 0.0;
    }

    // right-continuous ECDF, P(X <= x)
    double cdf(double x) const {
        const auto it = std::upper_bound(values.begin(), values.end(), x);
        return n() ? static_cast<double>(it - values.begin()) / n() : 0.0;
    }
    // left limit, P(X < x)
    double cdf_left(double x) const {
        const auto it = std::lower_bound(values.begin(), values.end(), x);
        return n() ? static_cast<double>(it - values.begin()) / n() : 0.0;
    }
};

inline double dkw_epsilon(long long n, double delta = 0.05) {
    if (n <= 0) throw std::invalid_argument("dkw_epsilon: need n > 0");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

struct OraclePoint {
    double x = 0.0;
    double value = 0.0;   // oracle CDF at x
    double stderr_ = 0.0;
};

struct CompareResult {
    double ks = 0.0;        // sup over the grid of |ECDF - oracle|
    double max_z = 0.0;     // combining MC error on both sides
    double dkw_eps = 0.0;
    bool dkw_pass = false;  // |ECDF - oracle| <= eps + 3 oracle stderr everywhere
};

// Sup-distance between the ECDF and a sampled oracle curve.  The DKW band is
// the 95% empirical-side band widened by three oracle standard errors per
// grid point.
inline CompareResult compare(const EmpiricalDist& emp, const std::vector<OraclePoint>& oracle,
                             long long min_samples = 100) {
    if (emp.n() < min_samples) throw std::invalid_argument("compare: insufficient uncensored data");
    if (oracle.size() < 2) throw std::invalid_argument("compare: oracle grid too small");
    for (size_t i = 0; i + 1 < oracle.size(); ++i)
        if (oracle[i].x >= oracle[i + 1].x)
            throw std::invalid_argument("compare: oracle grid must be increasing");
    if (oracle.front().x > emp.values.front() || oracle.back().x < emp.values.back())
        throw std::invalid_argument("compare: oracle grid does not cover the empirical range");

    CompareResult r;
    r.dkw_eps = dkw_epsilon(emp.n());
    r.dkw_pass = true;
    const double nd = static_cast<double>(emp.n());
    for (const auto& p : oracle) {
        for (double f : {emp.cdf(p.x), emp.cdf_left(p.x)}) {
            const double d = std::fabs(f - p.value);
            r.ks = std::max(r.ks, d);
            const double var = f * (1.0 - f) / nd + p.stderr_ * p.stderr_;
            if (var > 0.0) r.max_z = std::max(r.max_z, d / std::sqrt(var));
            if (d > r.dkw_eps + 3.0 * p.stderr_) r.dkw_pass = false;
        }
    }
    return r;
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty sample");
    std::sort(v.begin(), v.end());
    const size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace latflow
