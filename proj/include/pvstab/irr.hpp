#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pvstab/cashflow.hpp"
#include "pvstab/pv_direct.hpp"

namespace pvstab {

struct IrrOptions {
    double tolerance = 1e-12;  ///< width of the final sign-change bracket
    std::size_t max_iter = 200;
    int polish_steps = 3;  ///< safeguarded Newton steps after bisection
};

struct IrrResult {
    Rate rate{0.0};  ///< uncertainty is a certified bound on |rate - root|
    std::size_t iterations = 0;
    Money residual = 0.0;  ///< NPV at the returned rate
    bool ambiguous = false;  ///< more than one sign change in C_0..C_N
    std::size_t sign_changes = 0;
};

/// Search domain for the rate.
inline constexpr double irr_min_rate = -1.0 + 1e-9;
inline constexpr double irr_max_rate = 10.0;

/// d NPV / dr = sum of -m C_m / (1+r)^(m+1).
inline double npv_derivative(const CashflowSchedule& schedule, const Rate& rate) {
    const double g = detail::checked_growth(rate);
    const auto flows = schedule.flows();
    double factor = 1.0 / g;
    double sum = 0.0;
    for (std::size_t m = 1; m <= flows.size(); ++m) {
        factor /= g;
        sum += -static_cast<double>(m) * flows[m - 1] * factor;
    }
    return sum;
}

inline std::size_t count_sign_changes(const CashflowSchedule& schedule) {
    std::size_t changes = 0;
    int last = schedule.initial() > 0 ? 1 : (schedule.initial() < 0 ? -1 : 0);
    for (Money c : schedule.flows()) {
        const int s = c > 0 ? 1 : (c < 0 ? -1 : 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

namespace detail {

inline double npv_at(const CashflowSchedule& schedule, double r) {
    return schedule.initial() + partial_pv_sum<Money>(schedule.flows(), 1.0 + r, 0);
}

inline bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

struct Bracket {
    double lo, hi, f_lo, f_hi;
};

// Geometric expansion from [0, 0.1]: upward by doubling to the cap, downward
// by halving the distance to -1. Adjacent probe points are tested so the
// bracket nearest the start wins.
inline Bracket find_bracket(const CashflowSchedule& schedule, std::size_t& evaluations) {
    double up_prev = 0.0, f_up_prev = npv_at(schedule, 0.0);
    double up = 0.1, f_up = npv_at(schedule, up);
    evaluations += 2;
    if (f_up_prev == 0.0) return {0.0, 0.0, 0.0, 0.0};
    if (f_up == 0.0 || opposite(f_up_prev, f_up)) return {up_prev, up, f_up_prev, f_up};

    double down_prev = 0.0, f_down_prev = f_up_prev;
    bool up_done = false, down_done = false;
    while (!(up_done && down_done)) {
        if (!up_done) {
            up_prev = up;
            f_up_prev = f_up;
            up = std::min(up * 2.0, irr_max_rate);
            f_up = npv_at(schedule, up);
            ++evaluations;
            if (f_up == 0.0 || opposite(f_up_prev, f_up)) return {up_prev, up, f_up_prev, f_up};
            up_done = up >= irr_max_rate;
        }
        if (!down_done) {
            const double down = std::max(-1.0 + (1.0 + down_prev) * 0.5, irr_min_rate);
            const double f_down = npv_at(schedule, down);
            ++evaluations;
            if (f_down == 0.0 || opposite(f_down, f_down_prev)) return {down, down_prev, f_down, f_down_prev};
            down_prev = down;
            f_down_prev = f_down;
            down_done = down <= irr_min_rate;
        }
    }
    throw NoSignChange("NPV does not change sign for rates in (-1, 10]");
}

}  // namespace detail

/// Root of NPV(r) = 0: bracket, bisect until the bracket is no wider than
/// the tolerance, then optionally sharpen with Newton steps that may not
/// leave the bracket.
inline IrrResult solve_irr(const CashflowSchedule& schedule, const IrrOptions& options = {}) {
    validate(schedule);
    if (schedule.empty()) throw InputError("IRR needs at least one cashflow after period 0");
    if (!(options.tolerance > 0.0)) throw InputError("IRR tolerance must be positive");

    IrrResult result;
    result.sign_changes = count_sign_changes(schedule);
    result.ambiguous = result.sign_changes > 1;

    std::size_t evaluations = 0;
    auto [lo, hi, f_lo, f_hi] = detail::find_bracket(schedule, evaluations);
    if (f_lo == 0.0) hi = lo;
    if (f_hi == 0.0) lo = hi;

    std::size_t iterations = 0;
    while (hi - lo > options.tolerance) {
        if (iterations == options.max_iter) {
            throw MaxIterationsExceeded("IRR bisection did not reach tolerance in " +
                                        std::to_string(options.max_iter) + " iterations");
        }
        ++iterations;
        const double mid = lo + (hi - lo) * 0.5;
        if (mid <= lo || mid >= hi) {
            throw MaxIterationsExceeded("IRR tolerance is finer than the rate's floating-point resolution");
        }
        const double f_mid = detail::npv_at(schedule, mid);
        if (f_mid == 0.0) {
            lo = hi = mid;
            break;
        }
        if (detail::opposite(f_lo, f_mid)) {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }

    double r = lo + (hi - lo) * 0.5;
    for (int step = 0; step < options.polish_steps && hi > lo; ++step) {
        const double f = detail::npv_at(schedule, r);
        ++iterations;
        if (f == 0.0) break;
        // Keep the sign-change bracket current so the bound stays certified.
        if (detail::opposite(f_lo, f)) {
            hi = r;
            f_hi = f;
        } else {
            lo = r;
            f_lo = f;
        }
        const double df = npv_derivative(schedule, Rate(r));
        if (df == 0.0) break;
        const double next = r - f / df;
        if (!(next >= lo && next <= hi) || next == r) break;
        r = next;
    }

    // A binary64 rate is never closer to the root than half its own spacing.
    const double resolution = 0.5 * (std::nextafter(r, irr_max_rate + 1.0) - r);
    const double bound = std::max({r - lo, hi - r, resolution});
    result.rate = Rate(r, bound);
    result.iterations = iterations;
    result.residual = npv(schedule, result.rate);
    return result;
}

inline IrrResult solve_irr(const CashflowSchedule& schedule, double tolerance, std::size_t max_iter) {
    IrrOptions options;
    options.tolerance = tolerance;
    options.max_iter = max_iter;
    return solve_irr(schedule, options);
}

}  // namespace pvstab
