#pragma once

// Extended-precision reference computations. Values stay in OracleReal so
// that error measurements against them are not limited by a final rounding
// to binary64.

#include <cmath>
#include <cstddef>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pvstab/cashflow.hpp"
#include "pvstab/pv_direct.hpp"

namespace pvstab {

using OracleReal = boost::multiprecision::cpp_bin_float_50;
using OraclePvSeries = BasicPvSeries<OracleReal>;

inline constexpr int oracle_max_digits = std::numeric_limits<OracleReal>::digits10;

/// Same formula as pv_series_direct with every operation in OracleReal.
/// The rate is not re-solved: the working growth factor fl(1+r) is widened
/// exactly, so the oracle and the schemes discount by the same number.
inline OraclePvSeries oracle_pv_series(const CashflowSchedule& schedule, const Rate& rate,
                                       const PrecisionConfig& cfg = {}) {
    cfg.check();
    if (cfg.oracle_digits > oracle_max_digits) {
        throw InputError("oracle precision is limited to " + std::to_string(oracle_max_digits) + " digits");
    }
    const OracleReal g{detail::checked_growth(rate)};
    OraclePvSeries out{{}, Scheme::oracle, rate};
    out.values.reserve(schedule.periods() + 1);
    for (std::size_t k = 0; k <= schedule.periods(); ++k) {
        out.values.push_back(detail::partial_pv_sum<OracleReal>(schedule.flows(), g, k));
    }
    return out;
}

/// Oracle NPV and its derivative at an arbitrary-precision rate.
inline OracleReal oracle_npv(const CashflowSchedule& schedule, const OracleReal& rate) {
    const OracleReal g = 1 + rate;
    return OracleReal(schedule.initial()) + detail::partial_pv_sum<OracleReal>(schedule.flows(), g, 0);
}

inline OracleReal oracle_npv_derivative(const CashflowSchedule& schedule, const OracleReal& rate) {
    const OracleReal g = 1 + rate;
    OracleReal sum = 0;
    OracleReal factor = 1 / g;
    const auto flows = schedule.flows();
    for (std::size_t m = 1; m <= flows.size(); ++m) {
        factor /= g;
        sum -= OracleReal(static_cast<double>(m)) * OracleReal(flows[m - 1]) * factor;
    }
    return sum;
}

/// IRR to oracle precision by Newton iteration from a nearby working-precision
/// root. Used to measure how far a solved rate actually is from the root.
inline OracleReal oracle_irr(const CashflowSchedule& schedule, double near) {
    OracleReal r = near;
    const OracleReal eps = std::numeric_limits<OracleReal>::epsilon() * 16;
    for (int i = 0; i < 60; ++i) {
        const OracleReal f = oracle_npv(schedule, r);
        const OracleReal df = oracle_npv_derivative(schedule, r);
        if (df == 0) break;
        const OracleReal step = f / df;
        r -= step;
        if (abs(step) <= eps * (1 + abs(r))) break;
    }
    return r;
}

}  // namespace pvstab
