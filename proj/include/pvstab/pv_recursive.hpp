#pragma once

#include <cmath>
#include <cstddef>

#include "pvstab/cashflow.hpp"
#include "pvstab/pv_direct.hpp"

namespace pvstab {

/// Forward recurrence PV_k = (1+r) PV_{k-1} - C_k from a caller-supplied
/// PV_0. At the IRR an amortization schedule seeds it with -C_0.
/// Rounding errors are amplified by (1+r) per step.
inline PvSeries forward_series(const CashflowSchedule& schedule, const Rate& rate, Money pv0) {
    const double g = detail::checked_growth(rate);
    const auto flows = schedule.flows();
    PvSeries out{{}, Scheme::forward, rate};
    out.values.resize(flows.size() + 1);
    out.values[0] = pv0;
    for (std::size_t k = 1; k <= flows.size(); ++k) {
        out.values[k] = g * out.values[k - 1] - flows[k - 1];
    }
    return out;
}

/// Backward recurrence PV_{k-1} = (PV_k + C_k) / (1+r) from PV_N = 0.
/// One rounding for the add, one for the divide.
inline PvSeries backward_series(const CashflowSchedule& schedule, const Rate& rate) {
    const double g = detail::checked_growth(rate);
    const auto flows = schedule.flows();
    PvSeries out{{}, Scheme::backward, rate};
    out.values.assign(flows.size() + 1, 0.0);
    for (std::size_t k = flows.size(); k >= 1; --k) {
        out.values[k - 1] = (out.values[k] + flows[k - 1]) / g;
    }
    return out;
}

/// |PV_N| after running forward from the backward scheme's PV_0.
inline Money round_trip_residual(const CashflowSchedule& schedule, const Rate& rate) {
    const PvSeries back = backward_series(schedule, rate);
    const PvSeries fwd = forward_series(schedule, rate, back.values.front());
    return std::abs(fwd.values.back());
}

}  // namespace pvstab
