#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pvstab/cashflow.hpp"

namespace pvstab {

enum class Scheme { direct, forward, backward, oracle };

inline const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::direct: return "direct";
        case Scheme::forward: return "forward";
        case Scheme::backward: return "backward";
        case Scheme::oracle: return "oracle";
    }
    return "?";
}

/// Partial present values PV_0..PV_N produced by one scheme. PV_k is the value
/// at period k of the flows strictly after k, so PV_N is an empty sum.
template <class Real>
struct BasicPvSeries {
    std::vector<Real> values;
    Scheme scheme = Scheme::direct;
    Rate rate{0.0};

    std::size_t periods() const noexcept { return values.empty() ? 0 : values.size() - 1; }
};

using PvSeries = BasicPvSeries<Money>;

namespace detail {

inline double checked_growth(const Rate& rate) {
    const double g = rate.growth();
    if (!(g > 0.0)) throw RateOutOfDomain("discount factor 1+r must be positive");
    return g;
}

/// Sum of C_m / g^(m-k) for m = k+1..N, ascending m, discount factor built
/// by repeated division. Shared by the working and oracle precisions.
template <class Real>
Real partial_pv_sum(std::span<const Money> flows, const Real& growth, std::size_t k) {
    Real sum = 0;
    Real factor = 1;
    for (std::size_t m = k + 1; m <= flows.size(); ++m) {
        factor = factor / growth;
        sum = sum + Real(flows[m - 1]) * factor;
    }
    return sum;
}

}  // namespace detail

/// Present value of C_1..C_N. An empty schedule has PV 0.
inline Money pv(const CashflowSchedule& schedule, const Rate& rate) {
    return detail::partial_pv_sum<Money>(schedule.flows(), detail::checked_growth(rate), 0);
}

inline Money npv(const CashflowSchedule& schedule, const Rate& rate) {
    return schedule.initial() + pv(schedule, rate);
}

/// PV_k for 0 <= k <= N; k = 0 is bit-identical to pv().
inline Money partial_pv(const CashflowSchedule& schedule, const Rate& rate, std::size_t k) {
    if (k > schedule.periods()) {
        throw IndexOutOfRange("period " + std::to_string(k) + " beyond schedule end " +
                              std::to_string(schedule.periods()));
    }
    return detail::partial_pv_sum<Money>(schedule.flows(), detail::checked_growth(rate), k);
}

/// Every PV_k by its own direct summation. The O(N^2) redundancy is the
/// point: this is the comparison column for the recursive schemes.
inline PvSeries pv_series_direct(const CashflowSchedule& schedule, const Rate& rate) {
    const double g = detail::checked_growth(rate);
    PvSeries out{{}, Scheme::direct, rate};
    out.values.reserve(schedule.periods() + 1);
    for (std::size_t k = 0; k <= schedule.periods(); ++k) {
        out.values.push_back(detail::partial_pv_sum<Money>(schedule.flows(), g, k));
    }
    return out;
}

}  // namespace pvstab
