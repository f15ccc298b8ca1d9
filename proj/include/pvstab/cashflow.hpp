#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pvstab/error.hpp"

namespace pvstab {

/// Money in working precision. Deliberately binary64, not fixed-point cents:
/// the whole point of the library is to observe floating-point rounding.
using Money = double;

enum class PeriodLabel { month, year };

/// Cashflows C_0..C_N. `flows[m - 1]` is the amount at period m, so the
/// public accessors are 1-based to match the usual PV notation.
/// Outflows are negative and inflows positive by convention only.
class CashflowSchedule {
  public:
    CashflowSchedule() = default;
    CashflowSchedule(Money initial, std::vector<Money> flows,
                     PeriodLabel label = PeriodLabel::month)
        : initial_(initial), flows_(std::move(flows)), label_(label) {}

    Money initial() const noexcept { return initial_; }
    std::span<const Money> flows() const noexcept { return flows_; }
    PeriodLabel period_label() const noexcept { return label_; }

    /// Number of periods after period 0.
    std::size_t periods() const noexcept { return flows_.size(); }
    bool empty() const noexcept { return flows_.empty(); }

    /// C_m for m in [1, N].
    Money at(std::size_t m) const { return flows_.at(m - 1); }

    /// Same schedule with `n` extra zero-amount periods appended.
    CashflowSchedule with_trailing_zeros(std::size_t n) const {
        std::vector<Money> f = flows_;
        f.resize(f.size() + n, 0.0);
        return {initial_, std::move(f), label_};
    }

    CashflowSchedule scaled(Money factor) const {
        std::vector<Money> f = flows_;
        for (auto& x : f) x *= factor;
        return {initial_ * factor, std::move(f), label_};
    }

    friend bool operator==(const CashflowSchedule&, const CashflowSchedule&) = default;

  private:
    Money initial_ = 0.0;
    std::vector<Money> flows_;
    PeriodLabel label_ = PeriodLabel::month;
};

/// Throws NonFiniteAmount(period) on the first NaN or infinite amount.
inline void validate(const CashflowSchedule& schedule) {
    if (!std::isfinite(schedule.initial())) throw NonFiniteAmount(0);
    const auto flows = schedule.flows();
    for (std::size_t i = 0; i < flows.size(); ++i) {
        if (!std::isfinite(flows[i])) throw NonFiniteAmount(i + 1);
    }
}

/// Per-period discount rate with an absolute uncertainty bound.
class Rate {
  public:
    explicit Rate(double value, double uncertainty = 0.0) : value_(value), uncertainty_(uncertainty) {
        if (!std::isfinite(value) || !(value > -1.0)) {
            throw RateOutOfDomain("rate must be finite and greater than -1, got " + std::to_string(value));
        }
        if (!std::isfinite(uncertainty) || uncertainty < 0.0) {
            throw RateOutOfDomain("rate uncertainty must be finite and non-negative");
        }
    }

    double value() const noexcept { return value_; }
    double uncertainty() const noexcept { return uncertainty_; }

    /// 1 + r as evaluated in working precision. Every scheme discounts by
    /// this number, and the oracle widens this number rather than r.
    double growth() const noexcept { return 1.0 + value_; }

    Rate with_uncertainty(double u) const { return Rate(value_, u); }

    friend bool operator==(const Rate&, const Rate&) = default;

  private:
    double value_;
    double uncertainty_;
};

struct PrecisionConfig {
    double working_digits = std::numeric_limits<double>::digits * 0.30102999566398120;  // ~15.95
    double oracle_digits = 50.0;

    void check() const {
        if (!(working_digits > 0.0)) throw InputError("working_digits must be positive");
        if (oracle_digits < 2.0 * working_digits) {
            throw InputError("oracle_digits must be at least twice working_digits");
        }
    }
};

}  // namespace pvstab
