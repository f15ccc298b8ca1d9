#pragma once

// Loan-fee amortization schedule in the FAS 91 "contractual payment term"
// layout. Columns:
//   (1) cash inflow           (2) stated interest      (3) amortization
//   (4) interest income       (5) unamortized principal (6) unamortized fees
//   (7) carrying amount
// Rules, period k >= 1:
//   (2) = prior (5) * stated rate      (4) = prior (7) * effective rate
//   (3) = (4) - (2)                    (5) = prior (5) - ((1) - (2))
//   (6) = net fees - cumulative (3)    (7) = (5) - (6)
// Column (7) is generated by a recursive PV engine; with exact arithmetic
// that engine and the (5) - (6) rule agree.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pvstab/cashflow.hpp"
#include "pvstab/pv_direct.hpp"
#include "pvstab/pv_recursive.hpp"

namespace pvstab {

struct LoanSpec {
    Money principal = 0.0;
    Money net_fees = 0.0;  ///< fees net of costs; either sign
    double stated_rate = 0.0;
    Money payment = 0.0;
    std::size_t periods = 0;

    Money initial_carrying_amount() const noexcept { return principal - net_fees; }

    void check() const {
        if (!(principal > 0.0)) throw NonPositivePrincipal();
        if (periods < 1) throw InputError("loan must have at least one period");
        if (!std::isfinite(net_fees) || !std::isfinite(payment)) throw InputError("loan amounts must be finite");
        if (!(stated_rate > -1.0)) throw RateOutOfDomain("stated rate must be greater than -1");
    }
};

struct AmortizationRow {
    std::size_t period = 0;
    Money cash_inflow = 0.0;            // (1)
    Money stated_interest = 0.0;        // (2)
    Money amortization = 0.0;           // (3)
    Money interest_income = 0.0;        // (4)
    Money unamortized_principal = 0.0;  // (5)
    Money unamortized_fees = 0.0;       // (6)
    Money carrying_amount = 0.0;        // (7)
};

enum class Rounding { none, cents };
enum class Engine { forward, backward };

/// Half-even rounding to 0.01.
inline Money round_cents(Money x) { return std::nearbyint(x * 100.0) / 100.0; }

/// Lender's view: pay out the carrying amount, receive the payments.
inline CashflowSchedule loan_cashflow(const LoanSpec& loan) {
    return {-loan.initial_carrying_amount(), std::vector<Money>(loan.periods, loan.payment), PeriodLabel::year};
}

/// Level payment that amortizes `principal` over `periods` at `rate`.
inline Money annuity_payment(Money principal, double rate, std::size_t periods) {
    if (periods == 0) throw InputError("annuity needs at least one period");
    if (rate == 0.0) return principal / static_cast<double>(periods);
    return principal * rate / -std::expm1(-static_cast<double>(periods) * std::log1p(rate));
}

/// Row 0 is inception; rows 1..N follow the column rules. In cents mode every
/// stored cell is rounded after it is computed and later rows use the rounded
/// values, as a ledger would.
inline std::vector<AmortizationRow> build_schedule(const LoanSpec& loan, const Rate& effective_rate,
                                                   Rounding rounding = Rounding::none,
                                                   Engine engine = Engine::forward) {
    loan.check();
    const double g = detail::checked_growth(effective_rate);
    const double eff = effective_rate.value();
    const auto keep = [rounding](Money x) { return rounding == Rounding::cents ? round_cents(x) : x; };

    std::vector<Money> backward;
    if (engine == Engine::backward) backward = backward_series(loan_cashflow(loan), effective_rate).values;

    std::vector<AmortizationRow> rows;
    rows.reserve(loan.periods + 1);
    AmortizationRow prev;
    prev.period = 0;
    prev.cash_inflow = keep(-loan.initial_carrying_amount());
    prev.unamortized_principal = keep(loan.principal);
    prev.unamortized_fees = keep(loan.net_fees);
    prev.carrying_amount = keep(loan.initial_carrying_amount());
    rows.push_back(prev);

    Money cumulative = 0.0;
    for (std::size_t k = 1; k <= loan.periods; ++k) {
        AmortizationRow row;
        row.period = k;
        row.cash_inflow = keep(loan.payment);
        row.stated_interest = keep(prev.unamortized_principal * loan.stated_rate);
        row.interest_income = keep(prev.carrying_amount * eff);
        row.amortization = keep(row.interest_income - row.stated_interest);
        row.unamortized_principal = keep(prev.unamortized_principal - (row.cash_inflow - row.stated_interest));
        cumulative = keep(cumulative + row.amortization);
        row.unamortized_fees = keep(loan.net_fees - cumulative);
        row.carrying_amount = engine == Engine::forward ? keep(g * prev.carrying_amount - row.cash_inflow)
                                                        : keep(backward[k]);
        rows.push_back(row);
        prev = row;
    }
    return rows;
}

inline Money total_amortization(const std::vector<AmortizationRow>& rows) {
    Money sum = 0.0;
    for (const auto& row : rows) sum += row.amortization;
    return sum;
}

struct CarryingAmountCheck {
    std::vector<double> deviations;  ///< |(7)_k - PV_k| per period
    double max_deviation = 0.0;
    std::size_t worst_period = 0;
};

/// Compares column (7) (unrounded) with direct partial PVs of the loan's
/// cashflow at the effective rate.
inline CarryingAmountCheck carrying_amount_equals_partial_pv(const LoanSpec& loan, const Rate& effective_rate,
                                                             Engine engine = Engine::forward) {
    const auto rows = build_schedule(loan, effective_rate, Rounding::none, engine);
    const PvSeries direct = pv_series_direct(loan_cashflow(loan), effective_rate);
    CarryingAmountCheck check;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const double d = std::abs(rows[k].carrying_amount - direct.values[k]);
        check.deviations.push_back(d);
        if (d > check.max_deviation) {
            check.max_deviation = d;
            check.worst_period = k;
        }
    }
    return check;
}

}  // namespace pvstab
