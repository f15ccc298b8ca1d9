#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "pvstab/cashflow.hpp"
#include "pvstab/fas91.hpp"

namespace fixtures {

/// FAS 91 fee example: 100,000 at 10% for 10 years, 2,000 net fees.
inline pvstab::LoanSpec fas91_loan() { return {100000.0, 2000.0, 0.10, 16274.54, 10}; }

inline pvstab::CashflowSchedule fas91_cashflow() { return pvstab::loan_cashflow(fas91_loan()); }

/// Exact IRR of the FAS 91 cashflow, independently solved to 40 digits.
inline constexpr double fas91_irr = 0.10472983627870460565;

struct PublishedRow {
    double stated_interest, amortization, interest_income, carrying_amount;
};

/// Published columns (2), (3), (4), (7) for years 1..10; column (1) is 16,274.54.
inline const std::vector<PublishedRow>& published_schedule() {
    static const std::vector<PublishedRow> rows{
        {10000.00, 263.52, 10263.52, 91988.98}, {9372.55, 261.44, 9633.99, 85348.43},
        {8682.35, 256.18, 8938.53, 78012.42},   {7923.13, 247.10, 8170.23, 69908.11},
        {7087.99, 233.48, 7321.46, 60955.04},   {6169.33, 214.48, 6383.81, 51064.31},
        {5158.81, 189.15, 5347.96, 40137.72},   {4047.24, 156.38, 4203.62, 28066.80},
        {2824.51, 114.92, 2939.43, 14731.69},   {1479.50, 63.34, 1542.85, 0.00}};
    return rows;
}

inline std::vector<double> random_flows(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> out(n);
    for (auto& x : out) x = d(rng);
    return out;
}

}  // namespace fixtures
