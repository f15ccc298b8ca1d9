#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pvstab/cashflow.hpp"
#include "pvstab/irr.hpp"
#include "pvstab/oracle.hpp"
#include "pvstab/pv_direct.hpp"
#include "pvstab/pv_recursive.hpp"

namespace pvstab {

/// Spacing between x and the next representable binary64 value.
inline double ulp(double x) {
    x = std::abs(x);
    return std::nextafter(x, std::numeric_limits<double>::infinity()) - x;
}

inline constexpr std::size_t min_fit_points = 5;

/// Per-period |scheme - reference| and its exponential growth fit.
struct ErrorTrajectory {
    std::vector<double> abs_errors;
    /// ratios[k-1] = e_k / e_{k-1}; empty when e_{k-1} is under the noise floor.
    std::vector<std::optional<double>> ratios;
    /// g in e_k ~ (1+g)^k, from least squares on log e_k over points above the floor.
    std::optional<double> fitted_growth;
    double noise_floor = 0.0;
    std::size_t fit_points = 0;
};

/// Least-squares slope of log(errors[k]) against k over errors above the
/// floor, returned as a per-period growth fraction.
inline std::optional<double> fit_growth(const std::vector<double>& errors, double noise_floor,
                                        std::size_t* points_used = nullptr) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < errors.size(); ++k) {
        if (!(errors[k] > noise_floor)) continue;
        const double x = static_cast<double>(k);
        const double y = std::log(errors[k]);
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    if (points_used) *points_used = static_cast<std::size_t>(n);
    if (n < static_cast<double>(min_fit_points)) return std::nullopt;
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    const double slope = (n * sxy - sx * sy) / denom;
    return std::expm1(slope);
}

/// Default floor: 16 ulp of the largest |PV_k| in the reference.
template <class Real>
double default_noise_floor(const BasicPvSeries<Real>& reference) {
    double peak = 0.0;
    for (const auto& v : reference.values) peak = std::max(peak, std::abs(static_cast<double>(v)));
    return 16.0 * ulp(peak);
}

/// Differences are formed in the reference's precision, so an oracle
/// reference measures errors below one working ulp.
template <class Real>
ErrorTrajectory measure(const PvSeries& scheme_series, const BasicPvSeries<Real>& reference_series,
                        std::optional<double> noise_floor = std::nullopt) {
    if (scheme_series.values.size() != reference_series.values.size()) {
        throw LengthMismatch("series lengths differ: " + std::to_string(scheme_series.values.size()) + " vs " +
                             std::to_string(reference_series.values.size()));
    }
    if (scheme_series.rate.value() != reference_series.rate.value()) {
        throw InputError("series were computed at different rates");
    }
    ErrorTrajectory t;
    t.noise_floor = noise_floor.value_or(default_noise_floor(reference_series));
    const std::size_t n = scheme_series.values.size();
    t.abs_errors.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Real diff = Real(scheme_series.values[k]) - reference_series.values[k];
        t.abs_errors.push_back(std::abs(static_cast<double>(diff)));
    }
    for (std::size_t k = 1; k < n; ++k) {
        const double prev = t.abs_errors[k - 1];
        if (prev >= t.noise_floor && prev > 0.0) {
            t.ratios.emplace_back(t.abs_errors[k] / prev);
        } else {
            t.ratios.emplace_back(std::nullopt);
        }
    }
    t.fitted_growth = fit_growth(t.abs_errors, t.noise_floor, &t.fit_points);
    return t;
}

/// First-order predicted absolute error per period.
struct TheoreticalErrorModel {
    Scheme scheme = Scheme::forward;
    std::vector<double> per_k_bound;
    /// Forward only: the full first-order recurrence
    /// D_k = |1+r| D_{k-1} + |PV_{k-1}| dr, whose leading term is per_k_bound.
    std::vector<double> recurrence;
};

/// Leading term |1+r|^(k-1) |C_0| dr of forward error with seed -C_0.
inline TheoreticalErrorModel forward_error_model(const CashflowSchedule& schedule, const Rate& rate) {
    if (!(rate.uncertainty() > 0.0)) throw ZeroUncertainty();
    const double g = std::abs(detail::checked_growth(rate));
    const double dr = rate.uncertainty();
    const double c0 = std::abs(schedule.initial());
    const std::size_t n = schedule.periods();

    TheoreticalErrorModel model;
    model.scheme = Scheme::forward;
    model.per_k_bound.assign(n + 1, 0.0);
    double power = 1.0;  // |1+r|^(k-1)
    for (std::size_t k = 1; k <= n; ++k) {
        model.per_k_bound[k] = power * c0 * dr;
        power *= g;
    }

    // PV_{k-1} along the schedule from the stable scheme.
    const PvSeries path = backward_series(schedule, rate);
    model.recurrence.assign(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        const double prev_pv = k == 1 ? c0 : std::abs(path.values[k - 1]);
        model.recurrence[k] = g * model.recurrence[k - 1] + prev_pv * dr;
    }
    return model;
}

/// |PV_{k+1}| dr/(1+r)^2 + |PV_{k+2}| dr/|1+r|^3, PV beyond N taken as 0.
template <class Real>
TheoreticalErrorModel backward_error_model(const CashflowSchedule& schedule, const Rate& rate,
                                           const BasicPvSeries<Real>& oracle) {
    if (!(rate.uncertainty() > 0.0)) throw ZeroUncertainty();
    const std::size_t n = schedule.periods();
    if (oracle.values.size() != n + 1) throw LengthMismatch("oracle series does not match schedule");
    const double g = std::abs(detail::checked_growth(rate));
    const double dr = rate.uncertainty();
    auto pv_at = [&](std::size_t k) {
        return k <= n ? std::abs(static_cast<double>(oracle.values[k])) : 0.0;
    };
    TheoreticalErrorModel model;
    model.scheme = Scheme::backward;
    model.per_k_bound.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        model.per_k_bound[k] = pv_at(k + 1) * dr / (g * g) + pv_at(k + 2) * dr / (g * g * g);
    }
    return model;
}

enum class Reference { direct, oracle };

inline const char* to_string(Reference r) { return r == Reference::direct ? "direct" : "oracle"; }

enum class Verdict { consistent, inconsistent, undetermined };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::consistent: return "consistent";
        case Verdict::inconsistent: return "inconsistent";
        case Verdict::undetermined: return "undetermined";
    }
    return "?";
}

/// Growth-rate gates used for verdicts.
inline constexpr double forward_growth_tolerance = 0.003;
inline constexpr double backward_growth_limit = 0.002;

struct ExperimentConfig {
    std::vector<Scheme> schemes{Scheme::forward, Scheme::backward};
    Reference reference = Reference::oracle;
    std::optional<double> noise_floor;
    /// Seed for the forward scheme; defaults to -C_0, the carrying amount at the IRR.
    std::optional<Money> forward_seed;
    /// IRR tolerances to sweep. Empty means no sweep.
    std::vector<double> sweep_tolerances;
    /// Solver settings for the sweep. Newton polish is off so the achieved
    /// rate error follows the bisection tolerance.
    IrrOptions irr{1e-12, 200, 0};
    PrecisionConfig precision{};
};

struct SchemeReport {
    Scheme scheme;
    PvSeries series;
    ErrorTrajectory trajectory;
    std::optional<TheoreticalErrorModel> model;
    Verdict verdict = Verdict::undetermined;
};

struct SweepPoint {
    double tolerance;
    Rate rate;             ///< solved rate; uncertainty = certified bound
    double achieved_dr;    ///< |fl(1+r) - (1+root)| with the root in oracle precision
    double tail_error;     ///< mean |forward - oracle| over k >= N/2
    double tail_per_dr;    ///< tail_error / achieved_dr
};

struct ExperimentReport {
    Rate rate{0.0};
    Reference reference = Reference::oracle;
    std::vector<Money> reference_values;
    std::vector<SchemeReport> schemes;
    std::vector<SweepPoint> sweep;
    std::vector<std::string> notes;
};

inline Verdict judge(Scheme scheme, const ErrorTrajectory& t, double r) {
    switch (scheme) {
        case Scheme::forward:
            if (!t.fitted_growth) return Verdict::undetermined;
            return std::abs(*t.fitted_growth - r) <= forward_growth_tolerance ? Verdict::consistent
                                                                              : Verdict::inconsistent;
        case Scheme::backward:
            // Nothing above the noise floor means no measurable growth.
            if (!t.fitted_growth) return Verdict::consistent;
            return std::abs(*t.fitted_growth) <= backward_growth_limit ? Verdict::consistent
                                                                       : Verdict::inconsistent;
        default:
            return Verdict::undetermined;
    }
}

/// Mean |forward - oracle| over k >= N/2.
inline double forward_tail_error(const CashflowSchedule& schedule, const Rate& rate, Money pv0,
                                 const PrecisionConfig& precision = {}) {
    const PvSeries fwd = forward_series(schedule, rate, pv0);
    const OraclePvSeries ref = oracle_pv_series(schedule, rate, precision);
    const std::size_t n = schedule.periods();
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = n / 2; k <= n; ++k) {
        sum += std::abs(static_cast<double>(OracleReal(fwd.values[k]) - ref.values[k]));
        ++count;
    }
    return count ? sum / static_cast<double>(count) : 0.0;
}

/// Re-solve the IRR at each tolerance and record how the forward tail error
/// tracks the achieved rate error.
inline std::vector<SweepPoint> sweep_rate_uncertainty(const CashflowSchedule& schedule,
                                                      const std::vector<double>& tolerances, IrrOptions irr,
                                                      Money pv0, const PrecisionConfig& precision = {}) {
    std::vector<SweepPoint> out;
    if (tolerances.empty()) return out;
    IrrOptions tight = irr;
    tight.tolerance = 1e-15;
    tight.polish_steps = 3;
    const OracleReal root = oracle_irr(schedule, solve_irr(schedule, tight).rate.value());
    for (double tol : tolerances) {
        irr.tolerance = tol;
        const IrrResult solved = solve_irr(schedule, irr);
        const double achieved = std::abs(static_cast<double>(OracleReal(solved.rate.growth()) - (1 + root)));
        const double tail = forward_tail_error(schedule, solved.rate, pv0, precision);
        out.push_back({tol, solved.rate, achieved, tail, achieved > 0.0 ? tail / achieved : 0.0});
    }
    return out;
}

inline ExperimentReport run_experiment(const CashflowSchedule& schedule, const Rate& rate,
                                       const ExperimentConfig& config = {}) {
    validate(schedule);
    ExperimentReport report;
    report.rate = rate;
    report.reference = config.reference;
    if (schedule.empty()) {
        report.notes.emplace_back("schedule has no cashflows after period 0");
        return report;
    }

    const Money seed = config.forward_seed.value_or(-schedule.initial());
    std::optional<PvSeries> direct_ref;
    std::optional<OraclePvSeries> oracle_ref;
    if (config.reference == Reference::direct) {
        direct_ref = pv_series_direct(schedule, rate);
        report.reference_values = direct_ref->values;
    } else {
        oracle_ref = oracle_pv_series(schedule, rate, config.precision);
        for (const auto& v : oracle_ref->values) report.reference_values.push_back(static_cast<double>(v));
    }
    // The backward model needs reference magnitudes for |PV_{k+1}|.
    const OraclePvSeries model_pv = oracle_ref ? *oracle_ref : oracle_pv_series(schedule, rate, config.precision);

    const bool have_dr = rate.uncertainty() > 0.0;
    if (!have_dr) report.notes.emplace_back("theoretical models skipped: rate uncertainty is zero");

    for (Scheme scheme : config.schemes) {
        SchemeReport sr{scheme, {}, {}, std::nullopt, Verdict::undetermined};
        switch (scheme) {
            case Scheme::forward: sr.series = forward_series(schedule, rate, seed); break;
            case Scheme::backward: sr.series = backward_series(schedule, rate); break;
            case Scheme::direct: sr.series = pv_series_direct(schedule, rate); break;
            case Scheme::oracle: continue;
        }
        sr.trajectory = direct_ref ? measure(sr.series, *direct_ref, config.noise_floor)
                                   : measure(sr.series, *oracle_ref, config.noise_floor);
        if (have_dr && scheme == Scheme::forward) sr.model = forward_error_model(schedule, rate);
        if (have_dr && scheme == Scheme::backward) sr.model = backward_error_model(schedule, rate, model_pv);
        sr.verdict = judge(scheme, sr.trajectory, rate.value());
        report.schemes.push_back(std::move(sr));
    }

    report.sweep = sweep_rate_uncertainty(schedule, config.sweep_tolerances, config.irr, seed, config.precision);
    if (rate.value() < 0.0) {
        report.notes.emplace_back("negative rate: backward growth is reported only, no bound applies");
    }
    return report;
}

/// Level annuity of `periods` equal payments whose initial outflow is the
/// oracle PV at `rate`, rounded to working precision.
inline CashflowSchedule priced_level_annuity(Money payment, double rate, std::size_t periods) {
    CashflowSchedule flows(0.0, std::vector<Money>(periods, payment));
    const OraclePvSeries ref = oracle_pv_series(flows, Rate(rate));
    return {-static_cast<double>(ref.values.front()), std::vector<Money>(periods, payment)};
}

}  // namespace pvstab
