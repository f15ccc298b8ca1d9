// Acceptance checks, one PASS/FAIL line per criterion.
// Usage: acceptance [N]   runs criterion N only (exit 1 if it fails).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pvstab/cli.hpp"
#include "pvstab/pvstab.hpp"
#include "support/fixtures.hpp"

using namespace pvstab;

namespace {

struct Outcome {
    bool pass;
    std::string summary;
    std::vector<std::string> details;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

IrrOptions bisection_only(double tol = 1e-12) { return {tol, 200, 0}; }

const double annuity_rates[] = {0.004, 0.008, 0.0125};

Outcome irr_reproduction() {
    const auto cf = fixtures::fas91_cashflow();
    const auto t0 = Clock::now();
    const IrrResult r = solve_irr(cf);
    const double elapsed = seconds_since(t0);
    const double target = 0.104736;
    const double diff = r.rate.value() - target;
    const bool pass = std::abs(diff) <= 5e-6 && elapsed < 1e-3;
    Outcome o{pass, fmt("IRR %.12f, target 0.104736 +/- 5e-6, diff %.3e, %.0f us", r.rate.value(), diff,
                        elapsed * 1e6),
              {}};
    if (!pass) {
        o.details.push_back(fmt("NPV at the target rate is %.6f; NPV at the solved rate is %.3e",
                                npv(cf, Rate(target)), r.residual));
    }
    return o;
}

Outcome table_reproduction() {
    std::ostringstream out, err;
    const int code = cli::main({"pvstab", "schedule", std::string(PVSTAB_FIXTURES) + "/fas91_loan.txt", "--rounding",
                                "cents", "--format", "json"},
                               out, err);
    if (code != 0) return {false, "schedule command failed: " + err.str(), {}};
    const auto j = nlohmann::json::parse(out.str());
    const auto cell = [&](std::size_t k, const char* name) { return std::stod(j["rows"][k][name].get<std::string>()); };

    Outcome o{true, "", {}};
    std::size_t cells = 0, exact = 0;
    double worst = 0.0;
    const auto compare = [&](std::size_t k, const char* name, double got, double want) {
        ++cells;
        const double d = got - want;
        worst = std::max(worst, std::abs(d));
        if (std::abs(d) < 5e-10) {
            ++exact;
            return;
        }
        const bool ok = std::abs(d) <= 0.01 + 1e-9;
        if (!ok) o.pass = false;
        o.details.push_back(fmt("year %.0f ", static_cast<double>(k)) + name +
                            fmt(": got %.2f, table %.2f, deviation %+.2f", got, want, d) + (ok ? "" : " (out of band)"));
    };
    for (std::size_t k = 1; k <= 10; ++k) {
        const auto& t = fixtures::published_schedule()[k - 1];
        compare(k, "(1) cash_inflow", cell(k, "cash_inflow"), 16274.54);
        compare(k, "(2) stated_interest", cell(k, "stated_interest"), t.stated_interest);
        compare(k, "(3) amortization", cell(k, "amortization"), t.amortization);
        compare(k, "(4) interest_income", cell(k, "interest_income"), t.interest_income);
        compare(k, "(7) carrying_amount", cell(k, "carrying_amount"), t.carrying_amount);
    }
    const double total = std::stod(j["total_amortization"].get<std::string>());
    if (std::abs(total - 2000.00) > 0.02 + 1e-9) o.pass = false;
    if (total != 2000.00) o.details.push_back(fmt("total amortization %.2f vs 2000.00", total));
    o.summary = fmt("%.0f/%.0f cells exact, worst deviation %.2f, total amortization %.2f", static_cast<double>(exact),
                    static_cast<double>(cells), worst, total);
    return o;
}

Outcome forward_instability() {
    Outcome o{true, "", {}};
    std::string fits;
    for (double r : annuity_rates) {
        const auto t0 = Clock::now();
        const auto cf = priced_level_annuity(1.0, r, 360);
        const auto irr = solve_irr(cf, bisection_only());
        ExperimentConfig cfg;
        cfg.schemes = {Scheme::forward};
        const auto report = run_experiment(cf, irr.rate, cfg);
        const double elapsed = seconds_since(t0);
        const auto& fit = report.schemes[0].trajectory.fitted_growth;
        const bool ok = fit && std::abs(*fit - r) <= 0.003 && elapsed < 1.0;
        if (!ok) o.pass = false;
        fits += fit ? fmt(" r=%.4f: g=%.6f (%.0f ms);", r, *fit, elapsed * 1e3) : fmt(" r=%.4f: no fit;", r);
        o.details.push_back(fmt("r=%.4f dr=%.3e fit points %.0f", r, irr.rate.uncertainty(),
                                static_cast<double>(report.schemes[0].trajectory.fit_points)));
    }
    o.summary = "forward growth vs r +/- 0.003:" + fits;
    return o;
}

Outcome ten_year_ratios() {
    const auto cf = fixtures::fas91_cashflow();
    const auto irr = solve_irr(cf, bisection_only());
    ExperimentConfig cfg;
    cfg.reference = Reference::direct;
    cfg.schemes = {Scheme::forward};
    const auto report = run_experiment(cf, irr.rate, cfg);
    const auto& t = report.schemes[0].trajectory;
    std::size_t inside = 0, defined = 0;
    std::string list;
    for (std::size_t i = 1; i < t.ratios.size(); ++i) {  // ratios for k = 2..10
        if (!t.ratios[i]) {
            list += " -";
            continue;
        }
        ++defined;
        if (*t.ratios[i] >= 1.05 && *t.ratios[i] <= 1.18) ++inside;
        list += fmt(" %.4f", *t.ratios[i]);
    }
    return {inside >= 7, fmt("%.0f of 9 ratios in [1.05, 1.18] (%.0f defined):", static_cast<double>(inside),
                             static_cast<double>(defined)) + list,
            {}};
}

Outcome backward_robustness() {
    Outcome o{true, "", {}};
    std::string parts;
    for (double r : annuity_rates) {
        const auto cf = priced_level_annuity(1.0, r, 360);
        const auto irr = solve_irr(cf, bisection_only());
        ExperimentConfig cfg;
        cfg.schemes = {Scheme::backward};
        const auto report = run_experiment(cf, irr.rate, cfg);
        const auto& t = report.schemes[0].trajectory;
        double peak_pv = 0.0, peak_err = 0.0;
        for (double v : report.reference_values) peak_pv = std::max(peak_pv, std::abs(v));
        for (double e : t.abs_errors) peak_err = std::max(peak_err, e);
        const bool ok = (!t.fitted_growth || std::abs(*t.fitted_growth) <= 0.002) && peak_err <= 1e-6 * peak_pv;
        if (!ok) o.pass = false;
        parts += fmt(" r=%.4f: ", r) + (t.fitted_growth ? fmt("g=%+.2e", *t.fitted_growth) : std::string("no growth")) +
                 fmt(", max err %.2e of max PV %.2f;", peak_err, peak_pv);
    }
    o.summary = "backward |g| <= 0.002, max err <= 1e-6 max|PV|:" + parts;
    return o;
}

Outcome dr_linearity() {
    Outcome o{true, "", {}};
    std::string parts;
    for (double r : annuity_rates) {
        const auto cf = priced_level_annuity(1.0, r, 360);
        const auto sweep = sweep_rate_uncertainty(cf, {1e-12, 1e-10, 1e-8}, bisection_only(), -cf.initial());
        double lo = INFINITY, hi = 0.0;
        for (const auto& p : sweep) {
            o.details.push_back(fmt("r=%.4f tol %.0e: achieved dr %.3e, tail %.3e", r, p.tolerance, p.achieved_dr,
                                    p.tail_error) +
                                fmt(", tail/dr %.4f", p.tail_per_dr));
            if (p.achieved_dr <= 0.0) {
                o.pass = false;
                continue;
            }
            lo = std::min(lo, p.tail_per_dr);
            hi = std::max(hi, p.tail_per_dr);
        }
        const double spread = hi / lo;
        if (!(spread <= 2.0)) o.pass = false;
        parts += fmt(" r=%.4f spread %.3f;", r, spread);
    }
    o.summary = "tail error / achieved dr, max/min <= 2:" + parts;
    return o;
}

Outcome mechanism() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> rate(-0.2, 0.2);
    std::uniform_int_distribution<std::size_t> len(1, 30);
    const double eps = 1e-6;
    double worst = 0.0;
    const int trials = 200;
    for (int trial = 0; trial < trials; ++trial) {
        const Rate r(rate(rng));
        auto flows = fixtures::random_flows(rng, len(rng), 0.1, 1.0);
        const double scale = std::ldexp(1.0, -10) / backward_series(CashflowSchedule(0.0, flows), r).values[0];
        for (auto& c : flows) c *= scale;
        const CashflowSchedule s(0.0, flows);
        const double pv0 = backward_series(s, r).values[0];
        const auto base = forward_series(s, r, pv0);
        const auto bumped = forward_series(s, r, pv0 + eps);
        const OracleReal g(r.growth());
        OracleReal expected = eps;
        for (std::size_t k = 0; k < base.values.size(); ++k) {
            const OracleReal dev = OracleReal(bumped.values[k]) - OracleReal(base.values[k]);
            worst = std::max(worst, static_cast<double>(abs(dev - expected) / expected));
            expected *= g;
        }
    }
    return {worst <= 1e-9, fmt("eps (1+r)^k tracked on %.0f schedules, N <= 30, worst relative deviation %.2e",
                               trials, worst),
            {}};
}

Outcome identities() {
    Outcome o{true, "", {}};
    const auto check = [&](bool ok, const std::string& what) {
        if (!ok) {
            o.pass = false;
            o.details.push_back("failed: " + what);
        }
    };
    const auto cf = fixtures::fas91_cashflow();
    const Rate r = solve_irr(cf).rate;
    check(partial_pv(cf, r, 0) == pv(cf, r), "partial_pv(0) == pv");
    check(pv_series_direct(cf, r).values.back() == 0.0, "direct PV_N == 0");
    check(backward_series(cf, r).values.back() == 0.0, "backward PV_N == 0");
    const double residual = round_trip_residual(cf, r);
    check(residual <= 1e-9 * std::abs(cf.initial()), fmt("round trip %.3e <= 1e-9 |C_0|", residual));

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> len(1, 40);
    std::uniform_real_distribution<double> rate(0.0, 0.3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto flows = fixtures::random_flows(rng, len(rng), -100.0, 100.0);
        const CashflowSchedule s(0.0, flows);
        const Rate zero(0.0);
        const auto d = pv_series_direct(s, zero);
        const auto b = backward_series(s, zero);
        const auto exact = oracle_pv_series(s, zero);
        double tail = 0.0;
        std::vector<double> sums(flows.size() + 1, 0.0);
        for (std::size_t k = flows.size(); k-- > 0;) sums[k] = sums[k + 1] + flows[k];
        for (std::size_t k = 0; k <= flows.size(); ++k) tail = std::max(tail, std::abs(sums[k]));
        const auto f = forward_series(s, zero, sums[0]);
        double worst = 0.0;
        for (std::size_t k = 0; k <= flows.size(); ++k) {
            const double want = static_cast<double>(exact.values[k]);
            worst = std::max({worst, std::abs(b.values[k] - want), std::abs(f.values[k] - want),
                              std::abs(d.values[k] - want), std::abs(sums[k] - want)});
        }
        // Every scheme is a plain sum here; only summation order differs.
        check(worst <= 2 * ulp(tail) * static_cast<double>(flows.size()), "r = 0 running sums");
    }

    double worst_fd = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto flows = fixtures::random_flows(rng, len(rng), 1.0, 100.0);
        const CashflowSchedule s(-100.0, flows);
        const double x = rate(rng);
        const double h = 1e-6 * (1.0 + x);
        const double fd = (npv(s, Rate(x + h)) - npv(s, Rate(x - h))) / (2 * h);
        const double an = npv_derivative(s, Rate(x));
        worst_fd = std::max(worst_fd, std::abs(fd - an) / std::abs(an));
    }
    check(worst_fd <= 1e-6, fmt("derivative vs finite difference, worst %.2e", worst_fd));
    o.summary = fmt("round trip %.2e |C_0|, derivative vs FD worst %.2e relative", residual / std::abs(cf.initial()),
                    worst_fd) +
                (o.pass ? ", all identities hold" : "");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"IRR reproduction", irr_reproduction},
        {"amortization table reproduction", table_reproduction},
        {"forward instability", forward_instability},
        {"ten-year forward error ratios", ten_year_ratios},
        {"backward robustness", backward_robustness},
        {"rate error linearity", dr_linearity},
        {"perturbation mechanism", mechanism},
        {"identity suite", identities},
    };
    std::size_t first = 1, last = criteria.size();
    if (argc > 1) {
        first = last = std::strtoul(argv[1], nullptr, 10);
        if (first < 1 || first > criteria.size()) {
            std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
            return 2;
        }
    }
    bool all = true;
    for (std::size_t c = first; c <= last; ++c) {
        const auto& [name, fn] = criteria[c - 1];
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what(), {}};
        }
        std::printf("[%s] criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", c, name, o.summary.c_str());
        for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
