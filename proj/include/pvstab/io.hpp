#pragma once

// File formats and report serialization.
//
// Cashflow CSV:   header `period,amount`; periods are unique non-negative
//                 integers; period 0 is optional (defaults to 0); missing
//                 interior periods are zero.
// Loan spec:      `key = value` lines, `#` starts a comment. Keys: principal,
//                 net_fees, stated_rate, payment, periods. A missing payment
//                 is derived from the stated rate and rounded to cents.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "pvstab/cashflow.hpp"
#include "pvstab/error_lab.hpp"
#include "pvstab/fas91.hpp"
#include "pvstab/irr.hpp"

namespace pvstab::io {

using nlohmann::json;

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view text, const std::string& where) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw InputError(where + ": not a number: '" + std::string(text) + "'");
    }
    return value;
}

inline std::size_t parse_index(std::string_view text, const std::string& where) {
    text = trim(text);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw InputError(where + ": not a non-negative integer: '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace detail

inline CashflowSchedule read_cashflow_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::map<std::size_t, Money> amounts;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim(line);
        if (text.empty()) continue;
        const auto comma = text.find(',');
        if (comma == std::string_view::npos) {
            throw InputError("line " + std::to_string(line_no) + ": expected 'period,amount'");
        }
        const auto left = detail::trim(text.substr(0, comma));
        const auto right = detail::trim(text.substr(comma + 1));
        if (!header) {
            if (left != "period" || right != "amount") throw InputError("missing 'period,amount' header");
            header = true;
            continue;
        }
        const std::string where = "line " + std::to_string(line_no);
        const std::size_t period = detail::parse_index(left, where);
        const double amount = detail::parse_double(right, where);
        if (!amounts.emplace(period, amount).second) {
            throw InputError(where + ": duplicate period " + std::to_string(period));
        }
    }
    if (!header) throw InputError("missing 'period,amount' header");

    Money initial = 0.0;
    std::vector<Money> flows;
    for (const auto& [period, amount] : amounts) {
        if (period == 0) {
            initial = amount;
            continue;
        }
        if (flows.size() < period) flows.resize(period, 0.0);
        flows[period - 1] = amount;
    }
    CashflowSchedule schedule(initial, std::move(flows));
    validate(schedule);
    return schedule;
}

inline LoanSpec read_loan_spec(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = line;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = detail::trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw InputError("line " + std::to_string(line_no) + ": expected key=value");
        const std::string key(detail::trim(text.substr(0, eq)));
        const std::string value(detail::trim(text.substr(eq + 1)));
        if (key != "principal" && key != "net_fees" && key != "stated_rate" && key != "payment" && key != "periods") {
            throw InputError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (!kv.emplace(key, value).second) throw InputError("duplicate key '" + key + "'");
    }
    auto need = [&](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw InputError(std::string("loan spec is missing '") + key + "'");
        return it->second;
    };
    LoanSpec loan;
    loan.principal = detail::parse_double(need("principal"), "principal");
    loan.net_fees = kv.count("net_fees") ? detail::parse_double(kv["net_fees"], "net_fees") : 0.0;
    loan.stated_rate = detail::parse_double(need("stated_rate"), "stated_rate");
    loan.periods = detail::parse_index(need("periods"), "periods");
    loan.payment = kv.count("payment") ? detail::parse_double(kv["payment"], "payment")
                                       : round_cents(annuity_payment(loan.principal, loan.stated_rate, loan.periods));
    loan.check();
    return loan;
}

template <class Reader>
auto read_file(const std::string& path, Reader reader) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return reader(in);
}

/// Shortest decimal that round-trips to the same binary64 value.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0;  // no "-0"
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

inline std::string format_cents(double x) {
    x = round_cents(x);
    if (x == 0.0) x = 0.0;
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 2);
    return std::string(buf, ptr);
}

// ---- amortization schedule -------------------------------------------------

inline constexpr const char* schedule_csv_header =
    "period,(1) cash_inflow,(2) stated_interest,(3) amortization,(4) interest_income,"
    "(5) unamortized_principal,(6) unamortized_fees,(7) carrying_amount";

inline std::vector<double> row_cells(const AmortizationRow& r) {
    return {r.cash_inflow,           r.stated_interest,  r.amortization,   r.interest_income,
            r.unamortized_principal, r.unamortized_fees, r.carrying_amount};
}

inline void write_schedule_csv(std::ostream& out, const std::vector<AmortizationRow>& rows, Rounding rounding) {
    const auto fmt = [rounding](double x) { return rounding == Rounding::cents ? format_cents(x) : format_number(x); };
    out << schedule_csv_header << '\n';
    for (const auto& row : rows) {
        out << row.period;
        for (double cell : row_cells(row)) out << ',' << fmt(cell);
        out << '\n';
    }
}

inline json schedule_json(const std::vector<AmortizationRow>& rows, Rounding rounding, const Rate& effective_rate) {
    const auto cell = [rounding](double x) -> json {
        if (rounding == Rounding::cents) return format_cents(x);
        return x;
    };
    json j;
    j["effective_rate"] = effective_rate.value();
    j["rounding"] = rounding == Rounding::cents ? "cents" : "none";
    j["rows"] = json::array();
    for (const auto& r : rows) {
        j["rows"].push_back({{"period", r.period},
                             {"cash_inflow", cell(r.cash_inflow)},
                             {"stated_interest", cell(r.stated_interest)},
                             {"amortization", cell(r.amortization)},
                             {"interest_income", cell(r.interest_income)},
                             {"unamortized_principal", cell(r.unamortized_principal)},
                             {"unamortized_fees", cell(r.unamortized_fees)},
                             {"carrying_amount", cell(r.carrying_amount)}});
    }
    j["total_amortization"] = cell(total_amortization(rows));
    return j;
}

inline void write_schedule_text(std::ostream& out, const std::vector<AmortizationRow>& rows, Rounding rounding) {
    const auto fmt = [rounding](double x) { return rounding == Rounding::cents ? format_cents(x) : format_number(x); };
    static constexpr const char* titles[] = {"(1) Cash",     "(2) Stated",  "(3) Amort.", "(4) Interest",
                                             "(5) Principal", "(6) Fees",   "(7) Carrying"};
    const int width = rounding == Rounding::cents ? 14 : 24;
    std::ostringstream line;
    line.width(6);
    line << std::left << "Period";
    for (const char* t : titles) {
        line.width(width);
        line << std::right << t;
    }
    out << line.str() << '\n';
    for (const auto& row : rows) {
        std::ostringstream l;
        l.width(6);
        l << std::left << row.period;
        for (double cell : row_cells(row)) {
            l.width(width);
            l << std::right << fmt(cell);
        }
        out << l.str() << '\n';
    }
    out << "Total amortization: " << fmt(total_amortization(rows)) << '\n';
}

// ---- IRR -------------------------------------------------------------------

inline json irr_json(const IrrResult& r) {
    return {{"rate", r.rate.value()},
            {"uncertainty", r.rate.uncertainty()},
            {"iterations", r.iterations},
            {"residual", r.residual},
            {"sign_changes", r.sign_changes},
            {"ambiguous", r.ambiguous}};
}

// ---- experiment report -----------------------------------------------------

inline json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

inline json report_json(const ExperimentReport& report) {
    json j;
    j["rate"] = {{"value", report.rate.value()}, {"uncertainty", report.rate.uncertainty()}};
    j["reference"] = to_string(report.reference);
    j["reference_values"] = report.reference_values;
    j["schemes"] = json::array();
    for (const auto& s : report.schemes) {
        json ratios = json::array();
        for (const auto& r : s.trajectory.ratios) ratios.push_back(optional_json(r));
        json model = nullptr;
        if (s.model) model = {{"per_k_bound", s.model->per_k_bound}, {"recurrence", s.model->recurrence}};
        j["schemes"].push_back({{"scheme", to_string(s.scheme)},
                                {"values", s.series.values},
                                {"abs_errors", s.trajectory.abs_errors},
                                {"ratios", ratios},
                                {"fitted_growth", optional_json(s.trajectory.fitted_growth)},
                                {"fit_points", s.trajectory.fit_points},
                                {"noise_floor", s.trajectory.noise_floor},
                                {"model", model},
                                {"verdict", to_string(s.verdict)}});
    }
    j["sweep"] = json::array();
    for (const auto& p : report.sweep) {
        j["sweep"].push_back({{"tolerance", p.tolerance},
                              {"rate", p.rate.value()},
                              {"uncertainty", p.rate.uncertainty()},
                              {"achieved_dr", p.achieved_dr},
                              {"tail_error", p.tail_error},
                              {"tail_per_dr", p.tail_per_dr}});
    }
    j["notes"] = report.notes;
    return j;
}

inline void write_report_text(std::ostream& out, const ExperimentReport& report) {
    const auto cell = [](std::ostream& o, const std::string& s, int w) {
        o.width(w);
        o << std::right << s;
    };
    out << "rate " << format_number(report.rate.value()) << "  dr " << format_number(report.rate.uncertainty())
        << "  reference " << to_string(report.reference) << '\n';
    if (!report.schemes.empty()) {
        std::ostringstream head;
        cell(head, "k", 5);
        cell(head, "reference", 25);
        for (const auto& s : report.schemes) {
            const std::string name = to_string(s.scheme);
            cell(head, name, 25);
            cell(head, name + " err", 25);
            cell(head, "ratio", 12);
        }
        out << head.str() << '\n';
        for (std::size_t k = 0; k < report.reference_values.size(); ++k) {
            std::ostringstream l;
            cell(l, std::to_string(k), 5);
            cell(l, format_number(report.reference_values[k]), 25);
            for (const auto& s : report.schemes) {
                cell(l, format_number(s.series.values[k]), 25);
                cell(l, format_number(s.trajectory.abs_errors[k]), 25);
                std::string ratio = "-";
                if (k >= 1 && s.trajectory.ratios[k - 1]) {
                    std::ostringstream r;
                    r.precision(6);
                    r << *s.trajectory.ratios[k - 1];
                    ratio = r.str();
                }
                cell(l, ratio, 12);
            }
            out << l.str() << '\n';
        }
    }
    for (const auto& s : report.schemes) {
        out << to_string(s.scheme) << ": fitted_growth "
            << (s.trajectory.fitted_growth ? format_number(*s.trajectory.fitted_growth) : std::string("undefined"))
            << " (" << s.trajectory.fit_points << " points above floor " << format_number(s.trajectory.noise_floor)
            << "), verdict " << to_string(s.verdict);
        if (s.model && !s.model->per_k_bound.empty()) {
            double peak_err = 0.0, peak_bound = 0.0, peak_rec = 0.0;
            for (double e : s.trajectory.abs_errors) peak_err = std::max(peak_err, e);
            for (double b : s.model->per_k_bound) peak_bound = std::max(peak_bound, b);
            for (double b : s.model->recurrence) peak_rec = std::max(peak_rec, b);
            out << ", max error " << format_number(peak_err) << " vs model " << format_number(peak_bound);
            if (!s.model->recurrence.empty()) out << " (full recurrence " << format_number(peak_rec) << ")";
        }
        out << '\n';
    }
    for (const auto& p : report.sweep) {
        out << "sweep tol " << format_number(p.tolerance) << ": rate " << format_number(p.rate.value())
            << " achieved dr " << format_number(p.achieved_dr) << " tail error " << format_number(p.tail_error)
            << " tail/dr " << format_number(p.tail_per_dr) << '\n';
    }
    for (const auto& n : report.notes) out << "note: " << n << '\n';
}

}  // namespace pvstab::io
