#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vdb/errors.hpp"
#include "vdb/weights.hpp"

namespace vdb {

/// Evaluation grid for the numerical property checks.
///
/// Verdicts produced against a grid are grid-certified, not proofs: the
/// probes sample integer degrees 1..dmax plus a real grid with the given
/// step on [1, dmax]. The downstream extremal machinery only consumes
/// integer degrees, so this is what those results actually need.
struct GridSpec {
    int dmax = 50;
    double continuous_step = 0.05;
    double strictness_tolerance = 1e-12;

    void validate() const {
        if (dmax < 4) fail(errc::parameter_error, "grid dmax must be at least 4");
        if (!(continuous_step > 0.0))
            fail(errc::parameter_error, "grid step must be positive");
        if (!(strictness_tolerance >= 0.0))
            fail(errc::parameter_error, "tolerance must be nonnegative");
    }

    /// Real grid on [1, dmax]; integer degrees only for table-backed weights.
    std::vector<double> axis(const WeightFunction& w) const {
        std::vector<double> xs;
        if (w.integer_domain()) {
            for (int d = 1; d <= dmax; ++d) xs.push_back(static_cast<double>(d));
            return xs;
        }
        for (long i = 0;; ++i) {
            double x = 1.0 + static_cast<double>(i) * continuous_step;
            if (x > static_cast<double>(dmax) + continuous_step / 2) break;
            xs.push_back(std::min(x, static_cast<double>(dmax)));
        }
        return xs;
    }
};

enum class Verdict { pass, fail, inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass:         return "pass";
        case Verdict::fail:         return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

/// A reproducible violation: re-evaluating the weight at `args` yields
/// `values` again (to within reporting precision).
struct Counterexample {
    std::string condition;
    std::vector<double> args;
    std::vector<double> values;
};

struct PropertyCheck {
    Verdict verdict = Verdict::inconclusive;
    std::optional<Counterexample> witness;
    std::string note;
};

struct PropertyReport {
    nlohmann::json weight_id;
    Verdict p_holds = Verdict::inconclusive;
    Verdict pstar_holds = Verdict::inconclusive;
    std::optional<Counterexample> counterexample;
    GridSpec checked_domain;
};

/// H(a,b) = a[I(a,a) - I(a-1,a)] - b[I(b+1,b) - I(b,b)] for a > b+1 >= 2.
inline double compute_H(const WeightFunction& w, int a, int b) {
    if (!(a > b + 1 && b + 1 >= 2))
        fail(errc::domain_error, "H(a,b) requires a > b+1 >= 2; got a = " +
                                     std::to_string(a) + ", b = " + std::to_string(b));
    double da = a, db = b;
    return da * (w.eval(da, da) - w.eval(da - 1, da)) -
           db * (w.eval(db + 1, db) - w.eval(db, db));
}

/// Grid check of: I increasing in its first argument, and
/// h(x) = I(a,x) - I(b,x) non-increasing in x for all integer a >= b >= 1.
inline PropertyCheck check_property_p(const WeightFunction& w, const GridSpec& grid = {}) {
    grid.validate();
    const double eps = grid.strictness_tolerance;
    PropertyCheck out;
    try {
        const std::vector<double> xs = grid.axis(w);

        // I(a, x) for integer a and grid x, shared by both conditions
        std::vector<std::vector<double>> vals(static_cast<std::size_t>(grid.dmax) + 1);
        for (int a = 1; a <= grid.dmax; ++a) {
            auto& row = vals[static_cast<std::size_t>(a)];
            row.reserve(xs.size());
            for (double x : xs) row.push_back(w.eval(static_cast<double>(a), x));
        }

        // monotone increasing along the grid, for every integer second argument
        for (int y = 1; y <= grid.dmax; ++y) {
            const auto& row = vals[static_cast<std::size_t>(y)];  // symmetric: I(y, x)
            for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
                if (row[j + 1] < row[j] - eps) {
                    out.verdict = Verdict::fail;
                    out.witness = Counterexample{
                        "increasing_in_x",
                        {xs[j], xs[j + 1], static_cast<double>(y)},
                        {row[j], row[j + 1]}};
                    return out;
                }
            }
        }

        // h(x) = I(a,x) - I(b,x) non-increasing for a >= b
        for (int a = 1; a <= grid.dmax; ++a) {
            const auto& ra = vals[static_cast<std::size_t>(a)];
            for (int b = 1; b <= a; ++b) {
                const auto& rb = vals[static_cast<std::size_t>(b)];
                for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
                    double h0 = ra[j] - rb[j];
                    double h1 = ra[j + 1] - rb[j + 1];
                    if (h1 > h0 + eps) {
                        out.verdict = Verdict::fail;
                        out.witness = Counterexample{
                            "difference_decreasing",
                            {static_cast<double>(a), static_cast<double>(b), xs[j],
                             xs[j + 1]},
                            {h0, h1}};
                        return out;
                    }
                }
            }
        }
        out.verdict = Verdict::pass;
    } catch (const error& e) {
        out.verdict = Verdict::inconclusive;
        out.note = e.what();
    }
    return out;
}

/// Property P plus H(a,b) > 0 for all integers 2 <= b+1 < a <= dmax.
/// A failing H is reported at the lexicographically least (a,b).
inline PropertyReport check_property_pstar(const WeightFunction& w,
                                           const GridSpec& grid = {}) {
    grid.validate();
    PropertyReport report;
    report.weight_id = w.id_json();
    report.checked_domain = grid;

    PropertyCheck p = check_property_p(w, grid);
    report.p_holds = p.verdict;
    if (p.verdict != Verdict::pass) {
        report.pstar_holds = p.verdict;  // P* requires P
        report.counterexample = p.witness;
        return report;
    }

    try {
        for (int a = 3; a <= grid.dmax; ++a)
            for (int b = 1; b + 1 < a; ++b) {
                double h = compute_H(w, a, b);
                if (!(h > grid.strictness_tolerance)) {
                    report.pstar_holds = Verdict::fail;
                    report.counterexample = Counterexample{
                        "H_positive", {static_cast<double>(a), static_cast<double>(b)}, {h}};
                    return report;
                }
            }
        report.pstar_holds = Verdict::pass;
    } catch (const error&) {
        report.pstar_holds = Verdict::inconclusive;
    }
    return report;
}

struct ProbeResult {
    Verdict verdict = Verdict::inconclusive;
    /// Largest successive difference observed; strictly decreasing probes
    /// report a negative margin.
    double margin = 0.0;
    std::optional<Counterexample> witness;
};

/// Checks that x -> I(x,y) - I(x,y-z) is strictly decreasing along the grid.
inline ProbeResult difference_probe_decreasing(const WeightFunction& w, double y, double z,
                                               const GridSpec& grid = {}) {
    grid.validate();
    if (!(y >= z && z > 0.0 && y - z >= 1.0))
        fail(errc::domain_error, "probe requires y >= z > 0 and y - z >= 1");
    ProbeResult out;
    const double eps = grid.strictness_tolerance;
    const std::vector<double> xs = grid.axis(w);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
        double d0 = w.eval(xs[j], y) - w.eval(xs[j], y - z);
        double d1 = w.eval(xs[j + 1], y) - w.eval(xs[j + 1], y - z);
        double step = d1 - d0;
        if (step > worst) worst = step;
        if (!(step < -eps) && !out.witness) {
            out.witness = Counterexample{"strictly_decreasing_in_x",
                                         {xs[j], xs[j + 1], y, z},
                                         {d0, d1}};
        }
    }
    out.margin = worst;
    out.verdict = out.witness ? Verdict::fail : Verdict::pass;
    return out;
}

struct SweepEntry {
    double parameter = 0.0;
    PropertyReport report;
};

/// One P* report per sampled parameter in [lo, hi] with the given step.
inline std::vector<SweepEntry> sweep_parameters(weight_family family, double lo, double hi,
                                                double step, const GridSpec& grid = {}) {
    grid.validate();
    if (!(lo < hi)) fail(errc::parameter_error, "sweep needs lo < hi");
    if (!(step > 0.0)) fail(errc::parameter_error, "sweep needs step > 0");

    auto make = [family](double p) {
        switch (family) {
            case weight_family::general_sombor:
                return WeightFunction::general_sombor(p);
            case weight_family::p_sombor:
                return WeightFunction::p_sombor(p);
            case weight_family::general_sum_connectivity:
                return WeightFunction::general_sum_connectivity(p);
            case weight_family::general_randic:
                return WeightFunction::general_randic(p);
            default:
                fail(errc::parameter_error,
                     std::string(family_name(family)) + " is not a one-parameter family");
        }
    };

    std::vector<SweepEntry> out;
    for (long i = 0;; ++i) {
        double p = lo + static_cast<double>(i) * step;
        if (p > hi + step / 2) break;
        out.push_back({p, check_property_pstar(make(p), grid)});
    }
    return out;
}

/// Maximal sub-intervals of the sweep where P* was grid-certified.
inline std::vector<std::pair<double, double>> certified_ranges(
    const std::vector<SweepEntry>& entries) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].report.pstar_holds != Verdict::pass) continue;
        std::size_t j = i;
        while (j + 1 < entries.size() &&
               entries[j + 1].report.pstar_holds == Verdict::pass)
            ++j;
        out.emplace_back(entries[i].parameter, entries[j].parameter);
        i = j;
    }
    return out;
}

// -- JSON serialization --------------------------------------------------

inline void to_json(nlohmann::json& j, const GridSpec& g) {
    j = {{"dmax", g.dmax},
         {"continuous_step", g.continuous_step},
         {"strictness_tolerance", g.strictness_tolerance}};
}

inline void to_json(nlohmann::json& j, const Counterexample& c) {
    j = {{"condition", c.condition}, {"args", c.args}, {"values", c.values}};
}

inline void to_json(nlohmann::json& j, const PropertyReport& r) {
    j = {{"weight", r.weight_id},
         {"p_holds", verdict_name(r.p_holds)},
         {"pstar_holds", verdict_name(r.pstar_holds)},
         {"checked_domain", r.checked_domain},
         {"certification", "grid"}};
    if (r.counterexample)
        j["counterexample"] = *r.counterexample;
    else
        j["counterexample"] = nullptr;
}

inline void to_json(nlohmann::json& j, const SweepEntry& e) {
    j = {{"parameter", e.parameter}, {"report", e.report}};
}

}  // namespace vdb
