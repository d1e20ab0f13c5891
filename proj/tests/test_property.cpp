#include <doctest.h>

#include <cmath>

#include "vdb/property.hpp"

using namespace vdb;
using doctest::Approx;

namespace {

// 3(sqrt18 - sqrt13) - (sqrt5 - sqrt2), in 40-digit arithmetic
constexpr double kSomborH31 = 1.0894138198391929;

}  // namespace

TEST_SUITE("property") {

TEST_CASE("compute_H reference values") {
    CHECK(compute_H(WeightFunction::sombor(), 3, 1) == Approx(kSomborH31).epsilon(1e-12));

    // linear weight (x+y): both bracketed differences are exactly 1, so H = a - b
    WeightFunction linear = WeightFunction::general_sum_connectivity(1.0);
    CHECK(compute_H(linear, 4, 2) == Approx(2.0).epsilon(1e-13));
    for (int a = 3; a <= 20; ++a)
        for (int b = 1; b + 1 < a; ++b)
            CHECK(compute_H(linear, a, b) == Approx(double(a - b)).epsilon(1e-11));

    CHECK_THROWS_WITH_AS(compute_H(WeightFunction::sombor(), 3, 2),
                         doctest::Contains("domain_error"), error);
    CHECK_THROWS_WITH_AS(compute_H(WeightFunction::sombor(), 2, 1),
                         doctest::Contains("domain_error"), error);
    CHECK_THROWS_WITH_AS(compute_H(WeightFunction::sombor(), 3, 0),
                         doctest::Contains("domain_error"), error);
}

TEST_CASE("grid spec validation") {
    CHECK_THROWS_AS(check_property_p(WeightFunction::sombor(), GridSpec{3, 0.05, 1e-12}),
                    error);
    CHECK_THROWS_AS(check_property_p(WeightFunction::sombor(), GridSpec{50, 0.0, 1e-12}),
                    error);
    CHECK_THROWS_AS(check_property_p(WeightFunction::sombor(), GridSpec{50, 0.05, -1.0}),
                    error);
}

TEST_CASE("property P verdicts") {
    GridSpec quick{12, 0.25, 1e-12};

    CHECK(check_property_p(WeightFunction::sombor(), quick).verdict == Verdict::pass);
    CHECK(check_property_p(WeightFunction::general_sombor(0.75), quick).verdict ==
          Verdict::pass);

    PropertyCheck dec = check_property_p(WeightFunction::general_sum_connectivity(-1.0),
                                         quick);
    CHECK(dec.verdict == Verdict::fail);
    REQUIRE(dec.witness.has_value());
    CHECK(dec.witness->condition == "increasing_in_x");

    // the stored counterexample reproduces the violation
    WeightFunction w = WeightFunction::general_sum_connectivity(-1.0);
    const auto& cx = *dec.witness;
    double v0 = w.eval(cx.args[0], cx.args[2]);
    double v1 = w.eval(cx.args[1], cx.args[2]);
    CHECK(v0 == Approx(cx.values[0]).epsilon(1e-12));
    CHECK(v1 == Approx(cx.values[1]).epsilon(1e-12));
    CHECK(v1 < v0 - 1e-12);
}

TEST_CASE("property P fails for a superadditive difference") {
    // (x*y)^2 is increasing, but I(a,x)-I(b,x) grows with x for a > b
    GridSpec quick{10, 0.5, 1e-12};
    PropertyCheck check = check_property_p(WeightFunction::general_randic(2.0), quick);
    CHECK(check.verdict == Verdict::fail);
    REQUIRE(check.witness.has_value());
    CHECK(check.witness->condition == "difference_decreasing");
}

TEST_CASE("property P* verdicts at dmax 50") {
    GridSpec grid{};  // defaults: dmax 50, step 0.05

    PropertyReport so = check_property_pstar(WeightFunction::sombor(), grid);
    CHECK(so.p_holds == Verdict::pass);
    CHECK(so.pstar_holds == Verdict::pass);
    CHECK(!so.counterexample.has_value());

    CHECK(check_property_pstar(WeightFunction::p_sombor(1.5), grid).pstar_holds ==
          Verdict::pass);

    PropertyReport bad = check_property_pstar(
        WeightFunction::general_sum_connectivity(-1.0), grid);
    CHECK(bad.p_holds == Verdict::fail);
    CHECK(bad.pstar_holds == Verdict::fail);
    REQUIRE(bad.counterexample.has_value());
}

TEST_CASE("pstar pass implies p pass structurally") {
    GridSpec quick{10, 0.5, 1e-12};
    for (const auto& w : {WeightFunction::sombor(), WeightFunction::general_randic(0.5),
                          WeightFunction::general_sombor(0.6),
                          WeightFunction::general_sum_connectivity(-0.5)}) {
        PropertyReport r = check_property_pstar(w, quick);
        if (r.pstar_holds == Verdict::pass) CHECK(r.p_holds == Verdict::pass);
    }
}

TEST_CASE("H failure reports the lexicographically least pair") {
    // I(x,y) = f(x+y) for an increasing concave f: property P holds, and the
    // increment sequence is tuned so H(3,1) = 0.2 but H(4,1) = -0.2. The scan
    // must report (4,1), the least failing pair.
    const double f[13] = {0, 0, 1, 2, 2.5, 2.95, 3.35, 3.65, 3.85, 4.0, 4.12, 4.22, 4.3};
    int dmax = 6;
    std::vector<double> t(static_cast<std::size_t>(dmax) * dmax);
    for (int x = 1; x <= dmax; ++x)
        for (int y = 1; y <= dmax; ++y)
            t[static_cast<std::size_t>(x - 1) * dmax + (y - 1)] = f[x + y];
    WeightFunction w = WeightFunction::custom_table(dmax, t);
    GridSpec grid{6, 0.5, 1e-12};
    PropertyReport r = check_property_pstar(w, grid);
    CHECK(r.p_holds == Verdict::pass);
    CHECK(r.pstar_holds == Verdict::fail);
    REQUIRE(r.counterexample.has_value());
    CHECK(r.counterexample->condition == "H_positive");
    CHECK(r.counterexample->args[0] == 4.0);
    CHECK(r.counterexample->args[1] == 1.0);
    CHECK(r.counterexample->values[0] == Approx(-0.2).epsilon(1e-12));
}

TEST_CASE("difference probes") {
    GridSpec quick{12, 0.25, 1e-12};

    ProbeResult a = difference_probe_decreasing(WeightFunction::general_sombor(0.75), 5.0,
                                                2.0, quick);
    CHECK(a.verdict == Verdict::pass);
    CHECK(a.margin < 0.0);

    ProbeResult b = difference_probe_decreasing(WeightFunction::p_sombor(2.0), 4.0, 1.0,
                                                quick);
    CHECK(b.verdict == Verdict::pass);

    // (x+y) - (x+y-z) = z: constant in x, so strictness fails with margin 0
    ProbeResult c = difference_probe_decreasing(
        WeightFunction::general_sum_connectivity(1.0), 4.0, 1.0, quick);
    CHECK(c.verdict == Verdict::fail);
    CHECK(c.margin == Approx(0.0).epsilon(1e-12));
    REQUIRE(c.witness.has_value());

    CHECK_THROWS_WITH_AS(
        difference_probe_decreasing(WeightFunction::sombor(), 2.0, 1.5, quick),
        doctest::Contains("domain_error"), error);
}

TEST_CASE("parameter sweeps over the certified ranges") {
    GridSpec grid{20, 0.25, 1e-12};  // lighter than the acceptance run

    auto gsombor = sweep_parameters(weight_family::general_sombor, 0.5, 0.99, 0.07, grid);
    for (const auto& e : gsombor) CHECK(e.report.pstar_holds == Verdict::pass);

    auto psombor = sweep_parameters(weight_family::p_sombor, 1.05, 2.0, 0.19, grid);
    for (const auto& e : psombor) CHECK(e.report.pstar_holds == Verdict::pass);

    auto gsc = sweep_parameters(weight_family::general_sum_connectivity, 0.05, 0.95, 0.15,
                                grid);
    for (const auto& e : gsc) CHECK(e.report.pstar_holds == Verdict::pass);

    auto ranges = certified_ranges(gsombor);
    REQUIRE(ranges.size() == 1);
    CHECK(ranges.front().first == Approx(0.5));

    CHECK_THROWS_WITH_AS(sweep_parameters(weight_family::sombor, 0.0, 1.0, 0.1, grid),
                         doctest::Contains("parameter_error"), error);
    CHECK_THROWS_WITH_AS(
        sweep_parameters(weight_family::general_sombor, 1.0, 0.5, 0.1, grid),
        doctest::Contains("parameter_error"), error);
}

TEST_CASE("table weights beyond their domain are inconclusive") {
    WeightFunction tiny = WeightFunction::custom_table(2, {1, 2, 2, 3});
    GridSpec grid{6, 0.5, 1e-12};
    PropertyCheck p = check_property_p(tiny, grid);
    CHECK(p.verdict == Verdict::inconclusive);
    CHECK(!p.note.empty());
}

TEST_CASE("report serialization shape") {
    PropertyReport r = check_property_pstar(WeightFunction::general_sombor(0.75),
                                            GridSpec{10, 0.5, 1e-12});
    nlohmann::json j = r;
    CHECK(j["weight"]["family"] == "general_sombor");
    CHECK(j["pstar_holds"] == "pass");
    CHECK(j["certification"] == "grid");
    CHECK(j["checked_domain"]["dmax"] == 10);
}

}  // TEST_SUITE
