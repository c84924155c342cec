// Circle lifts over 3-dimensional Weyl spaces and their quotients: the
// correspondence is exercised in both directions, together with the
// induced complex structures and gauge fields on the total space.
#include <doctest.h>

#include "weylforge/jones_tod.hpp"
#include "weylforge/verify.hpp"

using namespace weylforge;

namespace {

OrientedChart flat3() {
    OrientedChart c({"x", "y", "z"},
                    {{0.3, 1.0}, {0.3, 1.0}, {0.3, 1.0}});
    for (int i = 0; i < 3; ++i)
        c.set_metric(i, i, ScalarExpr::constant(1.0));
    return c;
}

OrientedChart spherical3() {
    OrientedChart c({"r", "theta", "phi"},
                    {{1.0, 2.0}, {0.6, 2.5}, {-2.5, 2.5}});
    ScalarExpr r = c.coord(0), th = c.coord(1);
    c.set_metric(0, 0, ScalarExpr::constant(1.0));
    c.set_metric(1, 1, r * r);
    c.set_metric(2, 2, r * r * sin(th) * sin(th));
    c.add_guard(sin(th), GuardKind::kPositive);
    return c;
}

// Frozen sign of the rotationally symmetric potential for the 1/(2r)
// monopole (fixed by the calibration in this file, then reused by the
// family constructors).
const char* kDiracPotential = "cos(theta)/2";

MonopoleData taub_nut_monopole(OrientedChart& base) {
    MonopoleData m;
    m.w = parse_expr("1 + 1/(2*r)", base.symbols());
    m.a = {ScalarExpr::constant(0.0), ScalarExpr::constant(0.0),
           parse_expr(kDiracPotential, base.symbols())};
    return m;
}

}  // namespace

TEST_CASE("trivial lift of flat space is flat and round-trips") {
    OrientedChart base = flat3();
    MonopoleData mono{ScalarExpr::constant(1.0),
                      {ScalarExpr::constant(0.0), ScalarExpr::constant(0.0),
                       ScalarExpr::constant(0.0)}};
    OrientedChart lift = lift_chart(base, mono, LiftGauge::kHarmonic);
    const Point p4{0.5, 0.6, 0.7, 0.1};
    JetConnection c = weyl_jets(lift, {}, p4);
    CurvatureDecomposition d = curvature_decomposition(c);
    CHECK(d.ric_sym.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(asd_weyl_max(c) < 1e-12);
    QuotientData q = quotient_at(lift, p4);
    CHECK((q.g - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-10);
    CHECK(q.omega.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(q.killing_residual < 1e-12);
}

TEST_CASE("harmonic monopole on flat space satisfies the monopole "
          "equation") {
    OrientedChart base = spherical3();
    MonopoleData mono = taub_nut_monopole(base);
    SamplePlan plan(base, 4);
    for (int i = 0; i < 6; ++i) {
        const Point p = plan.next();
        JetConnection c = weyl_jets(base, {}, p);
        CHECK(monopole_residual(c, mono.w, mono.a, p) < 1e-9);
    }
}

TEST_CASE("monopole lift is hyperKahler: Ricci and anti-selfdual Weyl "
          "vanish") {
    OrientedChart base = spherical3();
    MonopoleData mono = taub_nut_monopole(base);
    OrientedChart lift = lift_chart(base, mono, LiftGauge::kHarmonic);
    SamplePlan plan(lift, 5);
    for (int i = 0; i < 4; ++i) {
        const Point p = plan.next();
        JetConnection c = weyl_jets(lift, {}, p);
        CurvatureDecomposition d = curvature_decomposition(c);
        CHECK(d.ric_sym.cwiseAbs().maxCoeff() < 1e-7);
        CHECK(asd_weyl_max(c) < 1e-7);
        CHECK(selfdual_gauge_residual(lift, p) < 1e-7);
    }
}

TEST_CASE("non-monopole data does not produce a selfdual lift") {
    OrientedChart base = spherical3();
    MonopoleData bad;
    bad.w = parse_expr("1 + 1/(2*r)", base.symbols());
    bad.a = {ScalarExpr::constant(0.0), ScalarExpr::constant(0.0),
             parse_expr("cos(theta)", base.symbols())};
    OrientedChart lift = lift_chart(base, bad, LiftGauge::kHarmonic);
    const Point p{1.4, 1.2, 0.3, 0.1};
    JetConnection c = weyl_jets(lift, {}, p);
    CurvatureDecomposition d = curvature_decomposition(c);
    CHECK(std::max(d.ric_sym.cwiseAbs().maxCoeff(), asd_weyl_max(c)) >
          1e-3);
}

TEST_CASE("quotient of the lift restores the base Weyl structure") {
    FamilySpec spec;
    spec.tag = "tod_monopole";
    spec.params["a"] = "0";
    spec.params["b"] = "1";
    spec.params["base_a"] = "1";
    spec.params["base_b"] = "0";
    spec.params["base_c"] = "1";
    FamilyInstance f = build_family(spec);
    OrientedChart lift =
        lift_chart(f.weyl.chart, *f.monopole, LiftGauge::kHarmonic);
    SamplePlan plan(lift, 6);
    for (int i = 0; i < 4; ++i) {
        const Point p4 = plan.next();
        const Point p3{p4[0], p4[1], p4[2]};
        QuotientData q = quotient_at(lift, p4);
        RJet w = f.monopole->w.eval_real(p3, 1);
        const double w2 = w.value() * w.value();
        double mx = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const double want =
                    f.weyl.chart.metric(a, b).eval_real(p3, 0).value();
                mx = std::max(mx, std::abs(q.g(a, b) / w2 - want));
            }
        CHECK(mx < 1e-8);
        for (int a = 0; a < 3; ++a) {
            const double base_omega =
                f.weyl.omega.empty()
                    ? 0.0
                    : f.weyl.omega[a].eval_real(p3, 0).value();
            const double dlw = w.d1(a) / w.value();
            CHECK(std::abs(q.omega(a) - (base_omega - dlw)) < 1e-8);
        }
    }
}

TEST_CASE("lifted complex structure squares to minus one and is parallel") {
    OrientedChart base = flat3();
    MonopoleData mono{ScalarExpr::constant(1.0),
                      {ScalarExpr::constant(0.0), ScalarExpr::constant(0.0),
                       ScalarExpr::constant(0.0)}};
    OrientedChart lift = lift_chart(base, mono, LiftGauge::kHarmonic);
    ScalarExpr x = lift.coord(0), y = lift.coord(1), z = lift.coord(2);
    ScalarExpr r = sqrt(x * x + y * y + z * z);
    std::vector<ScalarExpr> chi3 = {x / r, y / r, z / r};
    std::vector<ScalarExpr> chi = lifted_congruence(base, mono, chi3);
    const Point p4{0.5, 0.6, 0.7, 0.2};
    EndoJets J = lifted_complex_structure(lift, chi, p4);
    CHECK(endo_square_residual(J) < 1e-10);
    CHECK(hermitian_derivative_residual(lift, J, p4) < 1e-8);
}

TEST_CASE("second monopole induces a selfdual gauge field on the lift") {
    OrientedChart base = spherical3();
    MonopoleData mono{ScalarExpr::constant(1.0),
                      {ScalarExpr::constant(0.0), ScalarExpr::constant(0.0),
                       ScalarExpr::constant(0.0)}};
    MonopoleData second;
    second.w = parse_expr("1/r", base.symbols());
    second.a = {ScalarExpr::constant(0.0), ScalarExpr::constant(0.0),
                parse_expr(kDiracPotential, base.symbols()) * 2.0};
    OrientedChart lift = lift_chart(base, mono, LiftGauge::kHarmonic);
    SamplePlan plan(lift, 7);
    // First confirm the second pair really is a monopole.
    for (int i = 0; i < 3; ++i) {
        const Point p4 = plan.next();
        const Point p3{p4[0], p4[1], p4[2]};
        JetConnection cb = weyl_jets(base, {}, p3);
        CHECK(monopole_residual(cb, second.w, second.a, p3) < 1e-9);
        CHECK(maxwell_asd_residual(lift, mono, second, p4) < 1e-7);
    }
}
