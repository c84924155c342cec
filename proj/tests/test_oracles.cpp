// Independent oracles for the numerical kernel: finite differences against
// jet derivatives, d o d = 0, Hodge star identities, and reassembly of the
// curvature decomposition.  These gate everything else: if they fail, no
// downstream residual can be trusted.
#include <doctest.h>

#include <cmath>
#include <random>

#include "weylforge/families.hpp"
#include "weylforge/verify.hpp"

using namespace weylforge;

namespace {

constexpr double kFdStep = 1e-4;
constexpr double kFdRelTol = 1e-5;

double rel_gap(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

SymbolTable xyz_table() {
    SymbolTable t;
    t.coords = {"x", "y", "z"};
    return t;
}

}  // namespace

TEST_CASE("jet first and second derivatives match central differences") {
    SymbolTable t = xyz_table();
    const char* exprs[] = {
        "exp(x)*sin(y) + x*y*z",
        "log(1 + x^2 + y^2) / (1 + z^2)",
        "sqrt(1 + x^2*y^2) * cos(z)",
        "atan2(y, 1 + x^2) + x^3*z",
    };
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (const char* text : exprs) {
        ScalarExpr e = parse_expr(text, t);
        for (int trial = 0; trial < 5; ++trial) {
            Point p{u(rng), u(rng), u(rng)};
            RJet j = e.eval_real(p);
            for (int i = 0; i < 3; ++i) {
                Point hi = p, lo = p;
                hi[i] += kFdStep;
                lo[i] -= kFdStep;
                const double fd =
                    (e.eval_real(hi, 0).value() - e.eval_real(lo, 0).value()) /
                    (2 * kFdStep);
                CHECK(rel_gap(j.d1(i), fd) < kFdRelTol);
                // Second derivatives from differencing first-order jets.
                RJet jh = e.eval_real(hi, 1), jl = e.eval_real(lo, 1);
                for (int k = 0; k < 3; ++k) {
                    const double fd2 =
                        (jh.d1(k) - jl.d1(k)) / (2 * kFdStep);
                    CHECK(rel_gap(j.d2(i, k), fd2) < kFdRelTol);
                }
            }
        }
    }
}

TEST_CASE("exterior derivative squares to zero") {
    SymbolTable t = xyz_table();
    FormField a = FormField::one_form(
        {parse_expr("x*y + sin(z)", t), parse_expr("exp(x) * z", t),
         parse_expr("y^2 - x*z", t)});
    FormField dda = exterior_d(exterior_d(a));
    FormField f = FormField::function(3, parse_expr("exp(x)*sin(y*z)", t));
    FormField ddf = exterior_d(exterior_d(f));
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        Point p{u(rng), u(rng), u(rng)};
        CHECK(dda.eval(p).max_abs() < 1e-10);
        CHECK(ddf.eval(p).max_abs() < 1e-10);
    }
}

namespace {

OrientedChart curved3() {
    OrientedChart c({"x", "y", "z"},
                    {{-0.4, 0.4}, {-0.4, 0.4}, {-0.4, 0.4}});
    ScalarExpr x = c.coord(0), y = c.coord(1), z = c.coord(2);
    c.set_metric(0, 0, 1.0 + x * x);
    c.set_metric(1, 1, 1.0 + y * y + x * x);
    c.set_metric(2, 2, 1.0 + z * z);
    c.set_metric(0, 1, 0.2 * x * y);
    c.set_metric(1, 2, 0.1 * z);
    return c;
}

OrientedChart curved4() {
    OrientedChart c({"x", "y", "z", "w"},
                    {{-0.4, 0.4}, {-0.4, 0.4}, {-0.4, 0.4}, {-0.4, 0.4}});
    ScalarExpr x = c.coord(0), y = c.coord(1);
    ScalarExpr z = c.coord(2), w = c.coord(3);
    c.set_metric(0, 0, 1.0 + x * x);
    c.set_metric(1, 1, 1.0 + y * y);
    c.set_metric(2, 2, 1.0 + z * z + x * x);
    c.set_metric(3, 3, 1.0 + w * w);
    c.set_metric(0, 2, 0.15 * x * z);
    c.set_metric(1, 3, 0.1 * y);
    return c;
}

TensorValue random_form(int n, int k, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Slot> slots(k, Slot::kDown);
    TensorValue f(n, slots);
    if (k == 1) {
        for (int i = 0; i < n; ++i) f.at({i}) = u(rng);
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double v = u(rng);
                f.at({i, j}) = v;
                f.at({j, i}) = -v;
            }
    }
    return f;
}

}  // namespace

TEST_CASE("Hodge star: involution sign and isometry on curved metrics") {
    std::mt19937 rng(13);
    {
        OrientedChart c3 = curved3();
        MetricValue g = metric_value(c3, {0.1, -0.2, 0.3});
        TensorValue a = random_form(3, 1, rng);
        for (StarConvention conv :
             {StarConvention::kTilde, StarConvention::kGraded}) {
            TensorValue sa = hodge_star(a, g, conv);
            TensorValue ssa = hodge_star(sa, g, conv);
            // In three dimensions ** on 1-forms is the identity in the
            // plain convention; the graded convention picks up the
            // degree-two sign on the way back, so ** = -id there.
            const double sign =
                conv == StarConvention::kGraded ? -1.0 : 1.0;
            double mx = 0.0;
            for (int i = 0; i < 3; ++i)
                mx = std::max(mx,
                              std::abs(ssa.at({i}) - sign * a.at({i})));
            CHECK(mx < 1e-12);
            CHECK(rel_gap(form_inner(sa, sa, g), form_inner(a, a, g)) <
                  1e-12);
        }
    }
    {
        OrientedChart c4 = curved4();
        MetricValue g = metric_value(c4, {0.1, -0.1, 0.2, -0.3});
        TensorValue f = random_form(4, 2, rng);
        TensorValue sf = hodge_star(f, g, StarConvention::kTilde);
        TensorValue ssf = hodge_star(sf, g, StarConvention::kTilde);
        double mx = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                mx = std::max(mx, std::abs(ssf.at({i, j}) - f.at({i, j})));
        CHECK(mx < 1e-12);  // ** = id on 2-forms in four dimensions
        CHECK(rel_gap(form_inner(sf, sf, g), form_inner(f, f, g)) < 1e-12);
        // Graded convention differs from the plain one by the sign
        // (-1)^{k(k-1)/2} = -1 in degree two.
        TensorValue gf = hodge_star(f, g, StarConvention::kGraded);
        double gap = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                gap = std::max(gap, std::abs(gf.at({i, j}) + sf.at({i, j})));
        CHECK(gap < 1e-12);
    }
}

TEST_CASE("flat R^3 star matches the cross-product table") {
    OrientedChart c({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});
    for (int i = 0; i < 3; ++i)
        c.set_metric(i, i, ScalarExpr::constant(1.0));
    MetricValue g = metric_value(c, {0, 0, 0});
    TensorValue dx(3, {Slot::kDown});
    dx.at({0}) = 1.0;
    TensorValue s = hodge_star(dx, g, StarConvention::kGraded);
    CHECK(s.at({1, 2}) == doctest::Approx(1.0));  // *dx = dy ^ dz
    CHECK(s.at({2, 1}) == doctest::Approx(-1.0));
    CHECK(std::abs(s.at({0, 1})) < 1e-15);
}

TEST_CASE("musical isomorphisms invert each other") {
    OrientedChart c3 = curved3();
    MetricValue g = metric_value(c3, {0.2, 0.1, -0.3});
    std::mt19937 rng(17);
    TensorValue a = random_form(3, 1, rng);
    TensorValue up = musical(g, a, 0, Slot::kUp);
    CHECK(up.weight == a.weight - 2);
    TensorValue back = musical(g, up, 0, Slot::kDown);
    for (int i = 0; i < 3; ++i)
        CHECK(back.at({i}) == doctest::Approx(a.at({i})).epsilon(1e-12));
}

TEST_CASE("connection curvature matches finite differences of the "
          "connection coefficients") {
    FamilySpec spec;
    spec.tag = "geodesic_symmetry";
    spec.params["H"] = "1 + zeta/4";
    FamilyInstance f = build_family(spec);
    const Point p{0.3, 0.35, 0.1};
    JetConnection c = weyl_jets(f.weyl, p);
    std::vector<double> R = connection_curvature(c, 0);
    const int n = 3;
    auto gamma_at = [&](const Point& q, int k, int i, int j) {
        return weyl_jets(f.weyl, q).Gamma(k, i, j).value();
    };
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Point pi_hi = p, pi_lo = p, pj_hi = p, pj_lo = p;
                    pi_hi[i] += kFdStep;
                    pi_lo[i] -= kFdStep;
                    pj_hi[j] += kFdStep;
                    pj_lo[j] -= kFdStep;
                    double fd = (gamma_at(pi_hi, k, j, l) -
                                 gamma_at(pi_lo, k, j, l)) /
                                    (2 * kFdStep) -
                                (gamma_at(pj_hi, k, i, l) -
                                 gamma_at(pj_lo, k, i, l)) /
                                    (2 * kFdStep);
                    for (int m = 0; m < n; ++m)
                        fd += c.Gamma(k, i, m).value() *
                                  c.Gamma(m, j, l).value() -
                              c.Gamma(k, j, m).value() *
                                  c.Gamma(m, i, l).value();
                    CHECK(rel_gap(R[((k * n + l) * n + i) * n + j], fd) <
                          kFdRelTol);
                }
}

TEST_CASE("curvature decomposition reassembles the full tensor") {
    FamilySpec spec;
    spec.tag = "geodesic_symmetry";
    spec.params["H"] = "1 + zeta/4";
    FamilyInstance f = build_family(spec);
    SamplePlan plan(f.weyl.chart, 3);
    for (int trial = 0; trial < 4; ++trial) {
        const Point p = plan.next();
        JetConnection c = weyl_jets(f.weyl, p);
        CurvatureDecomposition d = curvature_decomposition(c);
        const int n = d.n;
        MetricValue g = metric_of(c);
        // Independent reassembly of the non-conformally-invariant part.
        Eigen::MatrixXd r = d.r0 +
                            (d.scal / (2.0 * n * (n - 1))) * g.g -
                            0.5 * d.faraday;
        double mx = 0.0;
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        // [r(e_i) /\ e_j]^k_l = r_il d^k_j - g_jl r_i^k
                        const double ri_up_k = g.ginv.row(k).dot(r.row(i));
                        const double rj_up_k = g.ginv.row(k).dot(r.row(j));
                        const double wedge_ij =
                            (k == j ? r(i, l) : 0.0) - g.g(j, l) * ri_up_k;
                        const double wedge_ji =
                            (k == i ? r(j, l) : 0.0) - g.g(i, l) * rj_up_k;
                        double val = d.weyl[((k * n + l) * n + i) * n + j] +
                                     (k == l ? d.faraday(i, j) : 0.0) -
                                     wedge_ij + wedge_ji;
                        mx = std::max(
                            mx,
                            std::abs(val -
                                     d.riemann[((k * n + l) * n + i) * n +
                                               j]));
                    }
        CHECK(mx < 1e-8);
    }
}
