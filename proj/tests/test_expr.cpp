// Parser and expression-tree behavior: grammar coverage, error locations,
// print/parse round trips, symbolic differentiation.
#include <doctest.h>

#include "weylforge/chart.hpp"
#include "weylforge/expr.hpp"

using namespace weylforge;

namespace {

SymbolTable table(std::vector<std::string> names) {
    SymbolTable t;
    t.coords = std::move(names);
    return t;
}

double eval_at(const ScalarExpr& e, const Point& p) {
    return e.eval_real(p, 0).value();
}

}  // namespace

TEST_CASE("basic arithmetic and powers") {
    SymbolTable t = table({"rho", "eta"});
    ScalarExpr e = parse_expr("rho^2 + eta", t);
    CHECK(eval_at(e, {2.0, 1.0}) == doctest::Approx(5.0));
    ScalarExpr f = parse_expr("1/(1+x^2+y^2)", table({"x", "y"}));
    CHECK(eval_at(f, {1.0, 1.0}) == doctest::Approx(1.0 / 3.0));
    CHECK(eval_at(parse_expr("2*rho - eta/4", t), {3.0, 8.0}) ==
          doctest::Approx(4.0));
    CHECK(eval_at(parse_expr("-rho^2", t), {2.0, 0.0}) ==
          doctest::Approx(-4.0));
}

TEST_CASE("functions, complex constants and projections") {
    SymbolTable t = table({"x", "y"});
    t.aliases["zeta"] = parse_expr("x", t) +
                        ScalarExpr::constant(std::complex<double>(0, 1)) *
                            parse_expr("y", t);
    ScalarExpr e = parse_expr("re(zeta^2)", t);
    CHECK(eval_at(e, {2.0, 1.0}) == doctest::Approx(3.0));  // x^2 - y^2
    ScalarExpr m = parse_expr("im(conj(zeta))", t);
    CHECK(eval_at(m, {2.0, 1.0}) == doctest::Approx(-1.0));
    CHECK(eval_at(parse_expr("sqrt(x^2+y^2)", t), {3.0, 4.0}) ==
          doctest::Approx(5.0));
    CHECK(eval_at(parse_expr("exp(log(x))", t), {2.5, 0.0}) ==
          doctest::Approx(2.5));
    CHECK(eval_at(parse_expr("sin(x)^2 + cos(x)^2", t), {0.7, 0.0}) ==
          doctest::Approx(1.0));
    CHECK(eval_at(parse_expr("atan2(y, x)", t), {1.0, 1.0}) ==
          doctest::Approx(std::atan2(1.0, 1.0)));
}

TEST_CASE("parse errors carry a location") {
    SymbolTable t = table({"r"});
    CHECK_THROWS_AS(parse_expr("log(r", t), ParseError);
    try {
        parse_expr("log(r", t);
    } catch (const ParseError& e) {
        CHECK(e.offset == 5);  // end of input: unbalanced parenthesis
    }
    try {
        parse_expr("r + unknown", t);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);  // start of the unknown symbol
    }
    CHECK_THROWS_AS(parse_expr("atan2(r)", t), ParseError);  // arity
}

TEST_CASE("print then parse preserves values") {
    SymbolTable t = table({"x", "y", "z"});
    const char* samples[] = {
        "x*y + sin(z)/(1+x^2)",
        "sqrt(1+x^2)*exp(-(y^2))",
        "atan2(y, x) - log(2+z)",
    };
    for (const char* text : samples) {
        ScalarExpr e = parse_expr(text, t);
        ScalarExpr round = parse_expr(e.str(), t);
        const Point p{0.4, -0.3, 0.9};
        CHECK(eval_at(e, p) == doctest::Approx(eval_at(round, p))
                                   .epsilon(1e-14));
    }
}

TEST_CASE("symbolic derivatives agree with jets") {
    SymbolTable t = table({"x", "y"});
    ScalarExpr e = parse_expr("exp(x*y) * sin(x) + y/(1+x^2)", t);
    ScalarExpr dx = e.derivative(0);
    const Point p{0.6, -0.4};
    RJet j = e.eval_real(p);
    CHECK(eval_at(dx, p) == doctest::Approx(j.d1(0)).epsilon(1e-12));
    ScalarExpr dxy = dx.derivative(1);
    CHECK(eval_at(dxy, p) == doctest::Approx(j.d2(0, 1)).epsilon(1e-12));
}

TEST_CASE("non-real evaluation is rejected") {
    SymbolTable t = table({"x"});
    t.aliases["zeta"] =
        ScalarExpr::constant(std::complex<double>(0, 1)) * parse_expr("x", t);
    ScalarExpr e = parse_expr("zeta", t);
    const Point p{1.0};
    CHECK_THROWS_AS(e.eval_real(p, 0), EvalError);
    CHECK(eval_at(parse_expr("re(zeta)", t), {1.0}) == doctest::Approx(0.0));
}
