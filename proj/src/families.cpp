#include "weylforge/families.hpp"

#include <cmath>
#include <sstream>

namespace weylforge {
namespace {

using cplx = std::complex<double>;

const ScalarExpr kZero = ScalarExpr::constant(0.0);
const ScalarExpr kOne = ScalarExpr::constant(1.0);

ScalarExpr imag_unit() { return ScalarExpr::constant(cplx(0.0, 1.0)); }

std::string require_param(const FamilySpec& spec, const std::string& key) {
    auto it = spec.params.find(key);
    if (it == spec.params.end())
        throw FamilyError(spec.tag + ": missing parameter '" + key + "'");
    return it->second;
}

std::string param_or(const FamilySpec& spec, const std::string& key,
                     const std::string& fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}

double real_param(const FamilySpec& spec, const std::string& key) {
    const std::string text = require_param(spec, key);
    try {
        ScalarExpr e = parse_expr(text, SymbolTable{});
        if (!e.free_symbols().empty())
            throw FamilyError(spec.tag + ": parameter '" + key +
                              "' must be a number");
        return e.eval_real({}, 0).value();
    } catch (const ParseError& err) {
        throw FamilyError(spec.tag + ": parameter '" + key + "': " + std::string(err.what()));
    } catch (const EvalError& err) {
        throw FamilyError(spec.tag + ": parameter '" + key + "': " +
                          err.what());
    }
}

ScalarExpr expr_param(const FamilySpec& spec, const std::string& key,
                      const SymbolTable& symbols, const std::string& fallback =
                                                      std::string()) {
    const std::string text = fallback.empty() ? require_param(spec, key)
                                              : param_or(spec, key, fallback);
    try {
        return parse_expr(text, symbols);
    } catch (const ParseError& err) {
        throw FamilyError(spec.tag + ": parameter '" + key + "': " + std::string(err.what()) +
                          " (offset " + std::to_string(err.offset) + ")");
    }
}

// Requires |field| <= tol at deterministic sample points of the chart.
void require_vanishing(const OrientedChart& chart, const ScalarExpr& field,
                       double tol, const std::string& what) {
    SamplePlan plan(chart, 1);
    for (int i = 0; i < 12; ++i) {
        const Point p = plan.next();
        double v;
        try {
            v = field.eval_real(p, 0).value();
        } catch (const EvalError&) {
            continue;
        }
        if (std::abs(v) > tol)
            throw FamilyError(what + " (residual " + std::to_string(v) + ")");
    }
}

// Stereographic 2-sphere conformal factor 4 / (1 + X^2 + Y^2)^2.
ScalarExpr sphere_factor(const ScalarExpr& X, const ScalarExpr& Y) {
    ScalarExpr r2 = X * X + Y * Y;
    return 4.0 / ((1.0 + r2) * (1.0 + r2));
}

FamilyInstance make_geodesic_symmetry(const FamilySpec& spec) {
    OrientedChart chart({"X", "Y", "psi"},
                        {{0.15, 0.55}, {0.15, 0.55}, {-0.5, 0.5}});
    ScalarExpr X = chart.coord(0), Y = chart.coord(1);
    ScalarExpr zeta = X + imag_unit() * Y;
    chart.add_alias("zeta", zeta);
    ScalarExpr H = expr_param(spec, "H", chart.symbols());

    ScalarExpr habs2 = re(H * conj(H));
    ScalarExpr r2 = X * X + Y * Y;
    ScalarExpr s = sphere_factor(X, Y) / habs2;
    ScalarExpr P = kOne / ((1.0 + r2) * zeta * H);
    ScalarExpr b1 = -2.0 * im(P);
    ScalarExpr b2 = -2.0 * re(P);

    chart.set_metric(0, 0, s + b1 * b1);
    chart.set_metric(0, 1, b1 * b2);
    chart.set_metric(0, 2, b1);
    chart.set_metric(1, 1, s + b2 * b2);
    chart.set_metric(1, 2, b2);
    chart.set_metric(2, 2, kOne);
    chart.add_guard(habs2, GuardKind::kPositive);
    chart.add_guard(r2, GuardKind::kNonzeroAbs);

    FamilyInstance f;
    f.spec = spec;
    ScalarExpr mih = kZero - im(H);
    f.weyl = WeylStructure{chart, {mih * b1, mih * b2, mih}};
    f.congruence = {kZero, kZero, kOne};
    f.tau_expected = mih;
    f.kappa_expected = 0.5 * re(H);
    f.einstein_weyl = true;
    return f;
}

FamilyInstance make_ward_toda(const FamilySpec& spec) {
    OrientedChart chart({"rho", "eta", "psi"},
                        {{0.5, 1.5}, {0.5, 1.5}, {-0.5, 0.5}});
    ScalarExpr rho = chart.coord(0);
    ScalarExpr V = expr_param(spec, "V", chart.symbols());
    ScalarExpr Vr = V.derivative(0), Ve = V.derivative(1);
    ScalarExpr harmonic =
        Vr / rho + Vr.derivative(0) + Ve.derivative(1);
    require_vanishing(chart, harmonic, 1e-8,
                      spec.tag + ": V is not harmonic");

    ScalarExpr den = rho * rho * (Ve * Ve + Vr * Vr);
    chart.set_metric(0, 0, den);
    chart.set_metric(1, 1, den);
    chart.set_metric(2, 2, rho * rho);
    chart.add_guard(Ve, GuardKind::kNonzeroAbs);

    ScalarExpr a_rho = kZero - rho * Ve;
    ScalarExpr a_eta = rho * Vr;
    FamilyInstance f;
    f.spec = spec;
    f.weyl = WeylStructure{
        chart,
        {(2.0 * Ve / den) * a_rho, (2.0 * Ve / den) * a_eta, kZero}};
    f.congruence = {a_rho / den, a_eta / den, kZero};
    f.kappa_expected = kZero;
    f.zero_fields.emplace_back("harmonic", harmonic);
    f.einstein_weyl = true;
    return f;
}

FamilyInstance make_killing_toda(const FamilySpec& spec) {
    const double b = real_param(spec, "b");
    const double c = real_param(spec, "c");
    const double A = b * b + c * c;
    if (A <= 0.0) throw FamilyError(spec.tag + ": (b, c) must be nonzero");

    OrientedChart chart({"rho", "eta", "psi"},
                        {{0.5, 1.5}, {0.5, 1.5}, {-0.5, 0.5}});
    ScalarExpr rho = chart.coord(0);
    ScalarExpr V = expr_param(spec, "V", chart.symbols());
    ScalarExpr Vr = V.derivative(0), Vz = V.derivative(1);
    ScalarExpr rho2 = rho * rho;
    ScalarExpr Finv = (b * b * rho2 + c * c) / (A * rho2);
    ScalarExpr harmonic =
        Vr / rho + Vr.derivative(0) + Finv * Vz.derivative(1);
    require_vanishing(chart, harmonic, 1e-8,
                      spec.tag + ": V is not harmonic for the adapted "
                                 "operator");

    ScalarExpr C1 = (c * c * rho2 + b * b) / A;
    ScalarExpr C2 = (b * b * rho2 + c * c) / A;
    ScalarExpr C3 = (b * c / A) * (rho2 - 1.0);
    ScalarExpr a_rho = kZero - Finv * rho * Vz;
    ScalarExpr a_zeta = rho * Vr;

    chart.set_metric(0, 0, rho2 * Vr * Vr + C1 * a_rho * a_rho);
    chart.set_metric(0, 1, rho2 * Vr * Vz + C1 * a_rho * a_zeta);
    chart.set_metric(1, 1, rho2 * Vz * Vz + C1 * a_zeta * a_zeta);
    chart.set_metric(2, 2, C2);
    chart.set_metric(0, 2, C3 * a_rho);
    chart.set_metric(1, 2, C3 * a_zeta);

    ScalarExpr G = C2 * Vz * Vz + rho2 * Vr * Vr;
    chart.add_guard(G, GuardKind::kPositive);

    ScalarExpr scale = 2.0 * b * Vz / (A * G);
    FamilyInstance f;
    f.spec = spec;
    f.weyl = WeylStructure{chart,
                           {scale * (b * a_rho), scale * (b * a_zeta),
                            kZero - scale * c}};
    f.zero_fields.emplace_back("harmonic", harmonic);
    f.einstein_weyl = true;
    return f;
}

FamilyInstance make_toda_cc(const FamilySpec& spec, const std::string& pa =
                                                        "a",
                            const std::string& pb = "b",
                            const std::string& pc = "c") {
    const double a = real_param(spec, pa);
    const double b = real_param(spec, pb);
    const double c = real_param(spec, pc);

    OrientedChart chart({"x", "y", "z"},
                        {{-0.5, 0.5}, {-0.5, 0.5}, {0.5, 1.5}});
    ScalarExpr x = chart.coord(0), y = chart.coord(1), z = chart.coord(2);
    ScalarExpr Q = a * (z * z) + b * z + ScalarExpr::constant(c);
    ScalarExpr D = 1.0 + a * (x * x + y * y);
    ScalarExpr eu = 4.0 * Q / (D * D);
    ScalarExpr u = log(eu);
    ScalarExpr uz = (2.0 * a * z + b) / Q;

    chart.set_metric(0, 0, eu);
    chart.set_metric(1, 1, eu);
    chart.set_metric(2, 2, kOne);
    chart.add_guard(Q, GuardKind::kPositive);
    chart.add_guard(D, GuardKind::kPositive);

    FamilyInstance f;
    f.spec = spec;
    f.weyl = WeylStructure{chart, {kZero, kZero, kZero - uz}};
    f.congruence = {kZero, kZero, kOne};
    f.tau_expected = kZero - 0.5 * uz;
    f.kappa_expected = kZero;
    f.zero_fields.emplace_back(
        "toda_pde", u.derivative(0).derivative(0) +
                        u.derivative(1).derivative(1) +
                        eu.derivative(2).derivative(2));
    f.einstein_weyl = true;
    return f;
}

FamilyInstance make_einstein_tod(const FamilySpec& spec) {
    const double a = real_param(spec, "a");
    const double b = real_param(spec, "b");
    const double c = real_param(spec, "c");
    if (a * a + c * c <= 0.0)
        throw FamilyError(spec.tag + ": need a^2 + c^2 > 0");

    OrientedChart chart({"z", "theta", "phi", "t"},
                        {{0.5, 1.5}, {0.6, 2.5}, {-2.5, 2.5}, {-0.5, 0.5}});
    ScalarExpr z = chart.coord(0), th = chart.coord(1);
    ScalarExpr S = z * z + ScalarExpr::constant(c);
    ScalarExpr P = (a + b * z) / S;
    ScalarExpr denom = a * z - ScalarExpr::constant(b * c);
    ScalarExpr s1 = (a * a + c * c) / (denom * denom);
    ScalarExpr Aphi = (-b) * cos(th);
    ScalarExpr sth = sin(th);

    chart.set_metric(0, 0, s1 * P);
    chart.set_metric(1, 1, s1 * P * S);
    chart.set_metric(2, 2,
                     s1 * (P * S * sth * sth + (1.0 / P) * Aphi * Aphi));
    chart.set_metric(2, 3, s1 * (1.0 / P) * Aphi);
    chart.set_metric(3, 3, s1 / P);
    chart.add_guard(S, GuardKind::kPositive);
    chart.add_guard(a + b * z, GuardKind::kPositive);
    chart.add_guard(denom, GuardKind::kNonzeroAbs);
    chart.add_guard(sth, GuardKind::kPositive);

    FamilyInstance f;
    f.spec = spec;
    f.weyl = WeylStructure{chart, {}};
    f.killing = {kZero, kZero, kZero, kOne};
    f.expected_scal = -12.0 * a * c / (a * a + c * c);
    f.selfdual = true;
    f.ricci_flat = (a == 0.0 || c == 0.0);
    return f;
}

FamilyInstance make_gibbons_hawking(const FamilySpec& spec) {
    OrientedChart base({"r", "theta", "phi"},
                       {{1.0, 2.0}, {0.6, 2.5}, {-2.5, 2.5}});
    ScalarExpr r = base.coord(0), th = base.coord(1);
    base.set_metric(0, 0, kOne);
    base.set_metric(1, 1, r * r);
    base.set_metric(2, 2, r * r * sin(th) * sin(th));
    base.add_guard(sin(th), GuardKind::kPositive);

    MonopoleData mono;
    mono.w = expr_param(spec, "W", base.symbols());
    mono.a = {expr_param(spec, "A_r", base.symbols(), "0"),
              expr_param(spec, "A_theta", base.symbols(), "0"),
              expr_param(spec, "A_phi", base.symbols(), "0")};

    FamilyInstance f;
    f.spec = spec;
    f.base = WeylStructure{base, {}};
    f.monopole = mono;
    f.weyl = WeylStructure{lift_chart(base, mono, LiftGauge::kHarmonic), {}};
    f.killing = {kZero, kZero, kZero, kOne};
    f.selfdual = true;
    f.ricci_flat = true;
    return f;
}

FamilyInstance make_tod_monopole(const FamilySpec& spec) {
    const double a = real_param(spec, "a");
    const double b = real_param(spec, "b");
    FamilySpec base_spec = spec;
    FamilyInstance f = make_toda_cc(base_spec, "base_a", "base_b", "base_c");
    f.spec = spec;
    const double A = real_param(spec, "base_a");
    const double B = real_param(spec, "base_b");
    const double C = real_param(spec, "base_c");

    const OrientedChart& chart = f.weyl.chart;
    ScalarExpr x = chart.coord(0), y = chart.coord(1), z = chart.coord(2);
    ScalarExpr Q = A * (z * z) + B * z + ScalarExpr::constant(C);
    ScalarExpr W =
        (a * (0.5 * B * z + ScalarExpr::constant(C)) +
         b * (A * z + ScalarExpr::constant(0.5 * B))) /
        Q;
    const double k2 = 0.5 * a * B + b * A;
    ScalarExpr D = 1.0 + A * (x * x + y * y);

    MonopoleData mono;
    mono.w = W;
    mono.a = {(-2.0 * k2) * y / D, (2.0 * k2) * x / D, kZero};
    f.monopole = mono;
    f.weyl.chart.add_guard(W, GuardKind::kNonzeroAbs);
    return f;
}

FamilyInstance make_ct_toda(const FamilySpec& spec) {
    OrientedChart chart({"X", "Y", "z"},
                        {{-0.5, 0.5}, {-0.5, 0.5}, {0.5, 1.5}});
    ScalarExpr X = chart.coord(0), Y = chart.coord(1), z = chart.coord(2);
    ScalarExpr zeta = X + imag_unit() * Y;
    chart.add_alias("zeta", zeta);
    ScalarExpr h = expr_param(spec, "h", chart.symbols());

    ScalarExpr mfac = re((z + h) * (z + conj(h)));
    ScalarExpr s2 = sphere_factor(X, Y);
    chart.set_metric(0, 0, mfac * s2);
    chart.set_metric(1, 1, mfac * s2);
    chart.set_metric(2, 2, kOne);
    chart.add_guard(mfac, GuardKind::kPositive);
    chart.add_guard(re(h * conj(h)), GuardKind::kPositive);

    ScalarExpr uz = (2.0 * z + 2.0 * re(h)) / mfac;
    FamilyInstance f;
    f.spec = spec;
    f.weyl = WeylStructure{chart, {kZero, kZero, kZero - uz}};
    f.congruence = {kZero, kZero, kOne};
    f.tau_expected = kZero - 0.5 * uz;
    f.kappa_expected = kZero;
    f.einstein_weyl = true;
    return f;
}

FamilyInstance make_dilation_gh(const FamilySpec& spec) {
    OrientedChart chart({"X", "Y", "s", "t"},
                        {{0.15, 0.55}, {0.15, 0.55}, {-0.3, 0.3},
                         {-0.5, 0.5}});
    ScalarExpr X = chart.coord(0), Y = chart.coord(1);
    ScalarExpr sc = chart.coord(2);
    ScalarExpr zeta = X + imag_unit() * Y;
    chart.add_alias("zeta", zeta);
    ScalarExpr h = expr_param(spec, "h", chart.symbols());

    ScalarExpr W = re(h);
    ScalarExpr r2 = X * X + Y * Y;
    ScalarExpr s2 = sphere_factor(X, Y);
    // Horizontal primitive of the area form scaled by W.
    ScalarExpr P = h / ((1.0 + r2) * zeta);
    ScalarExpr b1 = -2.0 * im(P);
    ScalarExpr b2 = -2.0 * re(P);
    // Closed 1-form conjugate to dW.
    ScalarExpr alpha1 = W.derivative(1);
    ScalarExpr alpha2 = kZero - W.derivative(0);
    ScalarExpr A1 = sc * alpha1 - b1;
    ScalarExpr A2 = sc * alpha2 - b2;

    ScalarExpr es = exp(sc);
    ScalarExpr f1 = W * es;       // fibre-orthogonal factor
    ScalarExpr f2 = es / W;       // fibre factor
    chart.set_metric(0, 0, f1 * s2 + f2 * A1 * A1);
    chart.set_metric(0, 1, f2 * A1 * A2);
    chart.set_metric(1, 1, f1 * s2 + f2 * A2 * A2);
    chart.set_metric(2, 2, f1);
    chart.set_metric(0, 3, f2 * A1);
    chart.set_metric(1, 3, f2 * A2);
    chart.set_metric(3, 3, f2);
    chart.add_guard(W, GuardKind::kPositive);
    chart.add_guard(r2, GuardKind::kNonzeroAbs);

    FamilyInstance f;
    f.spec = spec;
    f.weyl = WeylStructure{chart, {}};
    f.killing = {kZero, kZero, kOne, im(h)};  // lifted dilation field
    f.selfdual = true;
    f.ricci_flat = true;
    FamilySpec quotient;
    quotient.tag = "geodesic_symmetry";
    quotient.params["H"] = "1/(" + require_param(spec, "h") + ")";
    f.expected_quotient = quotient;
    return f;
}

FamilyInstance make_flat_r4(const FamilySpec& spec) {
    const double a = real_param(spec, "a");
    const double b = real_param(spec, "b");
    const double c = real_param(spec, "c");
    if (a == 0.0 && b == 0.0 && c == 0.0)
        throw FamilyError(spec.tag + ": field parameters are all zero");

    OrientedChart chart({"x", "y", "z", "w"},
                        {{0.3, 0.9}, {0.3, 0.9}, {0.3, 0.9}, {0.3, 0.9}});
    for (int i = 0; i < 4; ++i) chart.set_metric(i, i, kOne);
    ScalarExpr x = chart.coord(0), y = chart.coord(1);
    ScalarExpr z = chart.coord(2), w = chart.coord(3);

    // Linear conformal field: dilation plus the two rotation parts.
    std::vector<ScalarExpr> K = {a * x - b * y, a * y + b * x,
                                 a * z - c * w, a * w + c * z};
    ScalarExpr k2 = K[0] * K[0] + K[1] * K[1] + K[2] * K[2] + K[3] * K[3];
    chart.add_guard(k2, GuardKind::kPositive);

    FamilyInstance f;
    f.spec = spec;
    f.weyl = WeylStructure{chart, {}};
    f.killing = K;
    ScalarExpr nk = sqrt(k2);
    f.tau_expected = ScalarExpr::constant(b + c) / nk;
    f.kappa_expected = ScalarExpr::constant(a) / nk;
    f.selfdual = true;
    f.ricci_flat = true;
    return f;
}

}  // namespace

std::string FamilySpec::str() const {
    std::ostringstream out;
    out << "family=" << tag << "\n";
    for (const auto& [k, v] : params) out << k << "=" << v << "\n";
    return out.str();
}

FamilySpec FamilySpec::parse(const std::string& text) {
    FamilySpec spec;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw FamilyError("bad spec line: " + line);
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "family")
            spec.tag = value;
        else
            spec.params[key] = value;
    }
    if (spec.tag.empty()) throw FamilyError("spec has no 'family=' line");
    return spec;
}

const std::vector<std::string>& family_tags() {
    static const std::vector<std::string> tags = {
        "geodesic_symmetry", "gibbons_hawking", "ward_toda", "killing_toda",
        "toda_cc",           "einstein_tod",    "tod_monopole", "ct_toda",
        "dilation_gh",       "flat_r4"};
    return tags;
}

FamilyInstance build_family(const FamilySpec& spec) {
    if (spec.tag == "geodesic_symmetry") return make_geodesic_symmetry(spec);
    if (spec.tag == "gibbons_hawking") return make_gibbons_hawking(spec);
    if (spec.tag == "ward_toda") return make_ward_toda(spec);
    if (spec.tag == "killing_toda") return make_killing_toda(spec);
    if (spec.tag == "toda_cc") return make_toda_cc(spec);
    if (spec.tag == "einstein_tod") return make_einstein_tod(spec);
    if (spec.tag == "tod_monopole") return make_tod_monopole(spec);
    if (spec.tag == "ct_toda") return make_ct_toda(spec);
    if (spec.tag == "dilation_gh") return make_dilation_gh(spec);
    if (spec.tag == "flat_r4") return make_flat_r4(spec);
    throw FamilyError("unknown family '" + spec.tag + "'");
}

OrientedChart conformally_rescaled(const OrientedChart& chart,
                                   const ScalarExpr& factor) {
    OrientedChart out(chart.coord_names(), chart.domain_box());
    for (int i = 0; i < chart.dim(); ++i)
        for (int j = i; j < chart.dim(); ++j)
            out.set_metric(i, j, factor * chart.metric(i, j));
    for (const Guard& g : chart.guards()) out.add_guard(g.expr, g.kind);
    out.set_orientation(chart.orientation());
    return out;
}

}  // namespace weylforge
