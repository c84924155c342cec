#include "weylforge/jones_tod.hpp"

#include <cmath>
#include <stdexcept>

namespace weylforge {
namespace {

// Frozen orientation conventions for the circle lift, fixed once by the
// requirement that the canonical monopole lifts come out selfdual (rather
// than anti-selfdual) and that lift followed by quotient is the identity.
constexpr double kLiftOrientation = -1.0;
constexpr double kQuotientStarSign = 1.0;

int eps4(int a, int b, int c, int d) {
    const int idx[4] = {a, b, c, d};
    int sign = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            if (idx[i] == idx[j]) return 0;
            if (idx[i] > idx[j]) sign = -sign;
        }
    return sign;
}

// Jet-level Hodge star of an antisymmetric all-down 2-form in dim 4:
// (*phi)_ij = (1/2) orientation sqrt(g) eps_{klij} phi^{kl}.
std::vector<RJet> jet_star2(const JetConnection& c,
                            const std::vector<RJet>& phi) {
    const int n = 4;
    const int ord = phi[0].order();
    auto zero = [&] { return RJet::constant(0.0, n, ord); };
    std::vector<RJet> up(static_cast<size_t>(n) * n, zero());
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            RJet s = zero();
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    s = s + c.Ginv(k, a) * c.Ginv(l, b) * phi[a * n + b];
            up[k * n + l] = s;
        }
    std::vector<RJet> out(static_cast<size_t>(n) * n, zero());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RJet s = zero();
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const int e = eps4(k, l, i, j);
                    if (e != 0) s = s + static_cast<double>(e) * up[k * n + l];
                }
            out[i * n + j] = 0.5 * c.orientation * (c.sqrt_det * s);
        }
    return out;
}

ScalarExpr mono_pot(const MonopoleData& mono, size_t i) {
    return i < mono.a.size() ? mono.a[i] : ScalarExpr::constant(0.0);
}

// Everything quotient_at and selfdual_gauge_residual share: the conformal
// connection in the |K| gauge and the lowered derivative of K.
struct KillingReduction {
    JetConnection c;
    MetricValue m;
    Eigen::MatrixXd dk;  // L_ij = g_jk (D_i K)^k in the |K| gauge
    Eigen::VectorXd k_up, k_dn, omega4, dlogk;
    double norm_k = 0.0;
    double killing_residual = 0.0;
};

std::vector<ScalarExpr> coordinate_field(int which) {
    std::vector<ScalarExpr> k(4, ScalarExpr::constant(0.0));
    k[which] = ScalarExpr::constant(1.0);
    return k;
}

KillingReduction reduce(const OrientedChart& m4,
                        std::span<const ScalarExpr> k_field, const Point& p4) {
    const int n = 4;
    if (m4.dim() != n)
        throw std::invalid_argument("symmetry reduction needs dim 4");
    // Squared length of K and the gauge 1-form -d log |K|, symbolically.
    ScalarExpr k2e = ScalarExpr::constant(0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            k2e = k2e + m4.metric(i, j) * (k_field[i] * k_field[j]);
    std::vector<ScalarExpr> theta;
    for (int i = 0; i < n; ++i)
        theta.push_back(-0.5 * (k2e.derivative(i) / k2e));

    KillingReduction r;
    r.c = weyl_jets(m4, theta, p4);
    r.m = metric_of(r.c);

    std::vector<RJet> kj(n, RJet::constant(0.0, n, kMaxOrder));
    for (int i = 0; i < n; ++i) kj[i] = k_field[i].eval_real(p4);
    r.k_up = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) r.k_up(i) = kj[i].value();
    r.k_dn = r.m.g * r.k_up;
    const double k2 = r.k_up.dot(r.k_dn);
    r.norm_k = std::sqrt(k2);
    r.dlogk = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) r.dlogk(i) = -theta[i].eval_real(p4, 0).value();

    r.dk = Eigen::MatrixXd(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                double d = kj[k].partial(i).value();
                for (int l = 0; l < n; ++l)
                    d += r.c.Gamma(k, i, l).value() * kj[l].value();
                s += r.m.g(j, k) * d;
            }
            r.dk(i, j) = s;
        }
    r.killing_residual =
        (0.5 * (r.dk + r.dk.transpose())).cwiseAbs().maxCoeff();

    TensorValue psi(n, {Slot::kDown, Slot::kDown});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            psi.at({i, j}) = 0.5 * (r.dk(i, j) - r.dk(j, i));
    TensorValue spsi = hodge_star(psi, r.m, StarConvention::kTilde);
    r.omega4 = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += r.k_up(j) * spsi.at({j, i});
        r.omega4(i) = kQuotientStarSign * (-2.0) * s / k2;
    }
    return r;
}

}  // namespace

OrientedChart lift_chart(const OrientedChart& base, const MonopoleData& mono,
                         LiftGauge gauge, double t_min, double t_max) {
    if (base.dim() != 3)
        throw std::invalid_argument("lift_chart needs a 3-dimensional base");
    std::vector<std::string> names = base.coord_names();
    names.push_back("t");
    std::vector<std::pair<double, double>> box = base.domain_box();
    box.emplace_back(t_min, t_max);
    OrientedChart m4(names, box);

    const ScalarExpr& w = mono.w;
    ScalarExpr f1 = (gauge == LiftGauge::kUnitKilling) ? w * w : w;
    ScalarExpr f2 = (gauge == LiftGauge::kUnitKilling)
                        ? ScalarExpr::constant(1.0)
                        : ScalarExpr::constant(1.0) / w;
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j)
            m4.set_metric(i, j,
                          f1 * base.metric(i, j) +
                              f2 * (mono_pot(mono, i) * mono_pot(mono, j)));
        m4.set_metric(i, 3, f2 * mono_pot(mono, i));
    }
    m4.set_metric(3, 3, f2);

    for (const Guard& g : base.guards()) m4.add_guard(g.expr, g.kind);
    m4.add_guard(w, GuardKind::kPositive);
    m4.set_orientation(kLiftOrientation * base.orientation());
    return m4;
}

std::vector<ScalarExpr> lifted_congruence(const OrientedChart& base,
                                          const MonopoleData& mono,
                                          std::span<const ScalarExpr> chi) {
    (void)base;
    ScalarExpr a_chi = ScalarExpr::constant(0.0);
    for (size_t i = 0; i < chi.size(); ++i)
        a_chi = a_chi + mono_pot(mono, i) * chi[i];
    std::vector<ScalarExpr> out;
    for (size_t i = 0; i < chi.size(); ++i) out.push_back(chi[i] / mono.w);
    out.push_back(ScalarExpr::constant(0.0) - a_chi / mono.w);
    return out;
}

SymmetryReduction symmetry_reduce(const OrientedChart& m4,
                                  std::span<const ScalarExpr> k_field,
                                  const Point& p4) {
    KillingReduction r = reduce(m4, k_field, p4);
    SymmetryReduction out;
    out.m = r.m;
    out.k_up = r.k_up;
    out.k_dn = r.k_dn;
    out.omega4 = r.omega4;
    out.dlogk = r.dlogk;
    out.norm_k = r.norm_k;
    out.killing_residual = r.killing_residual;
    return out;
}

QuotientData quotient_at(const OrientedChart& m4, const Point& p4) {
    const std::vector<ScalarExpr> kf = coordinate_field(3);
    KillingReduction r = reduce(m4, kf, p4);
    const double k2 = r.m.g(3, 3);
    QuotientData q;
    q.norm_k = std::sqrt(k2);
    q.killing_residual = r.killing_residual;
    q.g = Eigen::MatrixXd(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            q.g(i, j) = (r.m.g(i, j) - r.m.g(i, 3) * r.m.g(j, 3) / k2) / k2;
    q.omega = Eigen::VectorXd(3);
    for (int i = 0; i < 3; ++i)
        q.omega(i) = r.omega4(i) - (r.omega4(3) / k2) * r.m.g(i, 3);
    return q;
}

double selfdual_gauge_residual(const OrientedChart& m4, const Point& p4) {
    const int n = 4;
    const std::vector<ScalarExpr> kf = coordinate_field(3);
    KillingReduction r = reduce(m4, kf, p4);
    // Add half the quotient gauge 1-form to the connection and measure the
    // anti-selfdual part of the resulting derivative of K.
    Eigen::VectorXd omega_up = r.m.ginv * r.omega4;
    Eigen::MatrixXd L(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                double gam = r.c.Gamma(k, i, 3).value();
                if (k == 3) gam += 0.5 * r.omega4(i);
                if (k == i) gam += 0.5 * r.omega4(3);
                gam -= 0.5 * r.m.g(i, 3) * omega_up(k);
                s += r.m.g(j, k) * gam;
            }
            L(i, j) = s;
        }
    TensorValue psi(n, {Slot::kDown, Slot::kDown});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            psi.at({i, j}) = 0.5 * (L(i, j) - L(j, i));
    return asd_part(psi, r.m).max_abs();
}

EndoJets lifted_complex_structure(const OrientedChart& m4,
                                  std::span<const ScalarExpr> chi_m,
                                  const Point& p4) {
    const int n = 4;
    JetConnection c = weyl_jets(m4, {}, p4);
    auto zero = [&] { return RJet::constant(0.0, n, kMaxOrder); };
    std::vector<RJet> chi(n, zero());
    for (int i = 0; i < n; ++i) chi[i] = chi_m[i].eval_real(p4);
    std::vector<RJet> chi_dn(n, zero()), xi_dn(n, zero());
    for (int j = 0; j < n; ++j) {
        RJet s = zero();
        for (int k = 0; k < n; ++k) s = s + c.G(j, k) * chi[k];
        chi_dn[j] = s;
        xi_dn[j] = c.G(j, 3);
    }
    std::vector<RJet> phi(static_cast<size_t>(n) * n, zero());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            phi[i * n + j] = xi_dn[i] * chi_dn[j] - xi_dn[j] * chi_dn[i];
    std::vector<RJet> sphi = jet_star2(c, phi);

    EndoJets out;
    out.n = n;
    out.c.assign(static_cast<size_t>(n) * n, zero());
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
            RJet s = zero();
            for (int q = 0; q < n; ++q)
                s = s + c.Ginv(k, q) * (phi[q * n + m] - sphi[q * n + m]);
            out.J(k, m) = s;
        }
    return out;
}

double endo_square_residual(const EndoJets& j) {
    const int n = j.n;
    double mx = 0.0;
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
            double s = (k == m) ? 1.0 : 0.0;
            for (int q = 0; q < n; ++q)
                s += j.J(k, q).value() * j.J(q, m).value();
            mx = std::max(mx, std::abs(s));
        }
    return mx;
}

double hermitian_derivative_residual(const OrientedChart& m4,
                                     const EndoJets& j, const Point& p4) {
    JetConnection c = weyl_jets(m4, {}, p4);
    std::vector<RJet> gamma = hermitian_gauge_one_form(c, j);
    JetConnection ckw = with_gauge(c, gamma);
    return endo_derivative_max(ckw, j);
}

double maxwell_asd_residual(const OrientedChart& m4, const MonopoleData& mono,
                            const MonopoleData& second, const Point& p4) {
    const ScalarExpr ratio = second.w / mono.w;
    std::vector<ScalarExpr> comps;
    for (int i = 0; i < 3; ++i)
        comps.push_back(mono_pot(second, i) - ratio * mono_pot(mono, i));
    comps.push_back(ScalarExpr::constant(0.0) - ratio);
    TensorValue da = exterior_d(FormField::one_form(comps), p4);
    MetricValue m = metric_value(m4, p4);
    return asd_part(da, m).max_abs();
}

}  // namespace weylforge
