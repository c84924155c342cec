#include "weylforge/congruence.hpp"

#include <cmath>
#include <stdexcept>

namespace weylforge {
namespace {

int eps3(int i, int j, int k) {
    return (i - j) * (j - k) * (k - i) / 2;
}

// Sign convention of the twist term in the flat modified connection,
// fixed once by requiring flatness on the canonical twisting examples.
constexpr double kHyperCrTwistSign = -1.0;

TensorValue two_form_value(const Eigen::MatrixXd& f) {
    const int n = static_cast<int>(f.rows());
    TensorValue t(n, {Slot::kDown, Slot::kDown});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.at({i, j}) = f(i, j);
    return t;
}

}  // namespace

CongruenceData congruence_decompose(const JetConnection& c,
                                    const std::vector<RJet>& chi) {
    const int n = c.n;
    if (n != 3) throw std::invalid_argument("congruence_decompose needs dim 3");
    const int ord = chi[0].order() - 1;
    auto zero = [&](int o) { return RJet::constant(0.0, n, o); };

    CongruenceData k;
    k.chi = chi;
    k.chi_dn.assign(n, zero(kMaxOrder));
    for (int j = 0; j < n; ++j) {
        RJet s = zero(kMaxOrder);
        for (int m = 0; m < n; ++m) s = s + c.G(j, m) * chi[m];
        k.chi_dn[j] = s;
    }

    // B_ij = g_jk (d_i chi^k + (Gamma^k_{im} - omega_i d^k_m) chi^m),
    // the weight -1 covariant derivative with i the direction slot.
    std::vector<RJet> B(static_cast<size_t>(n) * n, zero(ord));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RJet s = zero(ord);
            for (int kk = 0; kk < n; ++kk) {
                RJet m = chi[kk].partial(i);
                for (int mm = 0; mm < n; ++mm)
                    m = m + c.Gamma(kk, i, mm) * chi[mm];
                m = m - c.omega[i] * chi[kk];
                s = s + c.G(j, kk) * m;
            }
            B[i * n + j] = s;
        }

    // Acceleration a_j = chi^i B_ij and the transverse part.
    std::vector<RJet> a(n, zero(ord));
    for (int j = 0; j < n; ++j) {
        RJet s = zero(ord);
        for (int i = 0; i < n; ++i) s = s + chi[i] * B[i * n + j];
        a[j] = s;
    }
    std::vector<RJet> Bh(static_cast<size_t>(n) * n, zero(ord));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            Bh[i * n + j] = B[i * n + j] - k.chi_dn[i] * a[j];

    // Expansion tau = g^{ij} Bh_ij / (n - 1).
    RJet tau = zero(ord);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tau = tau + c.Ginv(i, j) * Bh[i * n + j];
    k.tau = (1.0 / (n - 1)) * tau;

    // Twist 2-form T = star of the lowered chi; kappa is half the pairing
    // of the skew transverse part with T.
    RJet inv_sqrtg = reciprocal(c.sqrt_det);
    RJet kappa = zero(ord);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // T^{ij} = orientation eps^{kij} chi_k / sqrt(g).
            RJet tup = zero(ord);
            for (int kk = 0; kk < n; ++kk) {
                const int e = eps3(kk, i, j);
                if (e != 0)
                    tup = tup + static_cast<double>(e) * k.chi_dn[kk];
            }
            tup = c.orientation * (tup * inv_sqrtg);
            const RJet skew = 0.5 * (Bh[i * n + j] - Bh[j * n + i]);
            kappa = kappa + skew * tup;
        }
    // The twist form satisfies T_ij T^{ij} = 2 for a unit congruence, so
    // the coefficient of T in the skew part is half the raw pairing.
    k.kappa = 0.5 * kappa;

    MetricValue m = metric_of(c);
    Eigen::MatrixXd T(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int kk = 0; kk < n; ++kk)
                s += eps3(kk, i, j) * k.chi[kk].value();
            T(i, j) = c.orientation * m.sqrt_det * s;
        }
    k.twist_form = two_form_value(T);

    k.accel = Eigen::VectorXd(n);
    for (int j = 0; j < n; ++j) k.accel(j) = a[j].value();
    k.accel_max = k.accel.cwiseAbs().maxCoeff();

    k.shear = Eigen::MatrixXd(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double sym =
                0.5 * (Bh[i * n + j].value() + Bh[j * n + i].value());
            k.shear(i, j) =
                sym - k.tau.value() * (m.g(i, j) - k.chi_dn[i].value() *
                                                      k.chi_dn[j].value());
        }
    k.shear_max = k.shear.cwiseAbs().maxCoeff();

    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += k.chi_dn[i].value() * chi[i].value();
    k.unit_residual = std::abs(norm - 1.0);
    return k;
}

CongruenceData congruence_decompose(const JetConnection& c,
                                    std::span<const ScalarExpr> chi,
                                    const Point& p) {
    std::vector<RJet> jets(chi.size(), RJet::constant(0.0, c.n, kMaxOrder));
    for (size_t i = 0; i < chi.size(); ++i) jets[i] = chi[i].eval_real(p);
    return congruence_decompose(c, jets);
}

double einstein_weyl_residual(const JetConnection& c) {
    return curvature_decomposition(c).r0.cwiseAbs().maxCoeff();
}

CongruenceIdentityResiduals congruence_identity_residuals(
    const JetConnection& c, const CongruenceData& k, double eligibility_tol) {
    const int n = c.n;
    CongruenceIdentityResiduals r{};
    r.eligibility = std::max(k.shear_max, k.accel_max);
    if (r.eligibility > eligibility_tol)
        throw std::domain_error(
            "congruence has shear or acceleration; the scalar identities "
            "do not apply");

    CurvatureDecomposition d = curvature_decomposition(c);
    MetricValue m = metric_of(c);
    const double tau = k.tau.value();
    const double kap = k.kappa.value();

    // Weight -1 covariant gradients of tau and kappa.
    Eigen::VectorXd dtau(n), dkap(n), xi_dn(n), xi(n);
    for (int i = 0; i < n; ++i) {
        const double w = c.omega[i].value();
        dtau(i) = k.tau.partial(i).value() - w * tau;
        dkap(i) = k.kappa.partial(i).value() - w * kap;
        xi(i) = k.chi[i].value();
        xi_dn(i) = k.chi_dn[i].value();
    }

    auto one_form = [&](const Eigen::VectorXd& v) {
        TensorValue t(n, {Slot::kDown});
        for (int i = 0; i < n; ++i) t.c[i] = v(i);
        return t;
    };
    auto star = [&](const TensorValue& t) {
        return hodge_star(t, m, StarConvention::kGraded);
    };

    TensorValue F = two_form_value(d.faraday);
    TensorValue starF = star(F);

    // chi derivative of tau: D_chi tau + tau^2 - kappa^2 + scal/6 = 0.
    r.expansion_rate =
        std::abs(xi.dot(dtau) + tau * tau - kap * kap + d.scal / 6.0);

    // chi derivative of kappa: D_chi kappa + 2 tau kappa + <chi, *F>/2 = 0.
    double chi_starF = 0.0;
    for (int i = 0; i < n; ++i) chi_starF += xi(i) * starF.c[i];
    r.twist_rate = std::abs(xi.dot(dkap) + 2.0 * tau * kap + 0.5 * chi_starF);

    // Transverse gradient identity:
    // (D tau - D kappa o J) restricted to chi-perp + (iota_chi F)/2 = 0,
    // where J X = iota_X (star chi).
    TensorValue S = star(one_form(xi_dn));
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        double jterm = 0.0;
        for (int mm = 0; mm < n; ++mm)
            for (int jj = 0; jj < n; ++jj)
                jterm += S.at({i, jj}) * m.ginv(jj, mm) * dkap(mm);
        double fterm = 0.0;
        for (int jj = 0; jj < n; ++jj) fterm += xi(jj) * F.at({jj, i});
        v(i) = dtau(i) - jterm + 0.5 * fterm;
    }
    const double along = v.dot(xi);
    r.transverse = 0.0;
    for (int i = 0; i < n; ++i)
        r.transverse = std::max(r.transverse, std::abs(v(i) - along * xi_dn(i)));

    // Exact 2-form identities.  d(kappa chi) and d(tau chi) come from the
    // jets, so no finite differencing enters.
    auto d_scaled_chi = [&](const RJet& f) {
        Eigen::MatrixXd out(n, n);
        std::vector<RJet> fc(n, RJet::constant(0.0, n, 0));
        for (int j = 0; j < n; ++j) fc[j] = f * k.chi_dn[j];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out(i, j) = fc[j].partial(i).value() - fc[i].partial(j).value();
        return two_form_value(out);
    };
    TensorValue d_kappa_chi = d_scaled_chi(k.kappa);
    TensorValue d_tau_chi = d_scaled_chi(k.tau);

    TensorValue star_dtau = star(one_form(dtau));
    TensorValue star_dkap = star(one_form(dkap));
    Eigen::VectorXd iota_chi_F(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int jj = 0; jj < n; ++jj) s += xi(jj) * F.at({jj, i});
        iota_chi_F(i) = s;
    }
    TensorValue star_icF = star(one_form(iota_chi_F));
    TensorValue star_chi = star(one_form(xi_dn));

    double m1 = 0.0, m2 = 0.0;
    for (size_t f = 0; f < star_dtau.c.size(); ++f) {
        const double res1 = star_dtau.c[f] + 0.5 * star_icF.c[f] +
                            (d.scal / 6.0) * star_chi.c[f] +
                            (tau * tau + kap * kap) * star_chi.c[f] -
                            d_kappa_chi.c[f];
        const double res2 = star_dkap.c[f] - 0.5 * F.c[f] + d_tau_chi.c[f];
        m1 = std::max(m1, std::abs(res1));
        m2 = std::max(m2, std::abs(res2));
    }
    r.expansion_form = m1;
    r.twist_form = m2;
    return r;
}

double hypercr_residual(const JetConnection& c, const CongruenceData& k) {
    const int n = c.n;
    const int ord = std::min(k.kappa.order(), kMaxOrder - 1);
    JetConnection c2 = c;
    for (int kk = 0; kk < n; ++kk)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                RJet extra = RJet::constant(0.0, n, ord);
                for (int l = 0; l < n; ++l) {
                    const int e = eps3(i, j, l);
                    if (e != 0)
                        extra = extra +
                                static_cast<double>(e) *
                                    (c.sqrt_det * c.Ginv(l, kk)).truncated(ord);
                }
                c2.Gamma(kk, i, j) =
                    c.Gamma(kk, i, j) +
                    kHyperCrTwistSign * c.orientation * (k.kappa * extra);
            }
    std::vector<double> R = connection_curvature(c2, -1);
    double mx = 0.0;
    for (double v : R) mx = std::max(mx, std::abs(v));
    return mx;
}

double monopole_residual(const JetConnection& c, const ScalarExpr& w,
                         std::span<const ScalarExpr> a_pot, const Point& p) {
    const int n = c.n;
    MetricValue m = metric_of(c);
    RJet wj = w.eval_real(p);
    TensorValue dw(n, {Slot::kDown});
    for (int i = 0; i < n; ++i)
        dw.c[i] = wj.partial(i).value() - c.omega[i].value() * wj.value();
    TensorValue lhs = hodge_star(dw, m, StarConvention::kGraded);
    std::vector<ScalarExpr> comps(a_pot.begin(), a_pot.end());
    TensorValue da = exterior_d(FormField::one_form(comps), p);
    double mx = 0.0;
    for (size_t f = 0; f < lhs.c.size(); ++f)
        mx = std::max(mx, std::abs(lhs.c[f] - da.c[f]));
    return mx;
}

TransportCheck jacobi_transport_check(const WeylStructure& w,
                                      std::span<const ScalarExpr> chi,
                                      const Point& start, double length,
                                      int steps) {
    const int n = w.chart.dim();
    struct State {
        Point x;
        double tau, kappa;
    };
    auto decompose_at = [&](const Point& p) {
        JetConnection c = weyl_jets(w, p);
        return std::pair<JetConnection, CongruenceData>(
            c, congruence_decompose(c, chi, p));
    };
    auto deriv = [&](const State& s) {
        auto [c, k] = decompose_at(s.x);
        CurvatureDecomposition d = curvature_decomposition(c);
        MetricValue m = metric_of(c);
        Eigen::VectorXd xi(n);
        for (int i = 0; i < n; ++i) xi(i) = k.chi[i].value();
        double omega_chi = 0.0;
        for (int i = 0; i < n; ++i) omega_chi += c.omega[i].value() * xi(i);
        double shear2 = 0.0, r0cc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                r0cc += d.r0(i, j) * xi(i) * xi(j);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        shear2 += m.ginv(i, a) * m.ginv(j, b) * k.shear(i, j) *
                                  k.shear(a, b);
            }
        TensorValue F(n, {Slot::kDown, Slot::kDown});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) F.at({i, j}) = d.faraday(i, j);
        TensorValue starF = hodge_star(F, m, StarConvention::kGraded);
        double chi_starF = 0.0;
        for (int i = 0; i < n; ++i) chi_starF += xi(i) * starF.c[i];

        State ds;
        ds.x.resize(n);
        for (int i = 0; i < n; ++i) ds.x[i] = xi(i);
        ds.tau = -(s.tau * s.tau) + s.kappa * s.kappa - 0.5 * shear2 -
                 0.5 * r0cc - d.scal / 6.0 + omega_chi * s.tau;
        ds.kappa = -2.0 * s.tau * s.kappa - 0.5 * chi_starF +
                   omega_chi * s.kappa;
        return ds;
    };

    State s;
    s.x = start;
    {
        auto [c, k] = decompose_at(start);
        s.tau = k.tau.value();
        s.kappa = k.kappa.value();
    }
    const double h = length / steps;
    auto advance = [&](const State& a, const State& d, double f) {
        State r = a;
        for (int i = 0; i < n; ++i) r.x[i] += f * d.x[i];
        r.tau += f * d.tau;
        r.kappa += f * d.kappa;
        return r;
    };
    for (int step = 0; step < steps; ++step) {
        const State k1 = deriv(s);
        const State k2 = deriv(advance(s, k1, h / 2));
        const State k3 = deriv(advance(s, k2, h / 2));
        const State k4 = deriv(advance(s, k3, h));
        for (int i = 0; i < n; ++i)
            s.x[i] += h / 6.0 * (k1.x[i] + 2 * k2.x[i] + 2 * k3.x[i] + k4.x[i]);
        s.tau += h / 6.0 * (k1.tau + 2 * k2.tau + 2 * k3.tau + k4.tau);
        s.kappa +=
            h / 6.0 * (k1.kappa + 2 * k2.kappa + 2 * k3.kappa + k4.kappa);
    }

    auto [c, k] = decompose_at(s.x);
    TransportCheck out;
    out.tau_err = std::abs(s.tau - k.tau.value());
    out.kappa_err = std::abs(s.kappa - k.kappa.value());
    return out;
}

}  // namespace weylforge
