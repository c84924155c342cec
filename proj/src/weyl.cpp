#include "weylforge/weyl.hpp"

#include <cmath>
#include <stdexcept>

namespace weylforge {
namespace {

RJet zero_jet(int n, int order) { return RJet::constant(0.0, n, order); }

// Orthonormal-coframe basis of anti-selfdual 2-forms (dim 4), each of
// squared norm 2 in the (1/2) a_ij b^ij pairing.
std::vector<TensorValue> asd_basis(const MetricValue& m) {
    const int n = 4;
    Eigen::MatrixXd frame = orthonormal_frame(m);
    if (m.orientation * frame.determinant() < 0.0) frame.col(n - 1) *= -1.0;
    Eigen::MatrixXd coframe = frame.inverse();
    auto two_form = [&](int a, int b) {
        TensorValue f(n, {Slot::kDown, Slot::kDown});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                f.at({i, j}) = coframe(a, i) * coframe(b, j) -
                               coframe(a, j) * coframe(b, i);
        return f;
    };
    auto minus = [&](const TensorValue& x, const TensorValue& y) {
        TensorValue r = x;
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = x.c[i] - y.c[i];
        return r;
    };
    return {minus(two_form(0, 1), two_form(2, 3)),
            minus(two_form(0, 2), two_form(3, 1)),
            minus(two_form(0, 3), two_form(1, 2))};
}

bool jet_is_zero(const RJet& j) {
    if (j.value() != 0.0) return false;
    for (int a = 0; a < kMaxVars; ++a)
        if (j.d1(a) != 0.0) return false;
    for (int a = 0; a < kMaxVars; ++a)
        for (int b = 0; b < kMaxVars; ++b)
            if (j.d2(a, b) != 0.0) return false;
    return true;
}

}  // namespace

std::vector<RJet> jet_matrix_inverse(const std::vector<RJet>& m, int n) {
    const int order = m[0].order();
    std::vector<RJet> a = m;
    std::vector<RJet> inv(static_cast<size_t>(n) * n, zero_jet(n, order));
    for (int i = 0; i < n; ++i) inv[i * n + i] = RJet::constant(1.0, n, order);

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col].value()) >
                std::abs(a[pivot * n + col].value()))
                pivot = r;
        if (std::abs(a[pivot * n + col].value()) < 1e-14)
            throw EvalError("jet matrix inverse: singular matrix");
        if (pivot != col)
            for (int c = 0; c < n; ++c) {
                std::swap(a[pivot * n + c], a[col * n + c]);
                std::swap(inv[pivot * n + c], inv[col * n + c]);
            }
        const RJet piv_inv = reciprocal(a[col * n + col]);
        for (int c = 0; c < n; ++c) {
            a[col * n + c] = a[col * n + c] * piv_inv;
            inv[col * n + c] = inv[col * n + c] * piv_inv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const RJet f = a[r * n + col];
            if (jet_is_zero(f)) continue;
            for (int c = 0; c < n; ++c) {
                a[r * n + c] = a[r * n + c] - f * a[col * n + c];
                inv[r * n + c] = inv[r * n + c] - f * inv[col * n + c];
            }
        }
    }
    return inv;
}

RJet jet_matrix_determinant(const std::vector<RJet>& m, int n) {
    const int order = m[0].order();
    std::vector<RJet> a = m;
    RJet det = RJet::constant(1.0, n, order);
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col].value()) >
                std::abs(a[pivot * n + col].value()))
                pivot = r;
        if (std::abs(a[pivot * n + col].value()) < 1e-14)
            return zero_jet(n, order);
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
            det = -det;
        }
        det = det * a[col * n + col];
        const RJet piv_inv = reciprocal(a[col * n + col]);
        for (int r = col + 1; r < n; ++r) {
            const RJet f = a[r * n + col] * piv_inv;
            for (int c = col; c < n; ++c)
                a[r * n + c] = a[r * n + c] - f * a[col * n + c];
        }
    }
    return det;
}

JetConnection weyl_jets_from_omega_jets(const OrientedChart& chart,
                                        const std::vector<RJet>& omega,
                                        const Point& p) {
    const int n = chart.dim();
    JetConnection c;
    c.n = n;
    c.orientation = chart.orientation();
    c.g.resize(static_cast<size_t>(n) * n, zero_jet(n, kMaxOrder));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            c.g[i * n + j] = chart.metric(i, j).eval_real(p);
    c.ginv = jet_matrix_inverse(c.g, n);
    c.sqrt_det = sqrt(jet_matrix_determinant(c.g, n));
    c.omega = omega;

    // Levi-Civita part.
    c.gamma.resize(static_cast<size_t>(n) * n * n, zero_jet(n, kMaxOrder - 1));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                RJet s = zero_jet(n, kMaxOrder - 1);
                for (int l = 0; l < n; ++l) {
                    RJet dg = c.G(j, l).partial(i) + c.G(i, l).partial(j) -
                              c.G(i, j).partial(l);
                    s = s + c.Ginv(k, l) * dg;
                }
                c.Gamma(k, i, j) = 0.5 * s;
                c.Gamma(k, j, i) = c.Gamma(k, i, j);
            }

    // Gauge 1-form contribution:
    // Gamma^k_{ij} += omega_i d^k_j + omega_j d^k_i - g_ij omega^k.
    bool omega_nonzero = false;
    for (const RJet& w : omega)
        if (!jet_is_zero(w)) omega_nonzero = true;
    if (omega_nonzero) {
        std::vector<RJet> omega_up(n, zero_jet(n, kMaxOrder));
        for (int k = 0; k < n; ++k) {
            RJet s = zero_jet(n, kMaxOrder);
            for (int l = 0; l < n; ++l) s = s + c.Ginv(k, l) * omega[l];
            omega_up[k] = s;
        }
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    RJet t = c.Gamma(k, i, j);
                    if (k == j) t = t + omega[i];
                    if (k == i) t = t + omega[j];
                    t = t - c.G(i, j) * omega_up[k];
                    c.Gamma(k, i, j) = t;
                }
    }
    return c;
}

JetConnection weyl_jets(const OrientedChart& chart,
                        std::span<const ScalarExpr> omega, const Point& p) {
    const int n = chart.dim();
    std::vector<RJet> w(n, zero_jet(n, kMaxOrder));
    for (size_t i = 0; i < omega.size(); ++i) w[i] = omega[i].eval_real(p);
    return weyl_jets_from_omega_jets(chart, w, p);
}

JetConnection weyl_jets(const WeylStructure& w, const Point& p) {
    return weyl_jets(w.chart, w.omega, p);
}

MetricValue metric_of(const JetConnection& c) {
    MetricValue m;
    m.g = Eigen::MatrixXd(c.n, c.n);
    m.ginv = Eigen::MatrixXd(c.n, c.n);
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) {
            m.g(i, j) = c.G(i, j).value();
            m.ginv(i, j) = c.Ginv(i, j).value();
        }
    m.sqrt_det = c.sqrt_det.value();
    m.orientation = c.orientation;
    return m;
}

JetConnection with_gauge(const JetConnection& c,
                         const std::vector<RJet>& omega) {
    const int n = c.n;
    int ord = kMaxOrder - 1;
    for (const RJet& w : omega) ord = std::min(ord, w.order());
    JetConnection out = c;
    out.omega = omega;
    std::vector<RJet> omega_up(n, zero_jet(n, ord));
    for (int k = 0; k < n; ++k) {
        RJet s = zero_jet(n, ord);
        for (int l = 0; l < n; ++l)
            s = s + c.Ginv(k, l).truncated(ord) * omega[l].truncated(ord);
        omega_up[k] = s;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                RJet t = c.Gamma(k, i, j).truncated(ord);
                if (k == j) t = t + omega[i].truncated(ord);
                if (k == i) t = t + omega[j].truncated(ord);
                t = t - c.G(i, j).truncated(ord) * omega_up[k];
                out.Gamma(k, i, j) = t;
            }
    return out;
}

std::vector<double> connection_curvature(const JetConnection& c, int weight) {
    const int n = c.n;
    // Effective coefficients Gamma^k_{il} + weight * omega_i d^k_l.
    auto gam = [&](int k, int i, int l) {
        RJet t = c.Gamma(k, i, l);
        if (weight != 0 && k == l)
            t = t + static_cast<double>(weight) * c.omega[i].truncated(t.order());
        return t;
    };
    std::vector<double> out(static_cast<size_t>(n) * n * n * n, 0.0);
    auto& R = out;
    auto idx = [n](int k, int l, int i, int j) {
        return ((static_cast<size_t>(k) * n + l) * n + i) * n + j;
    };
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    double v = gam(k, j, l).partial(i).value() -
                               gam(k, i, l).partial(j).value();
                    for (int m = 0; m < n; ++m)
                        v += gam(k, i, m).value() * gam(m, j, l).value() -
                             gam(k, j, m).value() * gam(m, i, l).value();
                    R[idx(k, l, i, j)] = v;
                    R[idx(k, l, j, i)] = -v;
                }
    return out;
}

CurvatureDecomposition curvature_decomposition(const JetConnection& c) {
    const int n = c.n;
    CurvatureDecomposition d;
    d.n = n;
    d.riemann = connection_curvature(c, 0);
    auto idx = [n](int k, int l, int i, int j) {
        return ((static_cast<size_t>(k) * n + l) * n + i) * n + j;
    };

    // Ric(Z, Y) = trace of X -> R(X, Y) Z.
    Eigen::MatrixXd ric(n, n);
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += d.riemann[idx(i, l, i, j)];
            ric(l, j) = s;
        }
    MetricValue m = metric_of(c);
    d.ric_sym = 0.5 * (ric + ric.transpose());
    d.scal = (m.ginv.cwiseProduct(d.ric_sym)).sum();
    d.r0 = (d.ric_sym - (d.scal / n) * m.g) / (n - 2);

    // Gauge field strength F = d omega, computed from the omega jets.
    d.faraday = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            d.faraday(i, j) = c.omega[j].partial(i).value() -
                              c.omega[i].partial(j).value();
    Eigen::MatrixXd ric_skew = 0.5 * (ric - ric.transpose());
    d.faraday_consistency =
        (ric_skew - (n / 2.0) * d.faraday).cwiseAbs().maxCoeff();

    // Reassemble the Ricci-type parts and subtract:
    // R = W + F id - r(X) /\ Y + r(Y) /\ X with
    // r = r0 + scal/(2n(n-1)) g - F/2 and
    // [r(X_i) /\ X_j]^k_l = r_il d^k_j - g_jl r_i^k.
    Eigen::MatrixXd r =
        d.r0 + (d.scal / (2.0 * n * (n - 1))) * m.g - 0.5 * d.faraday;
    Eigen::MatrixXd r_up = r * m.ginv;  // r_i^k = g^{km} r_im  => (r ginv)_ik
    d.weyl = d.riemann;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double a = (k == l) ? d.faraday(i, j) : 0.0;
                    const double wedge_ij =
                        ((k == j) ? r(i, l) : 0.0) - m.g(j, l) * r_up(i, k);
                    const double wedge_ji =
                        ((k == i) ? r(j, l) : 0.0) - m.g(i, l) * r_up(j, k);
                    a += -wedge_ij + wedge_ji;
                    d.weyl[idx(k, l, i, j)] -= a;
                }

    double tr = 0.0;
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += d.weyl[idx(i, l, i, j)];
            tr = std::max(tr, std::abs(s));
        }
    d.weyl_ricci_trace = tr;
    return d;
}

double weyl_first_bianchi_max(const CurvatureDecomposition& d) {
    const int n = d.n;
    auto idx = [n](int k, int l, int i, int j) {
        return ((static_cast<size_t>(k) * n + l) * n + i) * n + j;
    };
    double m = 0.0;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double s = d.weyl[idx(k, l, i, j)] +
                                     d.weyl[idx(k, i, j, l)] +
                                     d.weyl[idx(k, j, l, i)];
                    m = std::max(m, std::abs(s));
                }
    return m;
}

double weyl_pair_symmetry_max(const CurvatureDecomposition& d,
                              const JetConnection& c) {
    const int n = d.n;
    auto idx = [n](int k, int l, int i, int j) {
        return ((static_cast<size_t>(k) * n + l) * n + i) * n + j;
    };
    MetricValue m = metric_of(c);
    std::vector<double> low(d.weyl.size(), 0.0);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (int q = 0; q < n; ++q)
                        s += m.g(k, q) * d.weyl[idx(q, l, i, j)];
                    low[idx(k, l, i, j)] = s;
                }
    double mx = 0.0;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    mx = std::max(mx, std::abs(low[idx(k, l, i, j)] -
                                               low[idx(i, j, k, l)]));
    return mx;
}

TensorValue sd_part(const TensorValue& f2, const MetricValue& g) {
    TensorValue s = hodge_star(f2, g, StarConvention::kTilde);
    TensorValue out = f2;
    for (size_t i = 0; i < out.c.size(); ++i)
        out.c[i] = 0.5 * (f2.c[i] + s.c[i]);
    return out;
}

TensorValue asd_part(const TensorValue& f2, const MetricValue& g) {
    TensorValue s = hodge_star(f2, g, StarConvention::kTilde);
    TensorValue out = f2;
    for (size_t i = 0; i < out.c.size(); ++i)
        out.c[i] = 0.5 * (f2.c[i] - s.c[i]);
    return out;
}

std::vector<RJet> hermitian_gauge_one_form(const JetConnection& c,
                                           const EndoJets& J) {
    const int n = c.n;
    const int jo = J.c[0].order();
    // Omega_ij = g_ik J^k_j.
    std::vector<RJet> omega_form(static_cast<size_t>(n) * n,
                                 zero_jet(n, jo));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RJet s = zero_jet(n, jo);
            for (int k = 0; k < n; ++k) s = s + c.G(i, k) * J.J(k, j);
            omega_form[i * n + j] = s;
        }
    auto Om = [&](int i, int j) -> const RJet& { return omega_form[i * n + j]; };
    // (dOmega)_{abm} = d_a O_bm - d_b O_am + d_m O_ab.
    auto dOm = [&](int a, int b, int m) {
        return Om(b, m).partial(a) - Om(a, m).partial(b) + Om(a, b).partial(m);
    };
    std::vector<RJet> gamma(n, zero_jet(n, jo - 1));
    // Sign fixed by the requirement D J = 0 for the resulting connection
    // on the canonical integrable examples.
    const double scale = 1.0 / (2.0 * (n - 2));
    for (int m = 0; m < n; ++m) {
        RJet s = zero_jet(n, jo - 1);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int cc = 0; cc < n; ++cc)
                    s = s + dOm(a, b, m) * c.Ginv(a, cc) * J.J(b, cc);
        gamma[m] = scale * s;
    }
    return gamma;
}

double endo_derivative_max(const JetConnection& c, const EndoJets& J) {
    const int n = c.n;
    double mx = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int m = 0; m < n; ++m) {
                double v = J.J(k, m).partial(i).value();
                for (int l = 0; l < n; ++l)
                    v += c.Gamma(k, i, l).value() * J.J(l, m).value() -
                         c.Gamma(l, i, m).value() * J.J(k, l).value();
                mx = std::max(mx, std::abs(v));
            }
    return mx;
}

double ricci_form_two_route_residual(const JetConnection& c,
                                     const EndoJets& J) {
    const int n = c.n;
    CurvatureDecomposition d = curvature_decomposition(c);
    MetricValue m = metric_of(c);
    auto idx = [n](int k, int l, int i, int j) {
        return ((static_cast<size_t>(k) * n + l) * n + i) * n + j;
    };
    // rho_ij = -(1/2) R^p_{m,ij} g^{mc} J^q_c g_pq.
    Eigen::MatrixXd Jv(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) Jv(k, l) = J.J(k, l).value();
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q)
                    for (int mm = 0; mm < n; ++mm)
                        for (int cc = 0; cc < n; ++cc)
                            s += d.riemann[idx(p, mm, i, j)] * m.ginv(mm, cc) *
                                 Jv(q, cc) * m.g(p, q);
            rho(i, j) = -0.5 * s;
        }
    // Assembled route: 2 r0(J., .) + (scal/4) g(J., .) + 2 F^-(J., .).
    TensorValue F(n, {Slot::kDown, Slot::kDown});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) F.at({i, j}) = d.faraday(i, j);
    TensorValue Fm = asd_part(F, m);
    Eigen::MatrixXd rho2 = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int p = 0; p < n; ++p)
                s += Jv(p, i) * (2.0 * d.r0(p, j) +
                                 0.25 * d.scal * m.g(p, j) +
                                 2.0 * Fm.at({p, j}));
            rho2(i, j) = s;
        }
    return (rho - rho2).cwiseAbs().maxCoeff();
}

double weyl_quadratic_form(const CurvatureDecomposition& d,
                           const JetConnection& c, const TensorValue& phi,
                           const TensorValue& psi) {
    const int n = d.n;
    MetricValue m = metric_of(c);
    TensorValue phi_up = musical(m, musical(m, phi, 0, Slot::kUp), 1, Slot::kUp);
    TensorValue psi_up = musical(m, musical(m, psi, 0, Slot::kUp), 1, Slot::kUp);
    auto idx = [n](int k, int l, int i, int j) {
        return ((static_cast<size_t>(k) * n + l) * n + i) * n + j;
    };
    double s = 0.0;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    // lowered W_{klij} = g_kq W^q_{l,ij}
                    double w = 0.0;
                    for (int q = 0; q < n; ++q)
                        w += m.g(k, q) * d.weyl[idx(q, l, i, j)];
                    s += phi_up.at({k, l}) * psi_up.at({i, j}) * w;
                }
    return 0.25 * s;
}

double asd_weyl_max(const JetConnection& c) {
    if (c.n != 4)
        throw std::invalid_argument("asd_weyl_max needs dim 4");
    CurvatureDecomposition d = curvature_decomposition(c);
    MetricValue m = metric_of(c);
    std::vector<TensorValue> basis = asd_basis(m);
    double mx = 0.0;
    for (const TensorValue& phi : basis)
        for (const TensorValue& psi : basis)
            mx = std::max(mx,
                          std::abs(weyl_quadratic_form(d, c, phi, psi)));
    return mx;
}

double asd_weyl_formula_residual(const JetConnection& c, const EndoJets& J) {
    const int n = c.n;
    if (n != 4)
        throw std::invalid_argument("asd_weyl_formula_residual needs dim 4");
    CurvatureDecomposition d = curvature_decomposition(c);
    MetricValue m = metric_of(c);

    // Fundamental 2-form Omega_ij = g_ik J^k_j.
    TensorValue Om(n, {Slot::kDown, Slot::kDown});
    Eigen::MatrixXd Jv(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) Jv(k, l) = J.J(k, l).value();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += m.g(i, k) * Jv(k, j);
            Om.at({i, j}) = s;
        }

    TensorValue F(n, {Slot::kDown, Slot::kDown});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) F.at({i, j}) = d.faraday(i, j);
    TensorValue Fm = asd_part(F, m);
    // (J Fm)_ij = (1/2)(J^p_i Fm_pj - J^p_j Fm_pi).
    TensorValue JFm(n, {Slot::kDown, Slot::kDown});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int p = 0; p < n; ++p)
                s += Jv(p, i) * Fm.at({p, j}) - Jv(p, j) * Fm.at({p, i});
            JFm.at({i, j}) = 0.5 * s;
        }

    std::vector<TensorValue> basis = asd_basis(m);

    double mx = 0.0;
    for (const TensorValue& phi : basis)
        for (const TensorValue& psi : basis) {
            const double wq = weyl_quadratic_form(d, c, phi, psi);
            const double ip = form_inner(phi, psi, m);
            const double om_phi = form_inner(Om, phi, m);
            const double om_psi = form_inner(Om, psi, m);
            const double jf_phi = form_inner(JFm, phi, m);
            const double jf_psi = form_inner(JFm, psi, m);
            const double formula =
                0.25 * d.scal * (ip / 3.0 - 0.5 * om_phi * om_psi) -
                0.5 * (jf_phi * om_psi + om_phi * jf_psi);
            mx = std::max(mx, std::abs(wq - formula));
        }
    return mx;
}

}  // namespace weylforge
