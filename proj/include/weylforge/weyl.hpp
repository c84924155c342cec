// Conformal metrics with a compatible torsion-free connection: jet-level
// connection coefficients, curvature, and its decomposition into scalar,
// trace-free symmetric, skew (gauge-field) and conformally invariant parts.
#pragma once

#include <span>

#include "weylforge/jet.hpp"
#include "weylforge/tensor.hpp"

namespace weylforge {

// A conformal structure together with the 1-form of its compatible
// torsion-free connection, in a fixed representative gauge.
struct WeylStructure {
    OrientedChart chart;
    std::vector<ScalarExpr> omega;  // 1-form components; empty means zero
};

// Jets at a point of everything the connection needs: metric (order 3),
// inverse metric, connection coefficients (order 2), gauge 1-form.
struct JetConnection {
    int n = 0;
    double orientation = 1.0;
    std::vector<RJet> g, ginv;  // n*n entries
    RJet sqrt_det;
    std::vector<RJet> gamma;  // n^3, [k][i][j]; symmetric in (i, j)
    std::vector<RJet> omega;  // n entries, zero jets for a Riemannian gauge

    const RJet& G(int i, int j) const { return g[i * n + j]; }
    const RJet& Ginv(int i, int j) const { return ginv[i * n + j]; }
    const RJet& Gamma(int k, int i, int j) const {
        return gamma[(k * n + i) * n + j];
    }
    RJet& Gamma(int k, int i, int j) { return gamma[(k * n + i) * n + j]; }
};

// Gaussian elimination with partial pivoting in jet arithmetic.
std::vector<RJet> jet_matrix_inverse(const std::vector<RJet>& m, int n);
RJet jet_matrix_determinant(const std::vector<RJet>& m, int n);

JetConnection weyl_jets(const OrientedChart& chart,
                        std::span<const ScalarExpr> omega, const Point& p);
JetConnection weyl_jets(const WeylStructure& w, const Point& p);
// Same, but with the gauge 1-form given directly as jets (order >= 2).
JetConnection weyl_jets_from_omega_jets(const OrientedChart& chart,
                                        const std::vector<RJet>& omega,
                                        const Point& p);

MetricValue metric_of(const JetConnection& c);

// Replaces the gauge 1-form of a Riemannian-gauge connection (omega = 0)
// with the given jets, rebuilding the connection coefficients.
JetConnection with_gauge(const JetConnection& c,
                         const std::vector<RJet>& omega);

// Max-abs matrix entry of the conformally invariant curvature restricted
// to anti-selfdual 2-forms (dim 4); zero exactly on selfdual spaces.
double asd_weyl_max(const JetConnection& c);

// Curvature values R^k_{l,ij} (flattened [k][l][i][j]) of the connection
// acting on tangent vectors of conformal weight `weight`; weight 0 is the
// plain tangent bundle, weight w adds w * omega to the gauge term.
std::vector<double> connection_curvature(const JetConnection& c, int weight);

struct CurvatureDecomposition {
    int n = 0;
    double scal = 0.0;          // scalar curvature (trace of symmetrized Ricci)
    Eigen::MatrixXd ric_sym;    // symmetrized Ricci
    Eigen::MatrixXd r0;         // its trace-free part / (n - 2)
    Eigen::MatrixXd faraday;    // F = d omega
    std::vector<double> riemann;  // raw R^k_{l,ij}
    std::vector<double> weyl;     // conformally invariant remainder W^k_{l,ij}
    // Diagnostics: these vanish identically when the conventions are
    // consistent, so they double as internal checks.
    double faraday_consistency = 0.0;  // skew Ricci vs (n/2) F
    double weyl_ricci_trace = 0.0;     // W^i_{k,ij} contraction
};

CurvatureDecomposition curvature_decomposition(const JetConnection& c);

// Max-abs of the cyclic sum W^k_{l,ij} + W^k_{i,jl} + W^k_{j,li}.
double weyl_first_bianchi_max(const CurvatureDecomposition& d);
// Max-abs of W_{klij} - W_{ijkl} for the fully lowered tensor (identically
// zero only when F = 0; reported for Riemannian sanity checks).
double weyl_pair_symmetry_max(const CurvatureDecomposition& d,
                              const JetConnection& c);

// (Anti)selfdual projections of an all-down 2-form value (dim 4).
TensorValue sd_part(const TensorValue& f2, const MetricValue& g);
TensorValue asd_part(const TensorValue& f2, const MetricValue& g);

// Almost-complex structure values as jets: components J^k_m, order >= 1.
struct EndoJets {
    int n = 0;
    std::vector<RJet> c;  // n*n, [k][m]
    const RJet& J(int k, int m) const { return c[k * n + m]; }
    RJet& J(int k, int m) { return c[k * n + m]; }
};

// The distinguished gauge 1-form of a conformal Hermitian structure:
// gamma_m = -(1/(2(n-2))) (dOmega)_{abm} g^{ac} J^b_c with Omega = g(J., .),
// returned as jets of order 2 (c must be a Riemannian gauge, omega = 0).
std::vector<RJet> hermitian_gauge_one_form(const JetConnection& c,
                                           const EndoJets& J);

// Max-abs of D_i J^k_m for the connection of c (gauge term cancels on
// endomorphisms, so c's gamma is used as-is).
double endo_derivative_max(const JetConnection& c, const EndoJets& J);

// Ricci form of a compatible almost-complex structure computed two ways:
// from the curvature operator directly and from the decomposition
// 2 r0(J., .) + (scal/4) g(J., .) + 2 F^-(J., .); returns the max-abs gap.
double ricci_form_two_route_residual(const JetConnection& c,
                                     const EndoJets& J);

// Anti-selfdual conformal curvature versus its closed form for a compatible
// complex structure: W^- = (scal/4)(id/3 - Omega x Omega / 2)
//                          - (J F^- x Omega + Omega x J F^-)/2,
// compared as quadratic forms on a basis of anti-selfdual 2-forms.
double asd_weyl_formula_residual(const JetConnection& c, const EndoJets& J);

// Quadratic form of the conformally invariant curvature on a pair of
// all-down 2-form values: (1/4) phi^{kl} psi^{ij} W_{klij}.
double weyl_quadratic_form(const CurvatureDecomposition& d,
                           const JetConnection& c, const TensorValue& phi,
                           const TensorValue& psi);

}  // namespace weylforge
