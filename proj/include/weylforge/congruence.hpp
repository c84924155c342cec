// Shear-free geodesic unit congruences on 3-dimensional Weyl structures:
// expansion/twist decomposition, the scalar equations they satisfy on
// Einstein-Weyl backgrounds, and transport consistency checks.
#pragma once

#include "weylforge/weyl.hpp"

namespace weylforge {

// Pointwise decomposition of the covariant derivative of a unit vector
// field chi (conformal weight -1): acceleration, expansion tau, twist
// kappa, and shear.  tau and kappa are jets so their derivatives are exact.
struct CongruenceData {
    int n = 3;
    std::vector<RJet> chi;    // components chi^k, order >= 2
    std::vector<RJet> chi_dn;  // chi_k = g_kj chi^j
    RJet tau, kappa;            // order >= 1
    Eigen::VectorXd accel;      // a_j, the chi-component of D chi
    Eigen::MatrixXd shear;      // trace-free symmetric transverse part
    TensorValue twist_form;     // T_ij = sqrt(g) eps_kij chi^k
    double unit_residual = 0.0;  // |g(chi, chi) - 1|
    double shear_max = 0.0;
    double accel_max = 0.0;
};

CongruenceData congruence_decompose(const JetConnection& c,
                                    const std::vector<RJet>& chi);
// Convenience: evaluate symbolic components first.
CongruenceData congruence_decompose(const JetConnection& c,
                                    std::span<const ScalarExpr> chi,
                                    const Point& p);

// Max-abs of the trace-free symmetrized Ricci tensor: zero exactly on
// Einstein-Weyl backgrounds.
double einstein_weyl_residual(const JetConnection& c);

// Residuals of the five scalar/form identities a shear-free geodesic
// congruence satisfies on an Einstein-Weyl background.  Throws
// std::domain_error when the congruence has shear or acceleration above
// `eligibility_tol`, since the identities only apply without them.
struct CongruenceIdentityResiduals {
    double expansion_rate;   // chi derivative of tau
    double twist_rate;       // chi derivative of kappa
    double transverse;       // transverse gradient identity
    double expansion_form;   // 2-form identity for the tau gradient
    double twist_form;       // 2-form identity for the kappa gradient
    double eligibility;      // max(shear, accel) actually found
    double max() const {
        return std::max({expansion_rate, twist_rate, transverse,
                         expansion_form, twist_form});
    }
};

CongruenceIdentityResiduals congruence_identity_residuals(
    const JetConnection& c, const CongruenceData& k,
    double eligibility_tol = 1e-7);

// Flatness of the modified connection D - kappa * (cross product) on
// weight -1 tangent vectors; zero characterizes hyperCR structures.
// Returns the max-abs curvature component.
double hypercr_residual(const JetConnection& c, const CongruenceData& k);

// Divergence-pair residual for a general abelian monopole (w, A) on the
// Weyl space: max-abs of *(dw + w omega contribution) - dA ... evaluated
// as d(A) - star of the weight -1 covariant derivative of w.
double monopole_residual(const JetConnection& c, const ScalarExpr& w,
                         std::span<const ScalarExpr> a_pot, const Point& p);

// Integrates the expansion/twist transport equations along the flow of chi
// with classical fourth-order Runge-Kutta and compares the result with the
// pointwise decomposition at the endpoint.
struct TransportCheck {
    double tau_err = 0.0;
    double kappa_err = 0.0;
};

TransportCheck jacobi_transport_check(const WeylStructure& w,
                                      std::span<const ScalarExpr> chi,
                                      const Point& start, double length,
                                      int steps);

}  // namespace weylforge
