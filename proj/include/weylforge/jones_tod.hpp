// Correspondence between selfdual conformal 4-manifolds with a Killing
// symmetry and 3-dimensional Einstein-Weyl spaces carrying an abelian
// monopole: circle lifts, symmetry quotients, and the induced complex
// structures on the total space.
#pragma once

#include "weylforge/congruence.hpp"
#include "weylforge/weyl.hpp"

namespace weylforge {

// An abelian monopole on a 3-dimensional Weyl space, written in the gauge
// of the base metric: a positive function w (the gauge function of a
// weight -1 density) and a local potential 1-form a with da = *(dw - w omega).
struct MonopoleData {
    ScalarExpr w;
    std::vector<ScalarExpr> a;  // components in the base coordinates
};

// Representative metric used for the circle lift over a base metric g:
//   kUnitKilling: w^2 g + (dt + a)^2   (the symmetry field has unit length)
//   kHarmonic:    w g + w^-1 (dt + a)^2
enum class LiftGauge { kUnitKilling, kHarmonic };

// 4-dimensional chart with coordinates (base..., t) and the lifted metric;
// the base guards are kept and w > 0 is added.
OrientedChart lift_chart(const OrientedChart& base, const MonopoleData& mono,
                         LiftGauge gauge, double t_min = -0.5,
                         double t_max = 0.5);

// Unit-length symmetry-orthogonal lift of a base congruence to the
// kUnitKilling representative.
std::vector<ScalarExpr> lifted_congruence(const OrientedChart& base,
                                          const MonopoleData& mono,
                                          std::span<const ScalarExpr> chi);

// Pointwise symmetry reduction of a 4-manifold whose last coordinate field
// K is Killing: quotient conformal metric (scaled by |K|^-2), the induced
// gauge 1-form, and diagnostics.
struct QuotientData {
    Eigen::MatrixXd g;       // 3x3 quotient metric values
    Eigen::VectorXd omega;   // quotient gauge 1-form, base components
    double norm_k = 0.0;     // |K|
    double killing_residual = 0.0;  // symmetric part that should vanish
};

QuotientData quotient_at(const OrientedChart& m4, const Point& p4);

// General reduction data for an arbitrary (conformal) symmetry field K,
// computed in the |K| gauge at one point.
struct SymmetryReduction {
    MetricValue m;
    Eigen::VectorXd k_up, k_dn;  // K and its lowered form
    Eigen::VectorXd omega4;      // quotient gauge 1-form, ambient components
    Eigen::VectorXd dlogk;       // d log |K|
    double norm_k = 0.0;
    double killing_residual = 0.0;
};

SymmetryReduction symmetry_reduce(const OrientedChart& m4,
                                  std::span<const ScalarExpr> k_field,
                                  const Point& p4);

// Anti-selfdual part of the conformally weighted derivative of the
// symmetry field; zero exactly when the quotient gauge 1-form closes the
// selfduality condition.
double selfdual_gauge_residual(const OrientedChart& m4, const Point& p4);

// Almost-complex structure spanned by the symmetry field and a lifted
// congruence: the anti-selfdual part of the wedge of their duals,
// converted to an endomorphism.  Components carry full jets.
EndoJets lifted_complex_structure(const OrientedChart& m4,
                                  std::span<const ScalarExpr> chi_m,
                                  const Point& p4);

// Max-abs entry of J^2 + id.
double endo_square_residual(const EndoJets& j);

// Integrability of J: builds the distinguished gauge 1-form of (g, J) and
// returns the max-abs covariant derivative of J for that connection.
double hermitian_derivative_residual(const OrientedChart& m4,
                                     const EndoJets& j, const Point& p4);

// A second monopole (w1, a1) on the same base induces a gauge field on the
// lift of (w, a); returns the max-abs anti-selfdual component of its field
// strength.
double maxwell_asd_residual(const OrientedChart& m4, const MonopoleData& mono,
                            const MonopoleData& second, const Point& p4);

}  // namespace weylforge
