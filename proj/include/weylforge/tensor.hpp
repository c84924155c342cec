// Pointwise dense tensors in a chart: index raising/lowering, Hodge star in
// both sign conventions, exterior derivatives of symbolic form fields, and
// orthonormal frames.  Dimensions are 3 or 4 throughout.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "weylforge/chart.hpp"

namespace weylforge {

// Up/down variance flag per slot.
enum class Slot : uint8_t { kUp, kDown };

// Two Hodge star conventions on k-forms, differing by (-1)^{k(k-1)/2}:
// kTilde is fixed by alpha ^ *beta = <alpha,beta> vol; kGraded satisfies
// *1 = vol and iota_X(*alpha) = *(X^ ^ alpha).
enum class StarConvention { kTilde, kGraded };

// Dense tensor value at a point.  Components are stored row-major over all
// slots; `weight` tracks the conformal-scaling exponent of the components
// (under g -> e^{2f} g the stored numbers scale by e^{weight f}).
struct TensorValue {
    int dim = 0;
    std::vector<Slot> variance;
    int weight = 0;
    std::vector<double> c;

    TensorValue() = default;
    TensorValue(int n, std::vector<Slot> var, int w = 0)
        : dim(n),
          variance(std::move(var)),
          weight(w),
          c(size_for(n, variance.size()), 0.0) {}

    int rank() const { return static_cast<int>(variance.size()); }
    static size_t size_for(int n, size_t rank) {
        size_t s = 1;
        for (size_t i = 0; i < rank; ++i) s *= static_cast<size_t>(n);
        return s;
    }

    double& at(std::initializer_list<int> idx) { return c[flat(idx)]; }
    double at(std::initializer_list<int> idx) const { return c[flat(idx)]; }
    size_t flat(std::initializer_list<int> idx) const {
        size_t f = 0;
        for (int i : idx) f = f * static_cast<size_t>(dim) + i;
        return f;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : c) m = std::max(m, std::abs(v));
        return m;
    }
};

// Metric (and inverse, volume density) evaluated at a point.
struct MetricValue {
    Eigen::MatrixXd g;
    Eigen::MatrixXd ginv;
    double sqrt_det = 0.0;
    double orientation = 1.0;
    int dim() const { return static_cast<int>(g.rows()); }
};

MetricValue metric_value(const OrientedChart& chart, const Point& p);

// Flip one index of t between up and down with the metric.  Raising adds -2
// to the conformal weight of the components, lowering adds +2.
TensorValue musical(const MetricValue& g, const TensorValue& t, int slot,
                    Slot target);

// Hodge star of an antisymmetric all-down k-form value.  The result is an
// (n-k)-form; its conformal weight shifts by n-2k.
TensorValue hodge_star(const TensorValue& form, const MetricValue& g,
                       StarConvention convention);

// Pointwise inner product of two all-down k-forms: (1/k!) a_{I} b^{I}.
double form_inner(const TensorValue& a, const TensorValue& b,
                  const MetricValue& g);

// A k-form field with symbolic components (full component array,
// antisymmetry maintained by the constructors).
struct FormField {
    int dim = 0;
    int degree = 0;
    std::vector<ScalarExpr> c;  // dim^degree entries, row-major

    static FormField zero(int n, int k);
    static FormField function(int n, const ScalarExpr& f);  // 0-form
    static FormField one_form(std::vector<ScalarExpr> comps);

    ScalarExpr& at(std::initializer_list<int> idx);
    const ScalarExpr& at(std::initializer_list<int> idx) const;

    // Sets component (i...) and its permutations with alternating signs.
    void set_antisym(std::initializer_list<int> idx, const ScalarExpr& e);

    TensorValue eval(const Point& p) const;
};

// Wedge product of symbolic form fields.
FormField wedge(const FormField& a, const FormField& b);
FormField operator+(const FormField& a, const FormField& b);
FormField operator-(const FormField& a, const FormField& b);
FormField operator*(const ScalarExpr& s, const FormField& a);

// Exterior derivative evaluated at a point (a (k+1)-form value).
TensorValue exterior_d(const FormField& form, const Point& p);
// Symbolic exterior derivative (components differentiated as expressions).
FormField exterior_d(const FormField& form);

// Columns are a g-orthonormal frame (vectors, index up); built by Cholesky
// so the frame depends continuously on the metric.
Eigen::MatrixXd orthonormal_frame(const MetricValue& g);

}  // namespace weylforge
