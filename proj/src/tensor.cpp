#include "weylforge/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace weylforge {
namespace {

// Permutation sign of idx (0 if any repeat).
int perm_sign(const std::vector<int>& idx) {
    int sign = 1;
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = i + 1; j < idx.size(); ++j) {
            if (idx[i] == idx[j]) return 0;
            if (idx[i] > idx[j]) sign = -sign;
        }
    return sign;
}

// Iterate over all rank-tuples of indices in [0, n).
bool next_index(std::vector<int>& idx, int n) {
    for (int k = static_cast<int>(idx.size()) - 1; k >= 0; --k) {
        if (++idx[k] < n) return true;
        idx[k] = 0;
    }
    return false;
}

size_t flat_of(const std::vector<int>& idx, int n) {
    size_t f = 0;
    for (int i : idx) f = f * static_cast<size_t>(n) + i;
    return f;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

MetricValue metric_value(const OrientedChart& chart, const Point& p) {
    const int n = chart.dim();
    MetricValue m;
    m.g = Eigen::MatrixXd(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m.g(i, j) = chart.metric(i, j).eval_real(p, 0).value();
    const double det = m.g.determinant();
    if (!(det > 0.0))
        throw EvalError("metric is not positive definite at sample point");
    m.ginv = m.g.inverse();
    m.sqrt_det = std::sqrt(det);
    m.orientation = chart.orientation();
    return m;
}

TensorValue musical(const MetricValue& g, const TensorValue& t, int slot,
                    Slot target) {
    if (t.variance[slot] == target) return t;
    const Eigen::MatrixXd& mat =
        (target == Slot::kDown) ? g.g : g.ginv;
    TensorValue out(t.dim, t.variance,
                    t.weight + (target == Slot::kDown ? 2 : -2));
    out.variance[slot] = target;
    std::vector<int> idx(t.rank(), 0);
    do {
        double s = 0.0;
        std::vector<int> src = idx;
        for (int m = 0; m < t.dim; ++m) {
            src[slot] = m;
            s += mat(idx[slot], m) * t.c[flat_of(src, t.dim)];
        }
        out.c[flat_of(idx, t.dim)] = s;
    } while (next_index(idx, t.dim));
    return out;
}

TensorValue hodge_star(const TensorValue& form, const MetricValue& g,
                       StarConvention convention) {
    const int n = form.dim;
    const int k = form.rank();
    for (Slot s : form.variance)
        if (s != Slot::kDown)
            throw std::invalid_argument("hodge_star expects an all-down form");
    // Raise all indices.
    TensorValue up = form;
    for (int s = 0; s < k; ++s) up = musical(g, up, s, Slot::kUp);

    TensorValue out(n, std::vector<Slot>(n - k, Slot::kDown),
                    form.weight + (n - 2 * k));
    const double eps_scale = g.orientation * g.sqrt_det;
    const double inv_kfact = 1.0 / factorial(k);

    std::vector<int> j(n - k, 0);
    if (n - k == 0) {
        double s = 0.0;
        std::vector<int> i(k, 0);
        do {
            const int sg = perm_sign(i);
            if (sg != 0) s += sg * up.c[flat_of(i, n)];
        } while (next_index(i, n));
        out.c[0] = inv_kfact * eps_scale * s;
    } else {
        do {
            double s = 0.0;
            std::vector<int> full(n, 0);
            std::copy(j.begin(), j.end(), full.begin() + k);
            std::vector<int> i(k, 0);
            if (k == 0) {
                const int sg = perm_sign(full);
                s = sg;
            } else {
                do {
                    std::copy(i.begin(), i.end(), full.begin());
                    const int sg = perm_sign(full);
                    if (sg != 0) s += sg * up.c[flat_of(i, n)];
                } while (next_index(i, n));
            }
            out.c[flat_of(j, n)] = inv_kfact * eps_scale * s;
        } while (next_index(j, n));
    }
    if (convention == StarConvention::kGraded) {
        const int sign = ((k * (k - 1) / 2) % 2 == 0) ? 1 : -1;
        if (sign < 0)
            for (double& v : out.c) v = -v;
    }
    return out;
}

double form_inner(const TensorValue& a, const TensorValue& b,
                  const MetricValue& g) {
    const int k = a.rank();
    TensorValue bup = b;
    for (int s = 0; s < k; ++s) bup = musical(g, bup, s, Slot::kUp);
    double s = 0.0;
    for (size_t f = 0; f < a.c.size(); ++f) s += a.c[f] * bup.c[f];
    return s / factorial(k);
}

FormField FormField::zero(int n, int k) {
    FormField f;
    f.dim = n;
    f.degree = k;
    f.c.assign(TensorValue::size_for(n, k), ScalarExpr::constant(0.0));
    return f;
}

FormField FormField::function(int n, const ScalarExpr& e) {
    FormField f = zero(n, 0);
    f.c[0] = e;
    return f;
}

FormField FormField::one_form(std::vector<ScalarExpr> comps) {
    FormField f;
    f.dim = static_cast<int>(comps.size());
    f.degree = 1;
    f.c = std::move(comps);
    return f;
}

ScalarExpr& FormField::at(std::initializer_list<int> idx) {
    size_t f = 0;
    for (int i : idx) f = f * static_cast<size_t>(dim) + i;
    return c[f];
}

const ScalarExpr& FormField::at(std::initializer_list<int> idx) const {
    size_t f = 0;
    for (int i : idx) f = f * static_cast<size_t>(dim) + i;
    return c[f];
}

void FormField::set_antisym(std::initializer_list<int> idx,
                            const ScalarExpr& e) {
    std::vector<int> base(idx);
    std::vector<int> perm = base;
    std::sort(perm.begin(), perm.end());
    const int base_sign = perm_sign(base);
    if (base_sign == 0)
        throw std::invalid_argument("set_antisym: repeated index");
    do {
        const int sg = base_sign * perm_sign(perm);
        c[flat_of(perm, dim)] = (sg > 0) ? e : (ScalarExpr::constant(0.0) - e);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TensorValue FormField::eval(const Point& p) const {
    TensorValue out(dim, std::vector<Slot>(degree, Slot::kDown));
    for (size_t f = 0; f < c.size(); ++f)
        out.c[f] = c[f].eval_real(p, 0).value();
    return out;
}

FormField wedge(const FormField& a, const FormField& b) {
    const int n = a.dim;
    const int k = a.degree;
    const int l = b.degree;
    FormField out = FormField::zero(n, k + l);
    const double norm = 1.0 / (factorial(k) * factorial(l));
    std::vector<int> idx(k + l, 0);
    if (k + l == 0) {
        out.c[0] = a.c[0] * b.c[0];
        return out;
    }
    do {
        // Sum over all splittings via permutations of the full index tuple.
        ScalarExpr s = ScalarExpr::constant(0.0);
        std::vector<int> perm(k + l);
        std::iota(perm.begin(), perm.end(), 0);
        bool any = false;
        // Direct antisymmetrized product: sum over permutations sigma of the
        // slots, sign(sigma) * a(first k) * b(last l) / (k! l!).
        std::sort(perm.begin(), perm.end());
        do {
            std::vector<int> ai(k), bi(l);
            for (int m = 0; m < k; ++m) ai[m] = idx[perm[m]];
            for (int m = 0; m < l; ++m) bi[m] = idx[perm[k + m]];
            int sg = perm_sign(perm);
            const ScalarExpr term =
                a.c[flat_of(ai, n)] * b.c[flat_of(bi, n)];
            s = (sg > 0) ? s + term : s - term;
            any = true;
        } while (std::next_permutation(perm.begin(), perm.end()));
        (void)any;
        out.c[flat_of(idx, n)] = norm * s;
    } while (next_index(idx, n));
    return out;
}

FormField operator+(const FormField& a, const FormField& b) {
    FormField out = a;
    for (size_t f = 0; f < out.c.size(); ++f) out.c[f] = a.c[f] + b.c[f];
    return out;
}

FormField operator-(const FormField& a, const FormField& b) {
    FormField out = a;
    for (size_t f = 0; f < out.c.size(); ++f) out.c[f] = a.c[f] - b.c[f];
    return out;
}

FormField operator*(const ScalarExpr& s, const FormField& a) {
    FormField out = a;
    for (auto& e : out.c) e = s * e;
    return out;
}

FormField exterior_d(const FormField& form) {
    const int n = form.dim;
    const int k = form.degree;
    FormField out = FormField::zero(n, k + 1);
    std::vector<int> idx(k + 1, 0);
    do {
        ScalarExpr s = ScalarExpr::constant(0.0);
        for (int m = 0; m <= k; ++m) {
            std::vector<int> rest;
            rest.reserve(k);
            for (int q = 0; q <= k; ++q)
                if (q != m) rest.push_back(idx[q]);
            const ScalarExpr d =
                form.c[flat_of(rest, n)].derivative(idx[m]);
            s = (m % 2 == 0) ? s + d : s - d;
        }
        out.c[flat_of(idx, n)] = s;
    } while (next_index(idx, n));
    return out;
}

TensorValue exterior_d(const FormField& form, const Point& p) {
    return exterior_d(form).eval(p);
}

Eigen::MatrixXd orthonormal_frame(const MetricValue& g) {
    // g = L L^T  =>  columns of (L^T)^{-1} are orthonormal.
    Eigen::LLT<Eigen::MatrixXd> llt(g.g);
    if (llt.info() != Eigen::Success)
        throw EvalError("metric Cholesky factorization failed");
    Eigen::MatrixXd lt = llt.matrixL().transpose();
    return lt.inverse();
}

}  // namespace weylforge
