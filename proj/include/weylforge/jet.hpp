// Truncated Taylor arithmetic to third order in up to four variables.
// A Jet<T> holds the value of a scalar together with its partial
// derivatives up to order 3 at a point; arithmetic on jets propagates
// derivatives exactly (no finite differencing).  T is double for real
// quantities and std::complex<double> when evaluating expressions with
// complex constants.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace weylforge {

inline constexpr int kMaxVars = 4;
inline constexpr int kMaxOrder = 3;

template <typename T>
class Jet {
public:
    Jet() : n_(0), order_(0) { clear(); }
    Jet(int n, int order) : n_(n), order_(order) {
        if (n < 0 || n > kMaxVars || order < 0 || order > kMaxOrder)
            throw std::invalid_argument("Jet: bad dimension or order");
        clear();
    }

    // Constant jet (all derivatives zero).
    static Jet constant(T value, int n, int order = kMaxOrder) {
        Jet j(n, order);
        j.v = value;
        return j;
    }

    // Seed jet for coordinate i: value x, first derivative e_i.
    static Jet variable(T value, int i, int n, int order = kMaxOrder) {
        Jet j(n, order);
        j.v = value;
        if (order >= 1) j.g[i] = T(1);
        return j;
    }

    int vars() const { return n_; }
    int order() const { return order_; }

    T value() const { return v; }
    T d1(int i) const { return g[i]; }
    T d2(int i, int j) const { return h[i * n_ + j]; }
    T d3(int i, int j, int k) const { return t[(i * n_ + j) * n_ + k]; }

    T& d1(int i) { return g[i]; }
    T& d2(int i, int j) { return h[i * n_ + j]; }
    T& d3(int i, int j, int k) { return t[(i * n_ + j) * n_ + k]; }
    T& val() { return v; }

    // Jet of the i-th partial derivative; one order lower.
    Jet partial(int i) const {
        if (order_ < 1) throw std::logic_error("Jet::partial: order 0 jet");
        Jet r(n_, order_ - 1);
        r.v = g[i];
        if (r.order_ >= 1)
            for (int a = 0; a < n_; ++a) r.g[a] = d2(i, a);
        if (r.order_ >= 2)
            for (int a = 0; a < n_; ++a)
                for (int b = 0; b < n_; ++b) r.h[a * n_ + b] = d3(i, a, b);
        return r;
    }

    Jet truncated(int order) const {
        Jet r = *this;
        if (order < r.order_) {
            r.order_ = order;
            if (order < 3) r.t.fill(T(0));
            if (order < 2) r.h.fill(T(0));
            if (order < 1) r.g.fill(T(0));
        }
        return r;
    }

    Jet operator-() const {
        Jet r = *this;
        r.v = -r.v;
        for (auto& x : r.g) x = -x;
        for (auto& x : r.h) x = -x;
        for (auto& x : r.t) x = -x;
        return r;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        Jet r = a.promote(b);
        const Jet bb = b.order() == r.order_ ? b : b.truncated(r.order_);
        r.v += bb.v;
        for (size_t i = 0; i < r.g.size(); ++i) r.g[i] += bb.g[i];
        for (size_t i = 0; i < r.h.size(); ++i) r.h[i] += bb.h[i];
        for (size_t i = 0; i < r.t.size(); ++i) r.t[i] += bb.t[i];
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check_compatible(b);
        const int n = a.n_;
        Jet r(n, std::min(a.order_, b.order_));
        r.v = a.v * b.v;
        if (r.order_ >= 1)
            for (int i = 0; i < n; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
        if (r.order_ >= 2)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    r.h[i * n + j] = a.d2(i, j) * b.v + a.g[i] * b.g[j] +
                                     a.g[j] * b.g[i] + a.v * b.d2(i, j);
        if (r.order_ >= 3)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        r.d3(i, j, k) = a.d3(i, j, k) * b.v +
                                        a.d2(i, j) * b.g[k] + a.d2(i, k) * b.g[j] +
                                        a.d2(j, k) * b.g[i] + a.g[i] * b.d2(j, k) +
                                        a.g[j] * b.d2(i, k) + a.g[k] * b.d2(i, j) +
                                        a.v * b.d3(i, j, k);
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

    friend Jet operator+(const Jet& a, T s) { Jet r = a; r.v += s; return r; }
    friend Jet operator+(T s, const Jet& a) { return a + s; }
    friend Jet operator-(const Jet& a, T s) { return a + (-s); }
    friend Jet operator-(T s, const Jet& a) { return (-a) + s; }
    friend Jet operator*(const Jet& a, T s) {
        Jet r = a;
        r.v *= s;
        for (auto& x : r.g) x *= s;
        for (auto& x : r.h) x *= s;
        for (auto& x : r.t) x *= s;
        return r;
    }
    friend Jet operator*(T s, const Jet& a) { return a * s; }
    friend Jet operator/(const Jet& a, T s) { return a * (T(1) / s); }
    friend Jet operator/(T s, const Jet& a) { return reciprocal(a) * s; }

    // Composition with a univariate function given its derivatives
    // f0 = f(u), f1 = f'(u), f2 = f''(u), f3 = f'''(u) at u = value().
    friend Jet compose(const Jet& u, T f0, T f1, T f2, T f3) {
        const int n = u.n_;
        Jet r(n, u.order_);
        r.v = f0;
        if (r.order_ >= 1)
            for (int i = 0; i < n; ++i) r.g[i] = f1 * u.g[i];
        if (r.order_ >= 2)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    r.h[i * n + j] = f2 * u.g[i] * u.g[j] + f1 * u.d2(i, j);
        if (r.order_ >= 3)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        r.d3(i, j, k) =
                            f3 * u.g[i] * u.g[j] * u.g[k] +
                            f2 * (u.d2(i, j) * u.g[k] + u.d2(i, k) * u.g[j] +
                                  u.d2(j, k) * u.g[i]) +
                            f1 * u.d3(i, j, k);
        return r;
    }

    friend Jet reciprocal(const Jet& u) {
        const T x = u.v;
        const T ix = T(1) / x;
        return compose(u, ix, -ix * ix, T(2) * ix * ix * ix,
                       T(-6) * ix * ix * ix * ix);
    }

    friend Jet sqrt(const Jet& u) {
        using std::sqrt;
        const T s = sqrt(u.v);
        const T is = T(1) / s;
        return compose(u, s, T(0.5) * is, T(-0.25) * is / u.v,
                       T(0.375) * is / (u.v * u.v));
    }
    friend Jet exp(const Jet& u) {
        using std::exp;
        const T e = exp(u.v);
        return compose(u, e, e, e, e);
    }
    friend Jet log(const Jet& u) {
        using std::log;
        const T ix = T(1) / u.v;
        return compose(u, log(u.v), ix, -ix * ix, T(2) * ix * ix * ix);
    }
    friend Jet sin(const Jet& u) {
        using std::cos;
        using std::sin;
        const T s = sin(u.v), c = cos(u.v);
        return compose(u, s, c, -s, -c);
    }
    friend Jet cos(const Jet& u) {
        using std::cos;
        using std::sin;
        const T s = sin(u.v), c = cos(u.v);
        return compose(u, c, -s, -c, s);
    }

    friend Jet pow(const Jet& u, int e) {
        if (e == 0) return Jet::constant(T(1), u.n_, u.order_);
        if (e < 0) return reciprocal(pow(u, -e));
        Jet r = u;
        for (int k = 1; k < e; ++k) r = r * u;
        return r;
    }

private:
    void clear() {
        v = T(0);
        g.fill(T(0));
        h.fill(T(0));
        t.fill(T(0));
    }
    void check_compatible(const Jet& b) const {
        if (n_ != b.n_) throw std::logic_error("Jet: mixed dimensions");
    }
    Jet promote(const Jet& b) const {
        check_compatible(b);
        return order_ <= b.order_ ? *this : truncated(b.order_);
    }

    T v;
    std::array<T, kMaxVars> g;
    std::array<T, kMaxVars * kMaxVars> h;
    std::array<T, kMaxVars * kMaxVars * kMaxVars> t;
    int n_;
    int order_;
};

using RJet = Jet<double>;
using CJet = Jet<std::complex<double>>;

// Real/imaginary split of a complex jet.
inline RJet real_part(const CJet& c) {
    RJet r(c.vars(), c.order());
    const int n = c.vars();
    r.val() = c.value().real();
    for (int i = 0; i < n; ++i) r.d1(i) = c.d1(i).real();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.d2(i, j) = c.d2(i, j).real();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) r.d3(i, j, k) = c.d3(i, j, k).real();
    return r;
}
inline RJet imag_part(const CJet& c) {
    RJet r(c.vars(), c.order());
    const int n = c.vars();
    r.val() = c.value().imag();
    for (int i = 0; i < n; ++i) r.d1(i) = c.d1(i).imag();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.d2(i, j) = c.d2(i, j).imag();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) r.d3(i, j, k) = c.d3(i, j, k).imag();
    return r;
}
inline CJet complex_jet(const RJet& re, const RJet& im) {
    CJet r(re.vars(), std::min(re.order(), im.order()));
    const int n = re.vars();
    r.val() = {re.value(), im.value()};
    for (int i = 0; i < n; ++i) r.d1(i) = {re.d1(i), im.d1(i)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.d2(i, j) = {re.d2(i, j), im.d2(i, j)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                r.d3(i, j, k) = {re.d3(i, j, k), im.d3(i, j, k)};
    return r;
}
inline CJet complex_jet(const RJet& re) {
    return complex_jet(re, RJet(re.vars(), re.order()));
}
inline CJet conj(const CJet& c) {
    return complex_jet(real_part(c), -imag_part(c));
}

// Largest coefficient magnitude, used for imaginary-part checks and for
// scaling error thresholds.
inline double max_abs_coeff(const CJet& c) {
    double m = std::abs(c.value());
    const int n = c.vars();
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(c.d1(i)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m = std::max(m, std::abs(c.d2(i, j)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                m = std::max(m, std::abs(c.d3(i, j, k)));
    return m;
}

}  // namespace weylforge
