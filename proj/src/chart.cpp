#include "weylforge/chart.hpp"

#include <cmath>

namespace weylforge {

OrientedChart::OrientedChart(std::vector<std::string> coord_names,
                             std::vector<std::pair<double, double>> domain_box)
    : coords_(std::move(coord_names)), box_(std::move(domain_box)) {
    const int n = dim();
    if (static_cast<int>(box_.size()) != n)
        throw std::invalid_argument("chart: box size != coordinate count");
    metric_.assign(static_cast<size_t>(n) * n, ScalarExpr::constant(0.0));
    symbols_.coords = coords_;
}

ScalarExpr OrientedChart::coord(int i) const {
    return ScalarExpr::symbol(i, coords_[static_cast<size_t>(i)]);
}

void OrientedChart::add_alias(const std::string& name, const ScalarExpr& e) {
    symbols_.aliases.emplace(name, e);
}

const ScalarExpr& OrientedChart::metric(int i, int j) const {
    return metric_[static_cast<size_t>(i) * dim() + j];
}

void OrientedChart::set_metric(int i, int j, const ScalarExpr& e) {
    metric_[static_cast<size_t>(i) * dim() + j] = e;
    metric_[static_cast<size_t>(j) * dim() + i] = e;
}

void OrientedChart::add_guard(const ScalarExpr& e, GuardKind kind) {
    guards_.push_back({e, kind});
}

namespace {

bool guard_ok(const Guard& g, const Point& p) {
    double v;
    try {
        v = g.expr.eval_real(p, 0).value();
    } catch (const EvalError&) {
        return false;
    }
    return g.kind == GuardKind::kPositive ? v > kGuardMargin
                                          : std::abs(v) > kGuardMargin;
}

}  // namespace

bool OrientedChart::admissible(const Point& p) const {
    if (static_cast<int>(p.size()) != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (p[i] <= box_[i].first || p[i] >= box_[i].second) return false;
    for (const Guard& g : guards_)
        if (!guard_ok(g, p)) return false;
    return true;
}

void OrientedChart::require_admissible(const Point& p) const {
    for (int i = 0; i < dim(); ++i)
        if (p[i] <= box_[i].first || p[i] >= box_[i].second)
            throw GuardViolation("point outside domain box of coordinate " +
                                 coords_[i]);
    for (const Guard& g : guards_)
        if (!guard_ok(g, p))
            throw GuardViolation("guard violated: " + g.expr.str());
}

namespace {

// Radical-inverse in the given prime base.
double halton(uint64_t i, uint32_t base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

constexpr uint32_t kPrimes[4] = {2, 3, 5, 7};

}  // namespace

SamplePlan::SamplePlan(const OrientedChart& chart, uint64_t seed)
    : chart_(chart), index_(11 + seed * 7919) {}

Point SamplePlan::next() {
    const int n = chart_.dim();
    for (int attempt = 0; attempt < 100000; ++attempt) {
        Point p(n);
        for (int k = 0; k < n; ++k) {
            const auto [lo, hi] = chart_.domain_box()[k];
            p[k] = lo + (hi - lo) * halton(index_, kPrimes[k]);
        }
        ++index_;
        if (chart_.admissible(p)) return p;
    }
    throw GuardViolation("sample rejection budget exhausted");
}

}  // namespace weylforge
