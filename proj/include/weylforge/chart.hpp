// Coordinate charts carrying a symbolic metric, domain box, guard
// expressions and an orientation sign, together with deterministic
// low-discrepancy sampling of admissible points.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "weylforge/expr.hpp"

namespace weylforge {

inline constexpr double kGuardMargin = 1e-6;

using Point = std::vector<double>;

struct GuardViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class OrientedChart {
public:
    OrientedChart() = default;
    OrientedChart(std::vector<std::string> coord_names,
                  std::vector<std::pair<double, double>> domain_box);

    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<std::string>& coord_names() const { return coords_; }
    const std::vector<std::pair<double, double>>& domain_box() const {
        return box_;
    }

    // Coordinate symbol i as an expression.
    ScalarExpr coord(int i) const;

    // Symbol table for parsing expressions against this chart; aliases may
    // be registered (e.g. a complex combination of two real coordinates).
    SymbolTable& symbols() { return symbols_; }
    const SymbolTable& symbols() const { return symbols_; }
    void add_alias(const std::string& name, const ScalarExpr& e);

    // Metric components (symmetric; set_metric stores both (i,j) and (j,i)).
    const ScalarExpr& metric(int i, int j) const;
    void set_metric(int i, int j, const ScalarExpr& e);

    double orientation() const { return orientation_; }
    void set_orientation(double s) { orientation_ = s; }

    // Guards: expressions that must stay > kGuardMargin (kPositive) or have
    // |value| > kGuardMargin (kNonzeroAbs) on the admissible domain.
    void add_guard(const ScalarExpr& e, GuardKind kind = GuardKind::kPositive);
    const std::vector<Guard>& guards() const { return guards_; }

    bool admissible(const Point& p) const;
    // Throws GuardViolation naming the offending guard.
    void require_admissible(const Point& p) const;

private:
    std::vector<std::string> coords_;
    std::vector<std::pair<double, double>> box_;
    std::vector<ScalarExpr> metric_;  // dim*dim, row-major
    std::vector<Guard> guards_;
    SymbolTable symbols_;
    double orientation_ = 1.0;
};

// Deterministic sample stream: a Halton sequence mapped into the domain box,
// rejecting points that violate guards or leave the box.  The seed offsets
// the sequence so distinct suites decorrelate while staying reproducible.
class SamplePlan {
public:
    SamplePlan(const OrientedChart& chart, uint64_t seed);

    // Next admissible point; throws GuardViolation if the rejection loop
    // exhausts its budget (guards incompatible with the domain box).
    Point next();

private:
    const OrientedChart& chart_;
    uint64_t index_;
};

}  // namespace weylforge
