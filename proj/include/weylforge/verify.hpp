// Named residual suites over deterministic sample grids, with a
// machine-readable report: every family ships a registry of checks and the
// runner max-reduces each residual over the sampled points.
#pragma once

#include "weylforge/families.hpp"

namespace weylforge {

// Raised when a sample point cannot be evaluated (guard exhaustion,
// singular jets, ineligible congruence); maps to a distinct exit code.
struct NumericalBreakdown : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckResult {
    std::string name;
    int points = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyOptions {
    int points = 100;
    unsigned seed = 0;
    StarConvention convention = StarConvention::kTilde;
    // Per-check tolerance overrides; key "*" overrides every check.
    std::map<std::string, double> tol_overrides;
};

struct VerificationReport {
    FamilySpec spec;
    StarConvention convention = StarConvention::kTilde;
    unsigned seed = 0;
    int points = 0;
    double wall_time_ms = 0.0;
    std::vector<CheckResult> checks;
    // Named spot measurements (first sample point), e.g. measured_scal.
    std::vector<std::pair<std::string, double>> measurements;

    bool pass() const;
    // Deterministic serialization: identical flags and seed give identical
    // bytes.  Timing is reported separately, never in the byte-stable text.
    std::string json() const;
};

VerificationReport verify_family(const FamilyInstance& f,
                                 const VerifyOptions& options);

// Worker-pool width: WEYLFORGE_WORKERS if set, else hardware concurrency.
int worker_count();

// Deterministic admissible sample points of a chart.
std::vector<Point> sample_points(const OrientedChart& chart, int count,
                                 unsigned seed);

// Plot-data rows for the distinguished congruence of a family.
struct CongruenceRow {
    Point p;
    std::vector<double> chi;
    double tau = 0.0;
    double kappa = 0.0;
};

std::vector<CongruenceRow> congruence_rows(const FamilyInstance& f,
                                           int samples, unsigned seed);

// Scalar curvature of a chart's metric (any dimension >= 2).
double scalar_curvature(const OrientedChart& chart, const Point& p);

}  // namespace weylforge
