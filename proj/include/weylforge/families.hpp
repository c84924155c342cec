// Parameterized constructors for the explicit geometries the engine can
// verify: 3-dimensional Weyl structures with distinguished congruences and
// monopoles, and 4-dimensional metrics with symmetry.
#pragma once

#include <map>
#include <optional>

#include "weylforge/jones_tod.hpp"

namespace weylforge {

struct FamilyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Family tag plus parameters.  Values are strings: plain numbers or
// expressions in the family chart's coordinates.
struct FamilySpec {
    std::string tag;
    std::map<std::string, std::string> params;

    std::string str() const;                      // key=value block
    static FamilySpec parse(const std::string&);  // inverse of str()
};

struct FamilyInstance {
    FamilySpec spec;
    // Primary structure: a chart of dim 3 or 4 with its gauge 1-form
    // (omega empty for a pure Riemannian check).
    WeylStructure weyl;
    // Distinguished unit congruence on `weyl` (empty if none).
    std::vector<ScalarExpr> congruence;
    // For 4-dimensional lifts: the 3-dimensional base structure and the
    // monopole the lift was built from.  For 3-dimensional families with a
    // distinguished monopole, `monopole` lives on `weyl` itself.
    std::optional<WeylStructure> base;
    std::optional<MonopoleData> monopole;
    // Symmetry field on a 4-dimensional chart, when one is distinguished.
    std::vector<ScalarExpr> killing;
    // Closed-form expectations (invalid ScalarExpr when not available).
    ScalarExpr tau_expected, kappa_expected;
    std::optional<double> expected_scal;
    // Named expressions that must vanish pointwise (PDE residuals etc.).
    std::vector<std::pair<std::string, ScalarExpr>> zero_fields;
    bool einstein_weyl = false;
    bool selfdual = false;
    bool ricci_flat = false;
    std::optional<FamilySpec> expected_quotient;
};

// Builds the named family; throws FamilyError on unknown tags, missing or
// invalid parameters, and failed preconditions (e.g. non-harmonic input).
FamilyInstance build_family(const FamilySpec& spec);

const std::vector<std::string>& family_tags();

// Chart with every metric component multiplied by the given factor.
OrientedChart conformally_rescaled(const OrientedChart& chart,
                                   const ScalarExpr& factor);

}  // namespace weylforge
