// Scalar expression trees over chart coordinates: parsing, printing,
// symbolic differentiation and jet evaluation.  Complex constants are
// permitted; evaluation is carried out in complex jets and callers that
// expect a real quantity check the imaginary part.
#pragma once

#include <complex>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "weylforge/jet.hpp"

namespace weylforge {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, size_t offset)
        : std::runtime_error(msg + " at offset " + std::to_string(offset)),
          offset(offset) {}
    size_t offset;
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class NodeKind {
    kConstant,
    kSymbol,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kNeg,
    kPow,   // integer exponent
    kSqrt,
    kExp,
    kLog,
    kSin,
    kCos,
    kConj,
    kRe,
    kIm,
    kAtan2,
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    NodeKind kind;
    std::complex<double> cval{0.0, 0.0};  // kConstant
    int sym = -1;                         // kSymbol: coordinate index
    std::string name;                     // kSymbol: display name
    int expo = 0;                         // kPow
    ExprPtr a, b;
};

class ScalarExpr {
public:
    ScalarExpr() = default;
    explicit ScalarExpr(ExprPtr root) : root_(std::move(root)) {}

    static ScalarExpr constant(double v);
    static ScalarExpr constant(std::complex<double> v);
    static ScalarExpr symbol(int index, std::string name);

    bool valid() const { return root_ != nullptr; }
    const ExprPtr& root() const { return root_; }

    // Evaluation in complex jets; coords[i] is the seed jet of coordinate i.
    CJet eval(std::span<const CJet> coords) const;

    // Real jet of the expression at the given coordinate values.  Throws
    // EvalError if the value is not real (relative tolerance 1e-9) or if a
    // singular operation is hit.
    RJet eval_real(std::span<const double> coords, int order = kMaxOrder) const;
    CJet eval_complex(std::span<const double> coords,
                      int order = kMaxOrder) const;

    ScalarExpr derivative(int coord) const;

    std::string str() const;
    bool structurally_equal(const ScalarExpr& other) const;

    // Symbols appearing in the tree.
    std::vector<int> free_symbols() const;

private:
    ExprPtr root_;
};

// Smart constructors with constant folding and unit/zero elimination.
ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a);
ScalarExpr pow(const ScalarExpr& a, int e);
ScalarExpr sqrt(const ScalarExpr& a);
ScalarExpr exp(const ScalarExpr& a);
ScalarExpr log(const ScalarExpr& a);
ScalarExpr sin(const ScalarExpr& a);
ScalarExpr cos(const ScalarExpr& a);
ScalarExpr conj(const ScalarExpr& a);
ScalarExpr re(const ScalarExpr& a);
ScalarExpr im(const ScalarExpr& a);
ScalarExpr atan2(const ScalarExpr& y, const ScalarExpr& x);

inline ScalarExpr operator+(const ScalarExpr& a, double s) {
    return a + ScalarExpr::constant(s);
}
inline ScalarExpr operator+(double s, const ScalarExpr& a) {
    return ScalarExpr::constant(s) + a;
}
inline ScalarExpr operator-(const ScalarExpr& a, double s) {
    return a - ScalarExpr::constant(s);
}
inline ScalarExpr operator-(double s, const ScalarExpr& a) {
    return ScalarExpr::constant(s) - a;
}
inline ScalarExpr operator*(const ScalarExpr& a, double s) {
    return a * ScalarExpr::constant(s);
}
inline ScalarExpr operator*(double s, const ScalarExpr& a) {
    return ScalarExpr::constant(s) * a;
}
inline ScalarExpr operator/(const ScalarExpr& a, double s) {
    return a / ScalarExpr::constant(s);
}
inline ScalarExpr operator/(double s, const ScalarExpr& a) {
    return ScalarExpr::constant(s) / a;
}

// Symbol table used by the parser: coordinate names plus optional aliases
// that expand to expression trees (e.g. "zeta" -> x + i*y).
struct SymbolTable {
    std::vector<std::string> coords;
    std::map<std::string, ScalarExpr> aliases;
};

ScalarExpr parse_expr(std::string_view text, const SymbolTable& symbols);

// Implicit guards collected from an expression tree: denominators must stay
// away from zero, log and sqrt arguments must stay positive.
enum class GuardKind { kPositive, kNonzeroAbs };
struct Guard {
    ScalarExpr expr;
    GuardKind kind;
};
std::vector<Guard> implicit_guards(const ScalarExpr& e);

}  // namespace weylforge
