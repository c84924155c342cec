#include "weylforge/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

namespace weylforge {

namespace {

using C = std::complex<double>;

ExprPtr make(NodeKind k) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    return n;
}

bool is_const(const ExprPtr& p, C* out = nullptr) {
    if (p->kind != NodeKind::kConstant) return false;
    if (out) *out = p->cval;
    return true;
}
bool is_const_value(const ExprPtr& p, double v) {
    return p->kind == NodeKind::kConstant && p->cval == C(v, 0.0);
}

ExprPtr const_node(C v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::kConstant;
    n->cval = v;
    return n;
}

ExprPtr binary(NodeKind k, ExprPtr a, ExprPtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

ExprPtr unary(NodeKind k, ExprPtr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    return n;
}

}  // namespace

ScalarExpr ScalarExpr::constant(double v) { return ScalarExpr(const_node(C(v, 0.0))); }
ScalarExpr ScalarExpr::constant(C v) { return ScalarExpr(const_node(v)); }
ScalarExpr ScalarExpr::symbol(int index, std::string name) {
    auto n = make(NodeKind::kSymbol);
    auto m = std::const_pointer_cast<ExprNode>(n);
    m->sym = index;
    m->name = std::move(name);
    return ScalarExpr(n);
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
    C ca, cb;
    if (is_const(a.root(), &ca) && is_const(b.root(), &cb))
        return ScalarExpr::constant(ca + cb);
    if (is_const_value(a.root(), 0.0)) return b;
    if (is_const_value(b.root(), 0.0)) return a;
    return ScalarExpr(binary(NodeKind::kAdd, a.root(), b.root()));
}
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
    C ca, cb;
    if (is_const(a.root(), &ca) && is_const(b.root(), &cb))
        return ScalarExpr::constant(ca - cb);
    if (is_const_value(b.root(), 0.0)) return a;
    if (is_const_value(a.root(), 0.0)) return -b;
    return ScalarExpr(binary(NodeKind::kSub, a.root(), b.root()));
}
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    C ca, cb;
    if (is_const(a.root(), &ca) && is_const(b.root(), &cb))
        return ScalarExpr::constant(ca * cb);
    if (is_const_value(a.root(), 0.0) || is_const_value(b.root(), 0.0))
        return ScalarExpr::constant(0.0);
    if (is_const_value(a.root(), 1.0)) return b;
    if (is_const_value(b.root(), 1.0)) return a;
    return ScalarExpr(binary(NodeKind::kMul, a.root(), b.root()));
}
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
    C ca, cb;
    if (is_const(b.root(), &cb) && cb != C(0.0, 0.0)) {
        if (is_const(a.root(), &ca)) return ScalarExpr::constant(ca / cb);
        if (cb == C(1.0, 0.0)) return a;
    }
    if (is_const_value(a.root(), 0.0) && !is_const_value(b.root(), 0.0))
        return ScalarExpr::constant(0.0);
    return ScalarExpr(binary(NodeKind::kDiv, a.root(), b.root()));
}
ScalarExpr operator-(const ScalarExpr& a) {
    C ca;
    if (is_const(a.root(), &ca)) return ScalarExpr::constant(-ca);
    if (a.root()->kind == NodeKind::kNeg) return ScalarExpr(a.root()->a);
    return ScalarExpr(unary(NodeKind::kNeg, a.root()));
}
ScalarExpr pow(const ScalarExpr& a, int e) {
    C ca;
    if (is_const(a.root(), &ca)) return ScalarExpr::constant(std::pow(ca, e));
    if (e == 0) return ScalarExpr::constant(1.0);
    if (e == 1) return a;
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::kPow;
    n->a = a.root();
    n->expo = e;
    return ScalarExpr(ExprPtr(n));
}

#define WEYLFORGE_UNARY(fn, kind)                                   \
    ScalarExpr fn(const ScalarExpr& a) {                            \
        return ScalarExpr(unary(NodeKind::kind, a.root()));         \
    }
WEYLFORGE_UNARY(sqrt, kSqrt)
WEYLFORGE_UNARY(exp, kExp)
WEYLFORGE_UNARY(log, kLog)
WEYLFORGE_UNARY(sin, kSin)
WEYLFORGE_UNARY(cos, kCos)
WEYLFORGE_UNARY(conj, kConj)
WEYLFORGE_UNARY(re, kRe)
WEYLFORGE_UNARY(im, kIm)
#undef WEYLFORGE_UNARY

ScalarExpr atan2(const ScalarExpr& y, const ScalarExpr& x) {
    return ScalarExpr(binary(NodeKind::kAtan2, y.root(), x.root()));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

constexpr double kRealTol = 1e-9;

void require_real(const CJet& j, const char* what) {
    const double scale = std::max(1.0, max_abs_coeff(j));
    if (max_abs_coeff(complex_jet(RJet(j.vars(), j.order()), imag_part(j))) >
        kRealTol * scale)
        throw EvalError(std::string(what) + ": argument is not real");
}

CJet eval_node(const ExprNode& n, std::span<const CJet> coords) {
    switch (n.kind) {
        case NodeKind::kConstant: {
            if (coords.empty()) return CJet::constant(n.cval, 0, 0);
            return CJet::constant(n.cval, coords[0].vars(), coords[0].order());
        }
        case NodeKind::kSymbol:
            if (n.sym < 0 || n.sym >= static_cast<int>(coords.size()))
                throw EvalError("symbol index out of range: " + n.name);
            return coords[n.sym];
        case NodeKind::kAdd:
            return eval_node(*n.a, coords) + eval_node(*n.b, coords);
        case NodeKind::kSub:
            return eval_node(*n.a, coords) - eval_node(*n.b, coords);
        case NodeKind::kMul:
            return eval_node(*n.a, coords) * eval_node(*n.b, coords);
        case NodeKind::kDiv: {
            const CJet num = eval_node(*n.a, coords);
            const CJet den = eval_node(*n.b, coords);
            if (std::abs(den.value()) < 1e-14)
                throw EvalError("division by (near) zero");
            return num / den;
        }
        case NodeKind::kNeg:
            return -eval_node(*n.a, coords);
        case NodeKind::kPow:
            return pow(eval_node(*n.a, coords), n.expo);
        case NodeKind::kSqrt: {
            const CJet u = eval_node(*n.a, coords);
            require_real(u, "sqrt");
            if (u.value().real() <= 0.0)
                throw EvalError("sqrt of non-positive argument");
            return sqrt(u);
        }
        case NodeKind::kExp:
            return exp(eval_node(*n.a, coords));
        case NodeKind::kLog: {
            const CJet u = eval_node(*n.a, coords);
            require_real(u, "log");
            if (u.value().real() <= 0.0)
                throw EvalError("log of non-positive argument");
            return log(u);
        }
        case NodeKind::kSin:
            return sin(eval_node(*n.a, coords));
        case NodeKind::kCos:
            return cos(eval_node(*n.a, coords));
        case NodeKind::kConj:
            return conj(eval_node(*n.a, coords));
        case NodeKind::kRe:
            return complex_jet(real_part(eval_node(*n.a, coords)));
        case NodeKind::kIm:
            return complex_jet(imag_part(eval_node(*n.a, coords)));
        case NodeKind::kAtan2: {
            const CJet y = eval_node(*n.a, coords);
            const CJet x = eval_node(*n.b, coords);
            require_real(y, "atan2");
            require_real(x, "atan2");
            // atan2(y,x) = Im log(x + i y); the complex log jet carries the
            // derivative chain, its imaginary part is the angle.
            const CJet w =
                complex_jet(real_part(x), real_part(y));
            if (std::abs(w.value()) < 1e-14)
                throw EvalError("atan2 at the origin");
            return complex_jet(imag_part(log(w)));
        }
    }
    throw EvalError("corrupt expression node");
}

}  // namespace

CJet ScalarExpr::eval(std::span<const CJet> coords) const {
    if (!root_) throw EvalError("empty expression");
    return eval_node(*root_, coords);
}

CJet ScalarExpr::eval_complex(std::span<const double> coords, int order) const {
    std::vector<CJet> seeds;
    const int n = static_cast<int>(coords.size());
    seeds.reserve(coords.size());
    for (int i = 0; i < n; ++i)
        seeds.push_back(CJet::variable(C(coords[i], 0.0), i, n, order));
    return eval(seeds);
}

RJet ScalarExpr::eval_real(std::span<const double> coords, int order) const {
    const CJet c = eval_complex(coords, order);
    const double scale = std::max(1.0, max_abs_coeff(c));
    if (max_abs_coeff(complex_jet(RJet(c.vars(), c.order()), imag_part(c))) >
        kRealTol * scale)
        throw EvalError("expression value is not real");
    return real_part(c);
}

// ---------------------------------------------------------------------------
// Differentiation

ScalarExpr ScalarExpr::derivative(int coord) const {
    if (!root_) throw EvalError("empty expression");
    std::function<ScalarExpr(const ExprPtr&)> d = [&](const ExprPtr& p) -> ScalarExpr {
        const ExprNode& n = *p;
        const ScalarExpr self(p);
        switch (n.kind) {
            case NodeKind::kConstant:
                return ScalarExpr::constant(0.0);
            case NodeKind::kSymbol:
                return ScalarExpr::constant(n.sym == coord ? 1.0 : 0.0);
            case NodeKind::kAdd:
                return d(n.a) + d(n.b);
            case NodeKind::kSub:
                return d(n.a) - d(n.b);
            case NodeKind::kMul:
                return d(n.a) * ScalarExpr(n.b) + ScalarExpr(n.a) * d(n.b);
            case NodeKind::kDiv:
                return (d(n.a) * ScalarExpr(n.b) - ScalarExpr(n.a) * d(n.b)) /
                       (ScalarExpr(n.b) * ScalarExpr(n.b));
            case NodeKind::kNeg:
                return -d(n.a);
            case NodeKind::kPow:
                return ScalarExpr::constant(n.expo) * pow(ScalarExpr(n.a), n.expo - 1) *
                       d(n.a);
            case NodeKind::kSqrt:
                return d(n.a) / (ScalarExpr::constant(2.0) * self);
            case NodeKind::kExp:
                return self * d(n.a);
            case NodeKind::kLog:
                return d(n.a) / ScalarExpr(n.a);
            case NodeKind::kSin:
                return cos(ScalarExpr(n.a)) * d(n.a);
            case NodeKind::kCos:
                return -(sin(ScalarExpr(n.a)) * d(n.a));
            case NodeKind::kConj:
                return conj(d(n.a));
            case NodeKind::kRe:
                return re(d(n.a));
            case NodeKind::kIm:
                return im(d(n.a));
            case NodeKind::kAtan2: {
                const ScalarExpr y(n.a), x(n.b);
                return (x * d(n.a) - y * d(n.b)) / (x * x + y * y);
            }
        }
        throw EvalError("corrupt expression node");
    };
    return d(root_);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Trim to the shortest representation that round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

std::string fmt_const(C v) {
    if (v.imag() == 0.0) {
        if (v.real() < 0.0) return "(" + fmt_double(v.real()) + ")";
        return fmt_double(v.real());
    }
    if (v.real() == 0.0) {
        if (v.imag() == 1.0) return "i";
        return "(" + fmt_double(v.imag()) + "*i)";
    }
    return "(" + fmt_double(v.real()) + " + " + fmt_double(v.imag()) + "*i)";
}

// Precedence levels: add/sub 1, mul/div 2, unary minus 2, pow 3, atom 4.
std::string print_node(const ExprNode& n, int parent) {
    auto wrap = [&](const std::string& s, int prec) {
        return prec < parent ? "(" + s + ")" : s;
    };
    switch (n.kind) {
        case NodeKind::kConstant:
            return fmt_const(n.cval);
        case NodeKind::kSymbol:
            return n.name;
        case NodeKind::kAdd:
            return wrap(print_node(*n.a, 1) + " + " + print_node(*n.b, 1), 1);
        case NodeKind::kSub:
            return wrap(print_node(*n.a, 1) + " - " + print_node(*n.b, 2), 1);
        case NodeKind::kMul:
            return wrap(print_node(*n.a, 2) + "*" + print_node(*n.b, 2), 2);
        case NodeKind::kDiv:
            return wrap(print_node(*n.a, 2) + "/" + print_node(*n.b, 3), 2);
        case NodeKind::kNeg:
            return wrap("-" + print_node(*n.a, 3), 2);
        case NodeKind::kPow:
            return wrap(print_node(*n.a, 4) + "^" +
                            (n.expo < 0 ? "(" + std::to_string(n.expo) + ")"
                                        : std::to_string(n.expo)),
                        3);
        case NodeKind::kSqrt:
            return "sqrt(" + print_node(*n.a, 0) + ")";
        case NodeKind::kExp:
            return "exp(" + print_node(*n.a, 0) + ")";
        case NodeKind::kLog:
            return "log(" + print_node(*n.a, 0) + ")";
        case NodeKind::kSin:
            return "sin(" + print_node(*n.a, 0) + ")";
        case NodeKind::kCos:
            return "cos(" + print_node(*n.a, 0) + ")";
        case NodeKind::kConj:
            return "conj(" + print_node(*n.a, 0) + ")";
        case NodeKind::kRe:
            return "re(" + print_node(*n.a, 0) + ")";
        case NodeKind::kIm:
            return "im(" + print_node(*n.a, 0) + ")";
        case NodeKind::kAtan2:
            return "atan2(" + print_node(*n.a, 0) + ", " + print_node(*n.b, 0) +
                   ")";
    }
    return "?";
}

}  // namespace

std::string ScalarExpr::str() const {
    if (!root_) return "<empty>";
    return print_node(*root_, 0);
}

bool ScalarExpr::structurally_equal(const ScalarExpr& other) const {
    std::function<bool(const ExprPtr&, const ExprPtr&)> eq =
        [&](const ExprPtr& x, const ExprPtr& y) -> bool {
        if (!x || !y) return x == y;
        if (x->kind != y->kind) return false;
        switch (x->kind) {
            case NodeKind::kConstant:
                return x->cval == y->cval;
            case NodeKind::kSymbol:
                return x->sym == y->sym;
            case NodeKind::kPow:
                return x->expo == y->expo && eq(x->a, y->a);
            default:
                break;
        }
        if (!eq(x->a, y->a)) return false;
        if ((x->b != nullptr) != (y->b != nullptr)) return false;
        return !x->b || eq(x->b, y->b);
    };
    return eq(root_, other.root_);
}

std::vector<int> ScalarExpr::free_symbols() const {
    std::vector<int> out;
    std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& p) {
        if (!p) return;
        if (p->kind == NodeKind::kSymbol) {
            for (int s : out)
                if (s == p->sym) return;
            out.push_back(p->sym);
        }
        walk(p->a);
        walk(p->b);
    };
    walk(root_);
    return out;
}

std::vector<Guard> implicit_guards(const ScalarExpr& e) {
    std::vector<Guard> out;
    std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& p) {
        if (!p) return;
        switch (p->kind) {
            case NodeKind::kDiv:
                if (p->b->kind != NodeKind::kConstant)
                    out.push_back({ScalarExpr(p->b), GuardKind::kNonzeroAbs});
                break;
            case NodeKind::kLog:
            case NodeKind::kSqrt:
                out.push_back({ScalarExpr(p->a), GuardKind::kPositive});
                break;
            case NodeKind::kPow:
                if (p->expo < 0)
                    out.push_back({ScalarExpr(p->a), GuardKind::kNonzeroAbs});
                break;
            default:
                break;
        }
        walk(p->a);
        walk(p->b);
    };
    walk(e.root());
    return out;
}

// ---------------------------------------------------------------------------
// Parser: recursive descent with byte offsets in errors.

namespace {

struct Parser {
    std::string_view text;
    size_t pos = 0;
    const SymbolTable& syms;

    explicit Parser(std::string_view t, const SymbolTable& s) : text(t), syms(s) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!accept(c)) throw ParseError(std::string("expected ") + what, pos);
    }

    ScalarExpr parse() {
        ScalarExpr e = expr();
        if (!eof()) throw ParseError("unexpected trailing input", pos);
        return e;
    }

    ScalarExpr expr() {
        ScalarExpr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = lhs + term();
            else if (accept('-'))
                lhs = lhs - term();
            else
                return lhs;
        }
    }

    ScalarExpr term() {
        ScalarExpr lhs = factor();
        for (;;) {
            if (accept('*'))
                lhs = lhs * factor();
            else if (accept('/'))
                lhs = lhs / factor();
            else
                return lhs;
        }
    }

    ScalarExpr factor() {
        if (accept('-')) return -factor();
        if (accept('+')) return factor();
        return power();
    }

    ScalarExpr power() {
        ScalarExpr base = atom();
        if (accept('^')) {
            skip_ws();
            bool neg = accept('-');
            if (neg && peek() == '(') throw ParseError("expected integer exponent", pos);
            // Parenthesised exponents allowed: x^(-2).
            if (!neg && accept('(')) {
                neg = accept('-');
                int e = integer();
                expect(')', "')'");
                return pow(base, neg ? -e : e);
            }
            int e = integer();
            return pow(base, neg ? -e : e);
        }
        return base;
    }

    int integer() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos == start) throw ParseError("expected integer exponent", start);
        return std::stoi(std::string(text.substr(start, pos - start)));
    }

    ScalarExpr atom() {
        skip_ws();
        if (pos >= text.size()) throw ParseError("unexpected end of input", pos);
        const char c = text[pos];
        if (c == '(') {
            ++pos;
            ScalarExpr e = expr();
            expect(')', "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }

    ScalarExpr number() {
        size_t start = pos;
        const char* begin = text.data() + pos;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("bad numeric literal", start);
        pos += static_cast<size_t>(end - begin);
        return ScalarExpr::constant(v);
    }

    ScalarExpr ident() {
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        std::string name(text.substr(start, pos - start));

        if (peek() == '(') {
            ++pos;
            if (name == "atan2") {
                ScalarExpr y = expr();
                expect(',', "','");
                ScalarExpr x = expr();
                expect(')', "')'");
                return atan2(y, x);
            }
            ScalarExpr a = expr();
            expect(')', "')'");
            if (name == "sqrt") return sqrt(a);
            if (name == "exp") return exp(a);
            if (name == "log") return log(a);
            if (name == "sin") return sin(a);
            if (name == "cos") return cos(a);
            if (name == "conj") return conj(a);
            if (name == "re") return re(a);
            if (name == "im") return im(a);
            throw ParseError("unknown function '" + name + "'", start);
        }

        if (name == "i") return ScalarExpr::constant(C(0.0, 1.0));
        if (name == "pi") return ScalarExpr::constant(3.14159265358979323846);
        for (size_t k = 0; k < syms.coords.size(); ++k)
            if (syms.coords[k] == name)
                return ScalarExpr::symbol(static_cast<int>(k), name);
        auto it = syms.aliases.find(name);
        if (it != syms.aliases.end()) return it->second;
        throw ParseError("unknown symbol '" + name + "'", start);
    }
};

}  // namespace

ScalarExpr parse_expr(std::string_view text, const SymbolTable& symbols) {
    Parser p(text, symbols);
    return p.parse();
}

}  // namespace weylforge
