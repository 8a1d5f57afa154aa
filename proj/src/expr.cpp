#include "relmech/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <set>

namespace relmech::expr {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

const char* func_name(Func f) {
    switch (f) {
        case Func::sin: return "sin";
        case Func::cos: return "cos";
        case Func::tan: return "tan";
        case Func::exp: return "exp";
        case Func::ln: return "ln";
        case Func::sqrt: return "sqrt";
        case Func::abs: return "abs";
    }
    return "?";
}

bool lookup_func(std::string_view name, Func& out) {
    static const std::pair<std::string_view, Func> table[] = {
        {"sin", Func::sin}, {"cos", Func::cos}, {"tan", Func::tan},
        {"exp", Func::exp}, {"ln", Func::ln},   {"sqrt", Func::sqrt},
        {"abs", Func::abs},
    };
    for (const auto& [n, f] : table) {
        if (n == name) { out = f; return true; }
    }
    return false;
}

[[noreturn]] void domain_error(const std::string& msg) { throw NumericDomainError(msg); }

double checked_finite(double v, const char* what) {
    if (!std::isfinite(v)) domain_error(std::string(what) + " produced a non-finite value");
    return v;
}

double apply_binary(BinaryOp op, double a, double b) {
    switch (op) {
        case BinaryOp::add: return checked_finite(a + b, "+");
        case BinaryOp::sub: return checked_finite(a - b, "-");
        case BinaryOp::mul: return checked_finite(a * b, "*");
        case BinaryOp::div:
            if (b == 0.0) domain_error("division by zero");
            return checked_finite(a / b, "/");
        case BinaryOp::pow: {
            const bool integral = std::isfinite(b) && b == std::floor(b);
            if (a < 0.0 && !integral) domain_error("negative base raised to a non-integer power");
            if (a == 0.0 && b < 0.0) domain_error("zero raised to a negative power");
            return checked_finite(std::pow(a, b), "^");
        }
    }
    domain_error("unknown binary operator");
}

double apply_func(Func f, double x) {
    switch (f) {
        case Func::sin: return std::sin(x);
        case Func::cos: return std::cos(x);
        case Func::tan: return checked_finite(std::tan(x), "tan");
        case Func::exp: return checked_finite(std::exp(x), "exp");
        case Func::ln:
            if (x <= 0.0) domain_error("ln of a non-positive value");
            return checked_finite(std::log(x), "ln");
        case Func::sqrt:
            if (x < 0.0) domain_error("sqrt of a negative value");
            return std::sqrt(x);
        case Func::abs: return std::fabs(x);
    }
    domain_error("unknown function");
}

} // namespace

// ---------------------------------------------------------------------------
// Construction

ExprPtr constant(double value) {
    auto node = std::make_shared<Expr>();
    node->kind = NodeKind::constant;
    node->value = value;
    return node;
}

ExprPtr variable(std::string name) {
    auto node = std::make_shared<Expr>();
    node->kind = NodeKind::variable;
    node->name = std::move(name);
    return node;
}

ExprPtr negate(ExprPtr child) {
    auto node = std::make_shared<Expr>();
    node->kind = NodeKind::negate;
    node->lhs = std::move(child);
    return node;
}

ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
    auto node = std::make_shared<Expr>();
    node->kind = NodeKind::binary;
    node->op = op;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
}

ExprPtr call(Func fn, ExprPtr argument) {
    auto node = std::make_shared<Expr>();
    node->kind = NodeKind::call;
    node->fn = fn;
    node->lhs = std::move(argument);
    return node;
}

// ---------------------------------------------------------------------------
// Tokenizer

std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = source.size();

    while (i < n) {
        const char c = source[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }

        const std::size_t start = i;
        if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(source[i + 1]))) {
            ++i;
            while (i < n && is_digit(source[i])) ++i;
            if (i < n && source[i] == '.') {
                ++i;
                while (i < n && is_digit(source[i])) ++i;
            }
            // exponent part only if it is actually followed by digits
            if (i < n && (source[i] == 'e' || source[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < n && (source[j] == '+' || source[j] == '-')) ++j;
                if (j < n && is_digit(source[j])) {
                    i = j;
                    while (i < n && is_digit(source[i])) ++i;
                }
            }
            std::string lexeme(source.substr(start, i - start));
            errno = 0;
            char* end = nullptr;
            const double v = std::strtod(lexeme.c_str(), &end);
            if (end != lexeme.c_str() + lexeme.size() || !std::isfinite(v))
                throw LexicalError("malformed number '" + lexeme + "'", start);
            tokens.push_back({TokenKind::number, std::move(lexeme), start});
        } else if (is_ident_start(c)) {
            ++i;
            while (i < n && is_ident_char(source[i])) ++i;
            tokens.push_back({TokenKind::identifier, std::string(source.substr(start, i - start)), start});
        } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            tokens.push_back({TokenKind::op, std::string(1, c), start});
            ++i;
        } else if (c == '(') {
            tokens.push_back({TokenKind::lparen, "(", start});
            ++i;
        } else if (c == ')') {
            tokens.push_back({TokenKind::rparen, ")", start});
            ++i;
        } else if (c == ',') {
            tokens.push_back({TokenKind::comma, ",", start});
            ++i;
        } else {
            throw LexicalError(std::string("unexpected character '") + c + "'", start);
        }
    }
    return tokens;
}

// ---------------------------------------------------------------------------
// Parser (recursive descent, precedence per the header grammar)

namespace {

class Parser {
public:
    Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

    ExprPtr run() {
        ExprPtr e = expression();
        if (pos_ < tokens_.size())
            fail("unexpected token '" + tokens_[pos_].lexeme + "'", tokens_[pos_].position);
        return e;
    }

private:
    const std::vector<Token>& tokens_;
    std::size_t pos_{0};

    [[noreturn]] void fail(const std::string& msg, std::size_t offset) {
        throw SyntaxError(msg, offset);
    }

    std::size_t end_offset() const {
        if (tokens_.empty()) return 0;
        const Token& last = tokens_.back();
        return last.position + last.lexeme.size();
    }

    const Token* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }

    bool match_op(char c) {
        const Token* t = peek();
        if (t && t->kind == TokenKind::op && t->lexeme.size() == 1 && t->lexeme[0] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr expression() {
        ExprPtr e = term();
        for (;;) {
            if (match_op('+')) e = binary(BinaryOp::add, std::move(e), term());
            else if (match_op('-')) e = binary(BinaryOp::sub, std::move(e), term());
            else return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = unary();
        for (;;) {
            if (match_op('*')) e = binary(BinaryOp::mul, std::move(e), unary());
            else if (match_op('/')) e = binary(BinaryOp::div, std::move(e), unary());
            else return e;
        }
    }

    ExprPtr unary() {
        if (match_op('-')) return negate(unary());
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (match_op('^')) return binary(BinaryOp::pow, std::move(base), unary());
        return base;
    }

    ExprPtr atom() {
        const Token* t = peek();
        if (!t) fail("unexpected end of expression", end_offset());

        switch (t->kind) {
            case TokenKind::number: {
                ++pos_;
                return constant(std::strtod(t->lexeme.c_str(), nullptr));
            }
            case TokenKind::identifier: {
                ++pos_;
                const Token* next = peek();
                if (next && next->kind == TokenKind::lparen) {
                    Func f;
                    if (!lookup_func(t->lexeme, f))
                        fail("unknown function '" + t->lexeme + "'", t->position);
                    ++pos_; // consume '('
                    ExprPtr arg = expression();
                    const Token* closing = peek();
                    if (closing && closing->kind == TokenKind::comma)
                        fail("function calls take exactly one argument", closing->position);
                    if (!closing || closing->kind != TokenKind::rparen)
                        fail("expected ')'", closing ? closing->position : end_offset());
                    ++pos_;
                    return call(f, std::move(arg));
                }
                return variable(t->lexeme);
            }
            case TokenKind::lparen: {
                ++pos_;
                ExprPtr e = expression();
                const Token* closing = peek();
                if (!closing || closing->kind != TokenKind::rparen)
                    fail("expected ')'", closing ? closing->position : end_offset());
                ++pos_;
                return e;
            }
            default:
                fail("unexpected token '" + t->lexeme + "'", t->position);
        }
    }
};

} // namespace

ExprPtr parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

ExprPtr parse_expression(std::string_view source) { return parse(tokenize(source)); }

// ---------------------------------------------------------------------------
// Evaluation

double evaluate(const Expr& e, const Environment& env) {
    switch (e.kind) {
        case NodeKind::constant: return e.value;
        case NodeKind::variable: {
            auto it = env.find(e.name);
            if (it == env.end())
                throw UnboundVariableError("unbound variable '" + e.name + "'", e.name);
            return it->second;
        }
        case NodeKind::negate: return -evaluate(*e.lhs, env);
        case NodeKind::binary: return apply_binary(e.op, evaluate(*e.lhs, env), evaluate(*e.rhs, env));
        case NodeKind::call: return apply_func(e.fn, evaluate(*e.lhs, env));
    }
    domain_error("corrupt expression node");
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

ExprPtr diff(const ExprPtr& e, std::string_view var) {
    if (!contains_variable(*e, var)) return constant(0.0);

    switch (e->kind) {
        case NodeKind::constant: return constant(0.0); // unreachable
        case NodeKind::variable: return constant(1.0);
        case NodeKind::negate: return negate(diff(e->lhs, var));
        case NodeKind::binary: {
            const ExprPtr& u = e->lhs;
            const ExprPtr& v = e->rhs;
            switch (e->op) {
                case BinaryOp::add: return binary(BinaryOp::add, diff(u, var), diff(v, var));
                case BinaryOp::sub: return binary(BinaryOp::sub, diff(u, var), diff(v, var));
                case BinaryOp::mul:
                    return binary(BinaryOp::add,
                                  binary(BinaryOp::mul, diff(u, var), v),
                                  binary(BinaryOp::mul, u, diff(v, var)));
                case BinaryOp::div:
                    return binary(BinaryOp::div,
                                  binary(BinaryOp::sub,
                                         binary(BinaryOp::mul, diff(u, var), v),
                                         binary(BinaryOp::mul, u, diff(v, var))),
                                  binary(BinaryOp::pow, v, constant(2.0)));
                case BinaryOp::pow: {
                    if (v->kind != NodeKind::constant)
                        throw DifferentiationError(
                            "cannot differentiate '^' with a non-constant exponent");
                    const double c = v->value;
                    // d(u^c) = c * u^(c-1) * u'
                    return binary(BinaryOp::mul,
                                  binary(BinaryOp::mul, constant(c),
                                         binary(BinaryOp::pow, u, constant(c - 1.0))),
                                  diff(u, var));
                }
            }
            break;
        }
        case NodeKind::call: {
            const ExprPtr& u = e->lhs;
            ExprPtr du = diff(u, var);
            ExprPtr outer;
            switch (e->fn) {
                case Func::sin: outer = call(Func::cos, u); break;
                case Func::cos: outer = negate(call(Func::sin, u)); break;
                case Func::tan:
                    outer = binary(BinaryOp::div, constant(1.0),
                                   binary(BinaryOp::pow, call(Func::cos, u), constant(2.0)));
                    break;
                case Func::exp: outer = call(Func::exp, u); break;
                case Func::ln: outer = binary(BinaryOp::div, constant(1.0), u); break;
                case Func::sqrt:
                    outer = binary(BinaryOp::div, constant(1.0),
                                   binary(BinaryOp::mul, constant(2.0), call(Func::sqrt, u)));
                    break;
                case Func::abs:
                    // sign(u) as u/|u|; evaluates to a loud error at u = 0
                    outer = binary(BinaryOp::div, u, call(Func::abs, u));
                    break;
            }
            return binary(BinaryOp::mul, std::move(outer), std::move(du));
        }
    }
    throw DifferentiationError("unsupported expression node");
}

} // namespace

ExprPtr differentiate(const ExprPtr& e, std::string_view var) {
    return simplify(diff(e, var));
}

// ---------------------------------------------------------------------------
// Simplification

namespace {

bool is_const(const ExprPtr& e, double v) {
    return e->kind == NodeKind::constant && e->value == v;
}

} // namespace

ExprPtr simplify(const ExprPtr& e) {
    switch (e->kind) {
        case NodeKind::constant:
        case NodeKind::variable:
            return e;

        case NodeKind::negate: {
            ExprPtr c = simplify(e->lhs);
            if (c->kind == NodeKind::constant) return constant(-c->value);
            if (c->kind == NodeKind::negate) return c->lhs;
            if (c == e->lhs) return e;
            return negate(std::move(c));
        }

        case NodeKind::call: {
            ExprPtr arg = simplify(e->lhs);
            if (arg->kind == NodeKind::constant) {
                try {
                    return constant(apply_func(e->fn, arg->value));
                } catch (const NumericDomainError&) {
                    // leave unfolded; evaluation will report it
                }
            }
            if (arg == e->lhs) return e;
            return call(e->fn, std::move(arg));
        }

        case NodeKind::binary: {
            ExprPtr a = simplify(e->lhs);
            ExprPtr b = simplify(e->rhs);

            if (a->kind == NodeKind::constant && b->kind == NodeKind::constant) {
                try {
                    return constant(apply_binary(e->op, a->value, b->value));
                } catch (const NumericDomainError&) {
                    // leave unfolded
                }
            }

            switch (e->op) {
                case BinaryOp::add:
                    if (is_const(a, 0.0)) return b;
                    if (is_const(b, 0.0)) return a;
                    break;
                case BinaryOp::sub:
                    if (is_const(b, 0.0)) return a;
                    if (is_const(a, 0.0)) return simplify(negate(b));
                    break;
                case BinaryOp::mul:
                    // annihilators first: folding precedes domain checks
                    if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
                    if (is_const(a, 1.0)) return b;
                    if (is_const(b, 1.0)) return a;
                    break;
                case BinaryOp::div:
                    if (is_const(a, 0.0)) return constant(0.0);
                    if (is_const(b, 1.0)) return a;
                    break;
                case BinaryOp::pow:
                    if (is_const(b, 1.0)) return a;
                    if (is_const(b, 0.0)) return constant(1.0);
                    break;
            }
            if (a == e->lhs && b == e->rhs) return e;
            return binary(e->op, std::move(a), std::move(b));
        }
    }
    return e;
}

// ---------------------------------------------------------------------------
// Substitution

ExprPtr substitute(const ExprPtr& e, const Environment& bindings) {
    switch (e->kind) {
        case NodeKind::constant: return e;
        case NodeKind::variable: {
            auto it = bindings.find(e->name);
            return it == bindings.end() ? e : constant(it->second);
        }
        case NodeKind::negate: {
            ExprPtr c = substitute(e->lhs, bindings);
            return c == e->lhs ? e : negate(std::move(c));
        }
        case NodeKind::call: {
            ExprPtr c = substitute(e->lhs, bindings);
            return c == e->lhs ? e : call(e->fn, std::move(c));
        }
        case NodeKind::binary: {
            ExprPtr a = substitute(e->lhs, bindings);
            ExprPtr b = substitute(e->rhs, bindings);
            if (a == e->lhs && b == e->rhs) return e;
            return binary(e->op, std::move(a), std::move(b));
        }
    }
    return e;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// precedence levels used by the printer; must agree with the parser
int precedence(const Expr& e) {
    switch (e.kind) {
        case NodeKind::constant:
            return e.value < 0.0 ? 3 : 5; // negative constants print like unary minus
        case NodeKind::variable:
        case NodeKind::call:
            return 5;
        case NodeKind::negate:
            return 3;
        case NodeKind::binary:
            switch (e.op) {
                case BinaryOp::add:
                case BinaryOp::sub: return 1;
                case BinaryOp::mul:
                case BinaryOp::div: return 2;
                case BinaryOp::pow: return 4;
            }
    }
    return 5;
}

void render_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void render(std::string& out, const Expr& e) {
    auto child = [&out](const Expr& c, bool parens) {
        if (parens) out += '(';
        render(out, c);
        if (parens) out += ')';
    };

    switch (e.kind) {
        case NodeKind::constant:
            render_number(out, e.value);
            return;
        case NodeKind::variable:
            out += e.name;
            return;
        case NodeKind::negate:
            out += '-';
            child(*e.lhs, precedence(*e.lhs) < 3);
            return;
        case NodeKind::call:
            out += func_name(e.fn);
            out += '(';
            render(out, *e.lhs);
            out += ')';
            return;
        case NodeKind::binary: {
            const int p = precedence(e);
            const char* sym = nullptr;
            switch (e.op) {
                case BinaryOp::add: sym = "+"; break;
                case BinaryOp::sub: sym = "-"; break;
                case BinaryOp::mul: sym = "*"; break;
                case BinaryOp::div: sym = "/"; break;
                case BinaryOp::pow: sym = "^"; break;
            }
            if (e.op == BinaryOp::pow) {
                // right-associative; exponent slot admits any unary
                child(*e.lhs, precedence(*e.lhs) <= p);
                out += sym;
                child(*e.rhs, precedence(*e.rhs) < 3);
            } else {
                child(*e.lhs, precedence(*e.lhs) < p);
                out += sym;
                child(*e.rhs, precedence(*e.rhs) <= p);
            }
            return;
        }
    }
}

} // namespace

std::string to_string(const Expr& e) {
    std::string out;
    render(out, e);
    return out;
}

// ---------------------------------------------------------------------------
// Structure queries

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::constant: return a.value == b.value;
        case NodeKind::variable: return a.name == b.name;
        case NodeKind::negate: return structurally_equal(*a.lhs, *b.lhs);
        case NodeKind::call:
            return a.fn == b.fn && structurally_equal(*a.lhs, *b.lhs);
        case NodeKind::binary:
            return a.op == b.op && structurally_equal(*a.lhs, *b.lhs) &&
                   structurally_equal(*a.rhs, *b.rhs);
    }
    return false;
}

bool contains_variable(const Expr& e, std::string_view var) {
    switch (e.kind) {
        case NodeKind::constant: return false;
        case NodeKind::variable: return e.name == var;
        case NodeKind::negate:
        case NodeKind::call:
            return contains_variable(*e.lhs, var);
        case NodeKind::binary:
            return contains_variable(*e.lhs, var) || contains_variable(*e.rhs, var);
    }
    return false;
}

namespace {

void collect_variables(const Expr& e, std::set<std::string>& out) {
    switch (e.kind) {
        case NodeKind::constant: return;
        case NodeKind::variable: out.insert(e.name); return;
        case NodeKind::negate:
        case NodeKind::call:
            collect_variables(*e.lhs, out);
            return;
        case NodeKind::binary:
            collect_variables(*e.lhs, out);
            collect_variables(*e.rhs, out);
            return;
    }
}

} // namespace

std::vector<std::string> variables_of(const Expr& e) {
    std::set<std::string> names;
    collect_variables(e, names);
    return {names.begin(), names.end()};
}

// ---------------------------------------------------------------------------
// Compilation

Compiled compile(const Expr& e, std::span<const std::string> slot_names) {
    Compiled out;
    std::size_t depth = 0;

    // post-order emission
    auto emit = [&](auto&& self, const Expr& node) -> void {
        using Op = Compiled::Instr::Op;
        switch (node.kind) {
            case NodeKind::constant:
                out.program_.push_back({Op::push_const, 0, node.value});
                out.stack_need_ = std::max(out.stack_need_, ++depth);
                return;
            case NodeKind::variable: {
                auto it = std::find(slot_names.begin(), slot_names.end(), node.name);
                if (it == slot_names.end())
                    throw UnboundVariableError("unbound variable '" + node.name + "'", node.name);
                out.program_.push_back(
                    {Op::push_arg, static_cast<std::uint32_t>(it - slot_names.begin()), 0.0});
                out.stack_need_ = std::max(out.stack_need_, ++depth);
                return;
            }
            case NodeKind::negate:
                self(self, *node.lhs);
                out.program_.push_back({Op::neg, 0, 0.0});
                return;
            case NodeKind::call: {
                self(self, *node.lhs);
                Op op{};
                switch (node.fn) {
                    case Func::sin: op = Op::sin; break;
                    case Func::cos: op = Op::cos; break;
                    case Func::tan: op = Op::tan; break;
                    case Func::exp: op = Op::exp; break;
                    case Func::ln: op = Op::ln; break;
                    case Func::sqrt: op = Op::sqrt; break;
                    case Func::abs: op = Op::abs; break;
                }
                out.program_.push_back({op, 0, 0.0});
                return;
            }
            case NodeKind::binary: {
                self(self, *node.lhs);
                self(self, *node.rhs);
                Op op{};
                switch (node.op) {
                    case BinaryOp::add: op = Op::add; break;
                    case BinaryOp::sub: op = Op::sub; break;
                    case BinaryOp::mul: op = Op::mul; break;
                    case BinaryOp::div: op = Op::div; break;
                    case BinaryOp::pow: op = Op::pow; break;
                }
                out.program_.push_back({op, 0, 0.0});
                --depth;
                return;
            }
        }
    };
    emit(emit, e);
    return out;
}

double Compiled::operator()(std::span<const double> args) const {
    double local[64];
    std::vector<double> heap;
    double* stack = local;
    if (stack_need_ > 64) {
        heap.resize(stack_need_);
        stack = heap.data();
    }

    std::size_t top = 0;
    using Op = Instr::Op;
    for (const Instr& ins : program_) {
        switch (ins.op) {
            case Op::push_const: stack[top++] = ins.value; break;
            case Op::push_arg: stack[top++] = args[ins.slot]; break;
            case Op::neg: stack[top - 1] = -stack[top - 1]; break;
            case Op::add: --top; stack[top - 1] = apply_binary(BinaryOp::add, stack[top - 1], stack[top]); break;
            case Op::sub: --top; stack[top - 1] = apply_binary(BinaryOp::sub, stack[top - 1], stack[top]); break;
            case Op::mul: --top; stack[top - 1] = apply_binary(BinaryOp::mul, stack[top - 1], stack[top]); break;
            case Op::div: --top; stack[top - 1] = apply_binary(BinaryOp::div, stack[top - 1], stack[top]); break;
            case Op::pow: --top; stack[top - 1] = apply_binary(BinaryOp::pow, stack[top - 1], stack[top]); break;
            case Op::sin: stack[top - 1] = apply_func(Func::sin, stack[top - 1]); break;
            case Op::cos: stack[top - 1] = apply_func(Func::cos, stack[top - 1]); break;
            case Op::tan: stack[top - 1] = apply_func(Func::tan, stack[top - 1]); break;
            case Op::exp: stack[top - 1] = apply_func(Func::exp, stack[top - 1]); break;
            case Op::ln: stack[top - 1] = apply_func(Func::ln, stack[top - 1]); break;
            case Op::sqrt: stack[top - 1] = apply_func(Func::sqrt, stack[top - 1]); break;
            case Op::abs: stack[top - 1] = apply_func(Func::abs, stack[top - 1]); break;
        }
    }
    return top == 1 ? stack[0] : 0.0;
}

} // namespace relmech::expr
