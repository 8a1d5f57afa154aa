#pragma once

/// Scalar expression DSL: parse, evaluate, and symbolically differentiate
/// expressions of named variables.  Metrics, potentials and two-form
/// coefficients are declared as text in scenario files and differentiated
/// exactly through this module.
///
/// Grammar (see docs/expression_grammar.md for the normative EBNF):
///
///   expression = term   { ("+"|"-") term } ;
///   term       = unary  { ("*"|"/") unary } ;
///   unary      = "-" unary | power ;
///   power      = atom [ "^" unary ] ;            (right-associative)
///   atom       = number | identifier
///              | identifier "(" expression ")" | "(" expression ")" ;
///
/// so "^" binds tighter than unary minus ("-x^2" is -(x^2)) and function
/// calls take exactly one argument.  Supported functions: sin cos tan exp
/// ln sqrt abs.
///
/// Domain violations (ln of a non-positive value, sqrt of a negative,
/// division by zero, non-finite results) raise NumericDomainError instead
/// of letting NaN/inf propagate into an integration.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "relmech/errors.hpp"

namespace relmech::expr {

// ---------------------------------------------------------------------------
// Errors

/// A character outside the grammar; offset is the character position.
class LexicalError : public Error {
public:
    LexicalError(const std::string& what_arg, std::size_t offset)
        : Error(what_arg), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Malformed token stream (dangling operator, unbalanced parentheses,
/// multi-argument calls, trailing garbage).
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what_arg, std::size_t offset)
        : Error(what_arg), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation reached a variable not bound in the environment.
class UnboundVariableError : public Error {
public:
    UnboundVariableError(const std::string& what_arg, std::string name)
        : Error(what_arg), name_(std::move(name)) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

/// Real-arithmetic domain violation (or a non-finite result).
class NumericDomainError : public Error {
public:
    using Error::Error;
};

/// Differentiation hit an unsupported shape (non-constant exponent).
class DifferentiationError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Tokens

enum class TokenKind { number, identifier, op, lparen, rparen, comma };

struct Token {
    TokenKind kind;
    std::string lexeme;
    std::size_t position; // character offset into the source
};

/// Split source text into tokens.  Positions are strictly increasing and the
/// concatenation of lexemes (ignoring whitespace) reproduces the source.
/// Throws LexicalError on any character outside the grammar.
std::vector<Token> tokenize(std::string_view source);

// ---------------------------------------------------------------------------
// Expression trees

enum class NodeKind { constant, variable, negate, binary, call };
enum class BinaryOp { add, sub, mul, div, pow };
enum class Func { sin, cos, tan, exp, ln, sqrt, abs };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node.  Trees are finite, acyclic, and shared freely
/// across threads; ExprPtr children are never mutated after construction.
struct Expr {
    NodeKind kind{NodeKind::constant};
    double value{0.0};    // constant
    std::string name;     // variable
    BinaryOp op{};        // binary
    Func fn{};            // call
    ExprPtr lhs, rhs;     // children (negate and call use lhs only)
};

ExprPtr constant(double value);
ExprPtr variable(std::string name);
ExprPtr negate(ExprPtr child);
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr call(Func fn, ExprPtr argument);

/// Parse a token stream produced by tokenize.  Throws SyntaxError.
ExprPtr parse(const std::vector<Token>& tokens);

/// tokenize + parse in one step.
ExprPtr parse_expression(std::string_view source);

// ---------------------------------------------------------------------------
// Evaluation

/// Variable bindings.  Evaluation fails loudly on an unbound variable;
/// there is no default value.
using Environment = std::unordered_map<std::string, double>;

double evaluate(const Expr& e, const Environment& env);
inline double evaluate(const ExprPtr& e, const Environment& env) { return evaluate(*e, env); }

// ---------------------------------------------------------------------------
// Symbolic manipulation

/// Exact symbolic derivative with respect to `var`.  The result is already
/// simplified (constant-folded).  Exponents of "^" must be constant when the
/// base depends on `var`; otherwise DifferentiationError is thrown.
ExprPtr differentiate(const ExprPtr& e, std::string_view var);

/// Constant folding plus the identities 0+e, e+0, e-0, 1*e, e*1, 0*e, e*0,
/// e/1, e^1, e^0, neg(neg e), neg(const).  Folding precedes domain checks,
/// so 0*(1/x) simplifies to 0 even though the dropped factor can fail at
/// x = 0; evaluation results are otherwise unchanged on every environment.
/// Never throws.
ExprPtr simplify(const ExprPtr& e);

/// Replace every variable bound in `bindings` with its value as a constant.
ExprPtr substitute(const ExprPtr& e, const Environment& bindings);

/// Render to text that parses back to a structurally equal tree (for trees
/// whose constants are non-negative; negative constants render with a
/// leading minus that reparses as unary negation).
std::string to_string(const Expr& e);
inline std::string to_string(const ExprPtr& e) { return to_string(*e); }

/// Node-by-node equality (constants compared with ==).
bool structurally_equal(const Expr& a, const Expr& b);
inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    return structurally_equal(*a, *b);
}

bool contains_variable(const Expr& e, std::string_view var);

/// Sorted, de-duplicated variable names appearing in the tree.
std::vector<std::string> variables_of(const Expr& e);

// ---------------------------------------------------------------------------
// Compiled form
//
// Integrators evaluate the same expressions millions of times; Compiled
// resolves variable names to slots in a flat argument vector once, then
// evaluates a postfix program with no lookups or allocation.

class Compiled {
public:
    Compiled() = default;

    /// Evaluate with arguments in the slot order given at compile time.
    double operator()(std::span<const double> args) const;

    bool empty() const { return program_.empty(); }

private:
    friend Compiled compile(const Expr&, std::span<const std::string>);

    struct Instr {
        enum class Op : std::uint8_t {
            push_const, push_arg,
            neg, add, sub, mul, div, pow,
            sin, cos, tan, exp, ln, sqrt, abs
        };
        Op op;
        std::uint32_t slot{0};
        double value{0.0};
    };

    std::vector<Instr> program_;
    std::size_t stack_need_{0};
};

/// Resolve variables against `slot_names` (slot i = slot_names[i]).
/// Throws UnboundVariableError if the tree uses a name not listed.
Compiled compile(const Expr& e, std::span<const std::string> slot_names);
inline Compiled compile(const ExprPtr& e, std::span<const std::string> slot_names) {
    return compile(*e, slot_names);
}

} // namespace relmech::expr
