#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ljet/rational.hpp"
#include "ljet/symbol.hpp"

namespace ljet {

class MathError : public std::runtime_error {
  public:
    explicit MathError(const std::string &msg) : std::runtime_error(msg) {}
};

enum class Kind : uint8_t { Num, Sym, Pow, Mul, Add, Call };

enum class Fn : uint8_t { Exp, Ln, Sin, Cos, Tan, Uninterp };

struct Node;
using Expr = std::shared_ptr<const Node>;

/// Immutable expression node. Trees built through the make_* functions are
/// always in canonical form:
///   - sums and products are flattened and sorted under cmp();
///   - rational constants are folded, zero summands and unit factors dropped;
///   - products carry at most one rational coefficient (first child) and at
///     most one exp() factor (arguments merged additively);
///   - same-base power factors merge by adding exponents (v^a * v^b -> v^(a+b));
///   - positive integer powers of sums are expanded.
struct Node {
    Kind kind;
    Rational num;            // Num
    Symbol sym;              // Sym
    Fn fn = Fn::Exp;         // Call
    std::string fname;       // Call (uninterpreted)
    int forder = 0;          // Call (uninterpreted): number of primes
    std::vector<Expr> kids;  // Add/Mul: args; Pow: {base, exponent}; Call: {arg}
};

// ---- construction -------------------------------------------------------

Expr make_num(Rational r);
Expr make_num(long long n);
Expr make_sym(Symbol s);
Expr make_add(std::vector<Expr> args);
Expr make_mul(std::vector<Expr> args);
Expr make_pow(Expr base, Expr exponent);
Expr make_call(Fn fn, Expr arg);
Expr make_uninterp(std::string name, int order, Expr arg);

inline Expr operator+(const Expr &a, const Expr &b) { return make_add({a, b}); }
inline Expr operator*(const Expr &a, const Expr &b) { return make_mul({a, b}); }
inline Expr operator-(const Expr &a) { return make_mul({make_num(-1), a}); }
inline Expr operator-(const Expr &a, const Expr &b) { return a + (-b); }
inline Expr operator/(const Expr &a, const Expr &b) { return a * make_pow(b, make_num(-1)); }

// ---- structure ----------------------------------------------------------

/// Total order on canonical nodes: constants < symbols < powers < products
/// < sums < kernels; ties broken structurally.
int cmp(const Expr &a, const Expr &b);

inline bool same(const Expr &a, const Expr &b) { return cmp(a, b) == 0; }
bool is_zero(const Expr &e);
bool is_one(const Expr &e);
bool is_num(const Expr &e);
/// Integer value of a rational-constant node, if it fits.
std::optional<long long> as_int(const Expr &e);

struct ExprLess {
    bool operator()(const Expr &a, const Expr &b) const { return cmp(a, b) < 0; }
};
struct SymLess {
    bool operator()(const Symbol &a, const Symbol &b) const { return sym_cmp(a, b) < 0; }
};

using Bindings = std::map<Symbol, Expr, SymLess>;

void collect_symbols(const Expr &e, std::set<Symbol, SymLess> &out);
std::set<Symbol, SymLess> free_symbols(const Expr &e);
bool contains_symbol(const Expr &e, const Symbol &s);
/// Highest derivative order among symbols of the given family (-1 if absent).
int max_order(const Expr &e, SymKind kind, const std::string &base);
/// Names of uninterpreted functions appearing in e.
std::set<std::string> uninterp_names(const Expr &e);

// ---- operations ---------------------------------------------------------

/// Partial derivative treating all other symbols as constants; an
/// uninterpreted g(t) differentiates to g'(t) when s is t.
Expr diff(const Expr &e, const Symbol &s);

/// Simultaneous substitution followed by canonicalization.
Expr substitute(const Expr &e, const Bindings &bindings);

/// Recanonicalizes a tree bottom-up. Canonical trees are fixed points, so
/// simplify(simplify(e)) == simplify(e).
Expr simplify(const Expr &e);

/// Splits off the rational coefficient of a term: e == coeff * monomial.
std::pair<Rational, Expr> coeff_split(const Expr &e);

/// Coefficients of e as a polynomial in s (index = power of s). Fails with
/// MathError if e has non-integer or negative powers of s, or s inside a
/// kernel/power argument.
std::vector<Expr> collect_poly(const Expr &e, const Symbol &s);

/// e as A*s + B with A, B free of s; MathError if not affine in s.
std::pair<Expr, Expr> affine_in(const Expr &e, const Symbol &s);

/// Exact quotient a/b as a canonical expression. Single-term b divides
/// termwise; multi-term b becomes a (b)^-1 factor.
Expr divide(const Expr &a, const Expr &b);

// ---- printing -----------------------------------------------------------

/// Renders e in the expression grammar; parse(to_string(e)) == e for
/// canonical e.
std::string to_string(const Expr &e);

} // namespace ljet
