#pragma once

#include <doctest.h>

#include "ljet/equality.hpp"
#include "ljet/jet.hpp"
#include "ljet/lambda_symmetry.hpp"
#include "ljet/numeric.hpp"
#include "ljet/parse.hpp"
#include "ljet/vector_field.hpp"

namespace ljtest {

using namespace ljet;

inline JetContext ctx2()
{
    JetContext c;
    c.order = 2;
    return c;
}

inline JetContext ctx2w()
{
    JetContext c = ctx2();
    c.has_nonlocal = true;
    return c;
}

// Example 1: v2 = v1^2/v + p g(t) v^p v1 + g'(t) v^(p+1)
inline JetContext ctx_ex1()
{
    JetContext c = ctx2();
    c.parameters = {"p"};
    c.functions = {"g"};
    return c;
}

inline OdeProblem ode_ex1()
{
    JetContext c = ctx_ex1();
    return make_ode(c, 2, parse("v1^2/v + p*g(t)*v^p*v1 + g'(t)*v^(p+1)", c));
}

inline LambdaPair lp_ex1()
{
    JetContext c = ctx_ex1();
    return {c, parse("0", c), parse("1", c), parse("(p*g(t)*v^(p+1) + v1)/v", c)};
}

// Example 2: v^5 + exp(2(1/v+t))(v^4 + v^5 - 3 v1^2 + v v2) = 0
inline OdeProblem ode_ex2()
{
    JetContext c = ctx2();
    Expr delta = parse("v^5 + exp(2*(1/v + t))*(v^4 + v^5 - 3*v1^2 + v*v2)", c);
    auto [a, b] = affine_in(delta, c.jet(2));
    return make_ode(c, 2, divide(-b, a), delta);
}

inline LambdaPair lp_ex2()
{
    JetContext c = ctx2();
    return {c, parse("1", c), parse("v^2", c), parse("-v", c)};
}

// Examples 3 and 5 share the equation v2 = v1^2/v + (v + t/v) v1 - 1
inline OdeProblem ode_ex3()
{
    JetContext c = ctx2();
    return make_ode(c, 2, parse("v1^2/v + (v + t/v)*v1 - 1", c));
}

inline LambdaPair lp_ex3()
{
    JetContext c = ctx2();
    return {c, parse("0", c), parse("v", c), parse("v + t/v", c)};
}

// Example 4: v2 = -t^2/(4v^3) - v - 1/(2v)
inline OdeProblem ode_ex4()
{
    JetContext c = ctx2();
    return make_ode(c, 2, parse("-t^2/(4*v^3) - v - 1/(2*v)", c));
}

inline LambdaPair lp_ex4()
{
    JetContext c = ctx2();
    return {c, parse("0", c), parse("v", c), parse("t/v^2", c)};
}

inline Expr P(const std::string &s, const JetContext &c) { return parse(s, c); }

// random polynomial over the given symbols: sum of up to nterms monomials of
// total degree <= deg with small integer coefficients
inline Expr random_poly(Rng &rng, const std::vector<Symbol> &syms, int deg, int nterms)
{
    std::vector<Expr> terms;
    for (int i = 0; i < nterms; ++i) {
        std::vector<Expr> fac{make_num(rng.pick(-3, 3))};
        int budget = static_cast<int>(rng.pick(0, deg));
        for (int d = 0; d < budget; ++d) {
            const Symbol &s = syms[static_cast<size_t>(rng.pick(
                0, static_cast<long long>(syms.size()) - 1))];
            fac.push_back(make_sym(s));
        }
        terms.push_back(make_mul(std::move(fac)));
    }
    return make_add(std::move(terms));
}

// random canonical expression over a small symbol pool; smooth enough for
// numeric sampling away from zero
inline Expr random_expr(Rng &rng, const std::vector<Symbol> &syms, int depth)
{
    if (depth == 0 || rng.pick(0, 5) == 0) {
        if (rng.pick(0, 2) == 0)
            return make_num(Rational(rng.pick(-6, 6), rng.pick(1, 3)));
        return make_sym(syms[static_cast<size_t>(
            rng.pick(0, static_cast<long long>(syms.size()) - 1))]);
    }
    switch (rng.pick(0, 8)) {
    case 0:
        return random_expr(rng, syms, depth - 1) + random_expr(rng, syms, depth - 1);
    case 1:
        return random_expr(rng, syms, depth - 1) * random_expr(rng, syms, depth - 1);
    case 2:
        return random_expr(rng, syms, depth - 1) -
               random_expr(rng, syms, depth - 1) * make_num(rng.pick(1, 3));
    case 3:
        return make_pow(make_sym(syms[static_cast<size_t>(rng.pick(
                            0, static_cast<long long>(syms.size()) - 1))]),
                        make_num(rng.pick(-3, 3)));
    case 4: {
        Expr arg = random_expr(rng, syms, 0);
        switch (rng.pick(0, 2)) {
        case 0:
            return make_call(Fn::Exp, arg);
        case 1:
            return make_call(Fn::Sin, arg);
        default:
            return make_call(Fn::Cos, arg);
        }
    }
    case 5: {
        // fractional and nested powers
        Expr base = random_expr(rng, syms, depth - 1);
        if (is_num(base))
            return base;
        return make_pow(base, make_num(Rational(rng.pick(-3, 3), 2)));
    }
    case 6: {
        // reciprocal of a sum, the denominator-rendering edge case
        Expr base = random_expr(rng, syms, depth - 1) + make_num(rng.pick(1, 4));
        if (is_num(base))
            return base; // the draw collapsed to a constant
        return make_pow(base, make_num(rng.pick(-2, -1)));
    }
    default:
        return random_expr(rng, syms, depth - 1) +
               make_num(rng.pick(-4, 4)) * random_expr(rng, syms, depth - 1);
    }
}

} // namespace ljtest
