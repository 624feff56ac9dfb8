#include "ljet/equality.hpp"

#include <cmath>

#include "ljet/numeric.hpp"

namespace ljet {

namespace {

std::optional<Symbol> find_independent(const Expr &e)
{
    for (const Symbol &s : free_symbols(e))
        if (s.kind == SymKind::Independent)
            return s;
    return std::nullopt;
}

} // namespace

EqualityResult equals(const Expr &a, const Expr &b, double tol, uint64_t seed, int points)
{
    Expr d = a - b;
    if (is_zero(d))
        return {true, EqStatus::EqualSymbolic};

    auto names = uninterp_names(d);
    Symbol t = find_independent(d).value_or(Symbol{SymKind::Independent, "t", 0});

    Rng rng(seed);
    int done = 0, attempts = 0;
    while (done < points) {
        if (++attempts > 100 * points)
            throw EvalError("equality sampling exhausted by singular points");

        std::map<std::string, Expr> inst;
        for (const std::string &n : names) {
            // random quadratic in t with small nonzero coefficients
            Expr ts = make_sym(t);
            inst[n] = make_num(rng.pick(1, 3)) + make_num(rng.pick(-3, 3)) * ts +
                      make_num(rng.pick(-2, 2)) * ts * ts;
        }
        Expr ai = inst.empty() ? a : instantiate_functions(a, inst, t);
        Expr bi = inst.empty() ? b : instantiate_functions(b, inst, t);

        Point p;
        std::set<Symbol, SymLess> syms = free_symbols(ai);
        for (const Symbol &s : free_symbols(bi))
            syms.insert(s);
        for (const Symbol &s : syms)
            p[s] = rng.uniform(0.3, 1.6);

        double va, vb;
        try {
            va = eval(ai, p);
            vb = eval(bi, p);
        } catch (const EvalError &) {
            continue;
        }
        if (!std::isfinite(va) || !std::isfinite(vb))
            continue;
        double scale = std::max({1.0, std::abs(va), std::abs(vb)});
        if (std::abs(va - vb) > tol * scale)
            return {false, EqStatus::NotEqual};
        ++done;
    }
    return {true, EqStatus::EqualNumeric};
}

} // namespace ljet
