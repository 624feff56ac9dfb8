#include "ljet/invariant_reduction.hpp"

#include <algorithm>

namespace ljet {

bool verify_invariant(const VectorField &V, const Expr &I, double tol, uint64_t seed)
{
    return static_cast<bool>(equals(V.apply(I), make_num(0), tol, seed));
}

namespace {

long long total_degree(const Expr &e)
{
    std::vector<Expr> terms = e->kind == Kind::Add ? e->kids : std::vector<Expr>{e};
    long long best = 0;
    for (const Expr &term : terms) {
        std::vector<Expr> factors =
            term->kind == Kind::Mul ? term->kids : std::vector<Expr>{term};
        long long d = 0;
        for (const Expr &f : factors) {
            if (f->kind == Kind::Sym)
                d += 1;
            else if (f->kind == Kind::Pow && f->kids[1]->kind == Kind::Num)
                if (auto n = as_int(f->kids[1]))
                    d += std::llabs(*n);
        }
        best = std::max(best, d);
    }
    return best;
}

} // namespace

std::vector<Expr> find_invariant_ansatz(const LambdaPair &lp, int degree_bound)
{
    if (degree_bound < 1)
        throw MathError("degree bound must be at least 1");
    VectorField X = lambda_prolong(lp, 1);

    Expr t = make_sym(lp.ctx.indep);
    Expr v = make_sym(lp.ctx.jet(0));
    Expr v1 = make_sym(lp.ctx.jet(1));

    std::vector<Expr> monos;
    const int B = degree_bound;
    for (int a = -B; a <= B; ++a)
        for (int b = -B; b <= B; ++b)
            for (int c = -B; c <= B; ++c)
                monos.push_back(make_mul({make_pow(t, make_num(a)),
                                          make_pow(v, make_num(b)),
                                          make_pow(v1, make_num(c))}));

    std::map<Expr, SparseRow, ExprLess> rows;
    for (size_t j = 0; j < monos.size(); ++j) {
        Expr img = X.apply(monos[j]);
        std::vector<Expr> terms = img->kind == Kind::Add ? img->kids : std::vector<Expr>{img};
        for (const Expr &term : terms) {
            if (is_zero(term))
                continue;
            auto [c, mono] = coeff_split(term);
            rows[mono].emplace_back(static_cast<int>(j), c);
        }
    }
    std::vector<SparseRow> mat;
    mat.reserve(rows.size());
    for (auto &[key, row] : rows)
        mat.push_back(std::move(row));

    auto basis = nullspace(std::move(mat), static_cast<int>(monos.size()));

    std::vector<Expr> out;
    for (const auto &vec : basis) {
        std::vector<Expr> parts;
        for (size_t i = 0; i < vec.size(); ++i)
            if (!vec[i].is_zero())
                parts.push_back(make_num(vec[i]) * monos[i]);
        Expr I = make_add(std::move(parts));
        if (I->kind == Kind::Num)
            continue; // constants are not invariants of interest
        Expr lead = I->kind == Kind::Add ? I->kids[0] : I;
        Rational c = coeff_split(lead).first;
        out.push_back(make_num(Rational(1) / c) * I);
    }
    std::sort(out.begin(), out.end(), [](const Expr &a, const Expr &b) {
        long long da = total_degree(a), db = total_degree(b);
        if (da != db)
            return da < db;
        return cmp(a, b) < 0;
    });
    return out;
}

std::vector<Expr> derived_invariants(const OdeProblem &ode, const Expr &x,
                                     const Expr &zeta0, int k)
{
    Expr dx = restricted_total_derivative(x, ode);
    if (is_zero(dx))
        throw MathError("x is constant along the equation: D0(x) = 0");
    std::vector<Expr> out{restrict_to_manifold(zeta0, ode)};
    for (int i = 1; i <= k - 1; ++i)
        out.push_back(divide(restricted_total_derivative(out.back(), ode), dx));
    return out;
}

namespace {

bool base_is_fresh(const Expr &base, const std::set<Symbol, SymLess> &fresh)
{
    if (!uninterp_names(base).empty())
        return false;
    for (const Symbol &s : free_symbols(base))
        if (!fresh.count(s))
            return false;
    return true;
}

// strips the common monomial content carried by non-fresh bases and the
// rational content of the coefficients
Expr strip_foreign_content(const Expr &e, const std::set<Symbol, SymLess> &fresh)
{
    std::vector<Expr> terms = e->kind == Kind::Add ? e->kids : std::vector<Expr>{e};
    if (terms.empty())
        return e;

    struct ExpInfo {
        bool first = true;
        bool rational = true;
        Rational min_exp;
        Expr symbolic_exp; // used when every occurrence has the same symbolic exponent
        bool symbolic_consistent = true;
        size_t seen = 0;
    };
    std::map<Expr, ExpInfo, ExprLess> bases;
    Rational content_gcd(0);

    for (const Expr &term : terms) {
        auto [c, mono] = coeff_split(term);
        content_gcd = Rational::gcd(content_gcd, c);
        std::vector<Expr> factors =
            mono->kind == Kind::Mul ? mono->kids : std::vector<Expr>{mono};
        std::map<Expr, Expr, ExprLess> seen_here;
        if (!is_one(mono))
            for (const Expr &f : factors) {
                Expr base = f->kind == Kind::Pow ? f->kids[0] : f;
                Expr ex = f->kind == Kind::Pow ? f->kids[1] : make_num(1);
                if (base_is_fresh(base, fresh))
                    continue;
                seen_here[base] = ex;
            }
        for (auto &[base, ex] : seen_here) {
            ExpInfo &info = bases[base];
            info.seen++;
            if (ex->kind == Kind::Num) {
                if (info.first || ex->num < info.min_exp)
                    info.min_exp = ex->num;
                if (info.first)
                    info.symbolic_exp = ex;
                else if (!same(info.symbolic_exp, ex))
                    info.symbolic_consistent = false;
                info.first = false;
            } else {
                info.rational = false;
                if (info.first)
                    info.symbolic_exp = ex;
                else if (!same(info.symbolic_exp, ex))
                    info.symbolic_consistent = false;
                info.first = false;
            }
        }
    }

    std::vector<Expr> inv;
    for (auto &[base, info] : bases) {
        bool everywhere = info.seen == terms.size();
        if (info.rational) {
            Rational m = everywhere ? info.min_exp : std::min(info.min_exp, Rational(0));
            if (!m.is_zero())
                inv.push_back(make_pow(base, make_num(-m)));
        } else if (everywhere && info.symbolic_consistent) {
            inv.push_back(make_pow(base, -info.symbolic_exp));
        }
    }
    if (!content_gcd.is_zero() && !content_gcd.is_one())
        inv.push_back(make_num(Rational(1) / content_gcd));
    if (inv.empty())
        return e;
    inv.push_back(e);
    return make_mul(std::move(inv));
}

std::string unique_name(std::string stem, const JetContext &ctx)
{
    auto taken = [&](const std::string &n) {
        if (ctx.resolve(n))
            return true;
        return ctx.is_function(n);
    };
    while (taken(stem))
        stem += "r";
    return stem;
}

} // namespace

InvariantChain reduce(const OdeProblem &ode, const Expr &x, const Expr &zeta0)
{
    const JetContext &ctx = ode.ctx;
    const int k = ode.k;
    if (is_zero(diff(zeta0, ctx.jet(1))))
        throw MathError("zeta0 must depend on v1");
    Expr dx = total_derivative(x, ctx);
    if (is_zero(dx))
        throw MathError("x is constant along the equation: D0(x) = 0");

    InvariantChain chain;
    chain.x = x;
    chain.x_sym = Symbol{SymKind::Parameter, unique_name("x", ctx), 0};
    for (int i = 0; i < k; ++i)
        chain.zeta_syms.push_back(
            Symbol{SymKind::Parameter, unique_name("zeta" + std::to_string(i), ctx), 0});

    // unrestricted chain, each relation solved for its top jet
    Bindings sol;
    Expr zi = zeta0;
    for (int i = 0; i < k; ++i) {
        if (i > 0)
            zi = divide(total_derivative(zi, ctx), dx);
        Expr rel = substitute(zi, sol);
        Symbol top = ctx.jet(i + 1);
        auto [a, b] = affine_in(rel, top); // throws when not solvable by isolation
        if (is_zero(a))
            throw MathError("zeta" + std::to_string(i) + " does not depend on " +
                            top.name());
        sol[top] = divide(make_sym(chain.zeta_syms[static_cast<size_t>(i)]) - b, a);
    }

    Expr red = substitute(ode.residual(), sol);
    bool x_is_t = same(x, make_sym(ctx.indep));
    if (x_is_t) {
        Bindings rename;
        rename[ctx.indep] = make_sym(chain.x_sym);
        red = substitute(red, rename);
    }

    std::set<Symbol, SymLess> fresh;
    fresh.insert(chain.x_sym);
    for (const Symbol &s : chain.zeta_syms)
        fresh.insert(s);
    red = strip_foreign_content(red, fresh);

    // everything left must live on the invariants
    std::vector<Expr> terms = red->kind == Kind::Add ? red->kids : std::vector<Expr>{red};
    for (const Expr &term : terms) {
        auto mono = coeff_split(term).second;
        std::vector<Expr> factors =
            mono->kind == Kind::Mul ? mono->kids : std::vector<Expr>{mono};
        if (!is_one(mono))
            for (const Expr &f : factors) {
                Expr base = f->kind == Kind::Pow ? f->kids[0] : f;
                if (!base_is_fresh(base, fresh))
                    throw MathError("reduction left residual variable dependence: " +
                                    to_string(red));
            }
    }

    // the reduced equation is affine in the top invariant; normalize its sign
    auto [atop, btop] = affine_in(red, chain.zeta_syms.back());
    if (atop->kind == Kind::Num && !is_one(atop))
        red = make_mul({make_num(Rational(1) / atop->num), red});

    chain.reduced = red;
    chain.zetas = derived_invariants(ode, x, zeta0, k);
    return chain;
}

Expr auxiliary_ode(const Expr &zeta0, const Expr &rhs, const Symbol &x_sym,
                   const Expr &x_expr)
{
    Bindings b;
    b[x_sym] = x_expr;
    return zeta0 - substitute(rhs, b);
}

} // namespace ljet
