#include "ljet/lambda_symmetry.hpp"

#include <algorithm>

namespace ljet {

namespace {

// deterministic default instantiations for uninterpreted functions that the
// problem file left abstract; numeric fallbacks need something concrete
std::map<std::string, Expr> fill_instantiations(const OdeProblem &ode,
                                                const std::vector<Expr> &exprs,
                                                uint64_t seed)
{
    std::map<std::string, Expr> inst = ode.instantiations;
    std::set<std::string> names;
    for (const Expr &e : exprs)
        for (const std::string &n : uninterp_names(e))
            names.insert(n);
    Rng rng(seed ^ 0x5bf03635u);
    Expr t = make_sym(ode.ctx.indep);
    for (const std::string &n : names)
        if (!inst.count(n))
            inst[n] = make_num(rng.pick(1, 2)) + make_num(rng.pick(1, 3)) * t;
    return inst;
}

bool residual_vanishes_on_manifold(const Expr &residual, const OdeProblem &ode,
                                   const CoveringSystem *cover, double tol,
                                   uint64_t seed)
{
    OdeProblem ode2 = ode;
    ode2.instantiations = fill_instantiations(ode, {residual, ode.rhs}, seed);
    SamplePlan plan;
    plan.seed = seed;
    plan.count = 100;
    for (const Expr &d : collect_denominators(residual))
        plan.excluded.push_back(d);
    auto points = sample_manifold(ode2, cover, plan);
    Expr r = instantiate_functions(residual, ode2.instantiations, ode.ctx.indep);
    return verify_residual(r, points, tol).ok();
}

} // namespace

SymmetryCheck is_lambda_symmetry(const OdeProblem &ode, const LambdaPair &lp, double tol,
                                 uint64_t seed)
{
    VectorField X = lambda_prolong(lp, ode.k);
    SymmetryCheck out;
    out.residual = restrict_to_manifold(X.apply(ode.residual()), ode);
    if (is_zero(out.residual)) {
        out.ok = true;
        out.symbolic = true;
        return out;
    }
    out.symbolic = false;
    out.ok = residual_vanishes_on_manifold(out.residual, ode, nullptr, tol, seed);
    return out;
}

CoveringSystem build_covering(const OdeProblem &ode, const Expr &lambda)
{
    if (max_order(lambda, SymKind::Jet, ode.ctx.jet_base) >= ode.k)
        throw MathError("lambda must not depend on jets of order >= " +
                        std::to_string(ode.k));
    if (max_order(lambda, SymKind::NonlocalJet, ode.ctx.nonlocal_base) >= 1)
        throw MathError("lambda must not depend on derivatives of w");
    CoveringSystem cover;
    cover.base = ode;
    cover.base.ctx = ode.ctx.with_nonlocal();
    cover.h = lambda;
    return cover;
}

ChiPde::ChiPde(OdeProblem ode, LambdaPair lp) : ode_(std::move(ode)), lp_(std::move(lp))
{
    VectorField X1 = lambda_prolong(lp_, 1);
    Expr d0rho = total_derivative(lp_.rho, lp_.ctx);
    known_ = X1.apply(lp_.lambda) + lp_.lambda * lp_.lambda * lp_.rho +
             lp_.lambda * d0rho;
}

Expr ChiPde::display() const
{
    const JetContext &ctx = ode_.ctx;
    auto placeholder = [](const std::string &n) {
        return make_sym(Symbol{SymKind::Parameter, n, 0});
    };
    auto slot = [&](int j) { // stands for ∂_{v_j} chi
        return placeholder(j == 0 ? "chiv" : "chiv" + std::to_string(j));
    };
    std::vector<Expr> parts;
    parts.push_back(placeholder("chit"));
    for (int i = 1; i <= ode_.k - 1; ++i)
        parts.push_back(make_sym(ctx.jet(i)) * slot(i - 1));
    parts.push_back(ode_.rhs * slot(ode_.k - 1));
    parts.push_back(-known_);
    parts.push_back(lp_.lambda * placeholder("chi"));
    return make_add(std::move(parts));
}

Expr ChiPde::residual_at(const Expr &chi) const
{
    if (max_order(chi, SymKind::Jet, ode_.ctx.jet_base) >= ode_.k)
        throw MathError("chi may depend on jets of order <= " + std::to_string(ode_.k - 1));
    return restricted_total_derivative(chi, ode_) - known_ + lp_.lambda * chi;
}

namespace {

// ---- small antiderivative table in v --------------------------------------
//
// Integrates sums of c(t) * v^e  (e != -1, possibly symbolic) plus
// c(t) * v^-1 plus c(t) * exp(a v); anything else is out of table.

struct VIntegral {
    Expr value;    // antiderivative without the ln part
    Expr ln_coeff; // coefficient of ln(v)
};

std::optional<VIntegral> integrate_in_v(const Expr &e, const Symbol &v)
{
    std::vector<Expr> terms = e->kind == Kind::Add ? e->kids : std::vector<Expr>{e};
    Expr vexpr = make_sym(v);
    std::vector<Expr> value, lnc;
    for (const Expr &term : terms) {
        std::vector<Expr> factors =
            term->kind == Kind::Mul ? term->kids : std::vector<Expr>{term};
        Expr expnt = make_num(0); // power of v
        std::optional<Expr> exp_slope; // a in exp(a v + b), b free of v
        std::vector<Expr> rest;
        bool bad = false;
        for (const Expr &f : factors) {
            if (f->kind == Kind::Sym && f->sym == v) {
                expnt = expnt + make_num(1);
            } else if (f->kind == Kind::Pow && f->kids[0]->kind == Kind::Sym &&
                       f->kids[0]->sym == v && !contains_symbol(f->kids[1], v)) {
                expnt = expnt + f->kids[1];
            } else if (f->kind == Kind::Call && f->fn == Fn::Exp) {
                Expr slope, inter;
                try {
                    std::tie(slope, inter) = affine_in(f->kids[0], v);
                } catch (const MathError &) {
                    bad = true;
                    break;
                }
                if (is_zero(slope)) {
                    rest.push_back(f);
                    continue;
                }
                if (exp_slope) {
                    bad = true;
                    break;
                }
                exp_slope = slope;
                rest.push_back(make_call(Fn::Exp, inter));
            } else if (!contains_symbol(f, v)) {
                rest.push_back(f);
            } else {
                bad = true;
                break;
            }
        }
        if (bad)
            return std::nullopt;
        Expr coeff = make_mul(rest);
        if (exp_slope) {
            // c * v^e * exp(a v): only e = 0 is in the table
            if (!is_zero(expnt))
                return std::nullopt;
            value.push_back(coeff * make_call(Fn::Exp, *exp_slope * vexpr) / *exp_slope);
            continue;
        }
        if (is_num(expnt) && as_int(expnt) && *as_int(expnt) == -1) {
            lnc.push_back(coeff);
            continue;
        }
        Expr e1 = expnt + make_num(1);
        if (is_zero(e1))
            return std::nullopt; // symbolic exponent collapsing onto -1
        value.push_back(coeff * make_pow(vexpr, e1) / e1);
    }
    return VIntegral{make_add(std::move(value)), make_add(std::move(lnc))};
}

// exp(-I) for an integral I = value + ln_coeff * ln v, rendered structurally
// as v^(-ln_coeff) * exp(-value)
Expr exp_of_negative(const VIntegral &I, const Symbol &v)
{
    return make_pow(make_sym(v), -I.ln_coeff) * make_call(Fn::Exp, -I.value);
}

Expr exp_of_positive(const VIntegral &I, const Symbol &v)
{
    return make_pow(make_sym(v), I.ln_coeff) * make_call(Fn::Exp, I.value);
}

// eq = a C' + b C + r, all free of the unknown; false if not linear
bool split_linear_in_c(const Expr &eq, const std::string &cname, Expr &a, Expr &b, Expr &r)
{
    std::vector<Expr> terms = eq->kind == Kind::Add ? eq->kids : std::vector<Expr>{eq};
    std::vector<Expr> av, bv, rv;
    for (const Expr &term : terms) {
        std::vector<Expr> factors =
            term->kind == Kind::Mul ? term->kids : std::vector<Expr>{term};
        int slot = 2; // 0 -> C', 1 -> C, 2 -> free
        std::vector<Expr> rest;
        for (const Expr &f : factors) {
            if (f->kind == Kind::Call && f->fn == Fn::Uninterp && f->fname == cname) {
                if (slot != 2 || f->forder > 1)
                    return false; // quadratic or higher derivative
                slot = f->forder == 1 ? 0 : 1;
                continue;
            }
            if (!uninterp_names(f).count(cname)) {
                rest.push_back(f);
                continue;
            }
            return false; // C inside a power or kernel
        }
        Expr c = make_mul(std::move(rest));
        (slot == 0 ? av : slot == 1 ? bv : rv).push_back(c);
    }
    a = make_add(std::move(av));
    b = make_add(std::move(bv));
    r = make_add(std::move(rv));
    return true;
}

// group the terms of eq by their v-dependent monomial part; returns the
// coefficient equations in deterministic key order
std::vector<Expr> group_by_v_part(const Expr &eq, const Symbol &v)
{
    std::map<Expr, std::vector<Expr>, ExprLess> groups;
    std::vector<Expr> terms = eq->kind == Kind::Add ? eq->kids : std::vector<Expr>{eq};
    for (const Expr &term : terms) {
        if (is_zero(term))
            continue;
        std::vector<Expr> factors =
            term->kind == Kind::Mul ? term->kids : std::vector<Expr>{term};
        std::vector<Expr> key, coeff;
        for (const Expr &f : factors)
            (contains_symbol(f, v) ? key : coeff).push_back(f);
        groups[make_mul(std::move(key))].push_back(make_mul(std::move(coeff)));
    }
    std::vector<Expr> eqs;
    for (auto &[key, parts] : groups) {
        Expr c = make_add(std::move(parts));
        if (!is_zero(c))
            eqs.push_back(c);
    }
    return eqs;
}

std::string fresh_name(const std::string &stem, const std::vector<std::string> &taken)
{
    std::string n = stem;
    while (std::find(taken.begin(), taken.end(), n) != taken.end())
        n += "0";
    return n;
}

} // namespace

ChiResult solve_chi_ansatz(const OdeProblem &ode, const LambdaPair &lp)
{
    if (ode.k != 2)
        return ChiResult{ChiStatus::VerifiedOnly, nullptr, {}};
    ChiPde pde(ode, lp);

    const Symbol v1 = ode.ctx.jet(1);
    const Symbol v0 = ode.ctx.jet(0);
    const Symbol t = ode.ctx.indep;

    std::vector<Expr> lam, kno;
    try {
        lam = collect_poly(lp.lambda, v1);
        kno = collect_poly(pde.known(), v1);
    } catch (const MathError &) {
        return ChiResult{ChiStatus::Unsolved, nullptr, {pde.known()}};
    }
    auto at = [](const std::vector<Expr> &c, size_t i) {
        return i < c.size() ? c[i] : make_num(0);
    };

    // coefficients of v1^e for e >= 2: lambda_e * chi - K_e = 0 (algebraic)
    size_t top = std::max(lam.size(), kno.size());
    for (size_t e = 2; e < top; ++e) {
        Expr le = at(lam, e), ke = at(kno, e);
        if (is_zero(le)) {
            if (!is_zero(ke))
                return ChiResult{ChiStatus::Unsolved, nullptr, {ke}};
            continue;
        }
        Expr cand = divide(ke, le);
        if (max_order(cand, SymKind::Jet, ode.ctx.jet_base) >= 1)
            return ChiResult{ChiStatus::Unsolved, nullptr, {le, ke}};
        if (is_zero(pde.residual_at(cand)))
            return ChiResult{ChiStatus::Solved, cand, {}};
        return ChiResult{ChiStatus::Unsolved, nullptr, {pde.residual_at(cand)}};
    }

    // v1^1 coefficient: chi_v + lambda_1 chi - K_1 = 0, an ODE in v
    Expr lam1 = at(lam, 1), k1 = at(kno, 1);
    auto int_lam = integrate_in_v(lam1, v0);
    if (!int_lam)
        return ChiResult{ChiStatus::Unsolved, nullptr, {lam1}};
    Expr ifac = exp_of_negative(*int_lam, v0); // E = exp(-∫lambda_1 dv)
    Expr ifac_inv = exp_of_positive(*int_lam, v0);

    Expr particular = make_num(0);
    if (!is_zero(k1)) {
        auto int_k = integrate_in_v(k1 * ifac_inv, v0);
        if (!int_k)
            return ChiResult{ChiStatus::Unsolved, nullptr, {k1}};
        particular = ifac * (int_k->value + int_k->ln_coeff * make_call(Fn::Ln, make_sym(v0)));
    }

    std::string cname = fresh_name("C", ode.ctx.functions);
    Expr cfun = make_uninterp(cname, 0, make_sym(t));
    Expr chi = ifac * cfun + particular;

    Expr full = pde.residual_at(chi);
    std::vector<Expr> eqs = group_by_v_part(full, v0);

    // stage one: an equation a C' = 0 forces C constant
    std::string const_name = fresh_name("c1", ode.ctx.parameters);
    Symbol csym{SymKind::IntegrationConstant, const_name, 0};
    bool c_is_constant = false;
    for (const Expr &eq : eqs) {
        Expr a, b, r;
        if (!split_linear_in_c(eq, cname, a, b, r))
            return ChiResult{ChiStatus::Unsolved, nullptr, eqs};
        if (!is_zero(a) && is_zero(b) && is_zero(r)) {
            c_is_constant = true;
            break;
        }
    }

    if (c_is_constant) {
        std::map<std::string, Expr> inst{{cname, make_sym(csym)}};
        std::vector<Expr> ceqs;
        for (const Expr &eq : eqs) {
            Expr e2 = instantiate_functions(eq, inst, t);
            if (!is_zero(e2))
                ceqs.push_back(e2);
        }
        // pin the constant from the first equation whose solution is a pure
        // parameter expression, then check the rest
        Expr cval;
        for (const Expr &eq : ceqs) {
            Expr a, b;
            try {
                std::tie(a, b) = affine_in(eq, csym);
            } catch (const MathError &) {
                return ChiResult{ChiStatus::Unsolved, nullptr, ceqs};
            }
            if (is_zero(a))
                continue;
            Expr cand = divide(-b, a);
            bool clean = uninterp_names(cand).empty();
            for (const Symbol &s : free_symbols(cand))
                if (s.kind != SymKind::Parameter)
                    clean = false;
            if (clean) {
                cval = cand;
                break;
            }
        }
        if (!cval)
            cval = make_num(0); // unconstrained constant
        Bindings bind{{csym, cval}};
        std::vector<Expr> leftovers;
        for (const Expr &eq : ceqs) {
            Expr r = substitute(eq, bind);
            if (!is_zero(r))
                leftovers.push_back(r);
        }
        if (!leftovers.empty())
            return ChiResult{ChiStatus::Unsolved, nullptr, leftovers};
        Expr chi_final = substitute(instantiate_functions(chi, inst, t), bind);
        if (!is_zero(pde.residual_at(chi_final)))
            return ChiResult{ChiStatus::Unsolved, nullptr, {pde.residual_at(chi_final)}};
        return ChiResult{ChiStatus::Solved, chi_final, {}};
    }

    // stage two: an algebraic equation b C + r = 0 pins C(t) directly
    for (const Expr &eq : eqs) {
        Expr a, b, r;
        if (!split_linear_in_c(eq, cname, a, b, r))
            return ChiResult{ChiStatus::Unsolved, nullptr, eqs};
        if (is_zero(a) && !is_zero(b)) {
            Expr cval = divide(-r, b);
            std::map<std::string, Expr> inst{{cname, cval}};
            std::vector<Expr> leftovers;
            for (const Expr &other : eqs) {
                Expr res = instantiate_functions(other, inst, t);
                if (!is_zero(res))
                    leftovers.push_back(res);
            }
            if (!leftovers.empty())
                return ChiResult{ChiStatus::Unsolved, nullptr, leftovers};
            Expr chi_final = instantiate_functions(chi, inst, t);
            if (!is_zero(pde.residual_at(chi_final)))
                return ChiResult{ChiStatus::Unsolved, nullptr,
                                 {pde.residual_at(chi_final)}};
            return ChiResult{ChiStatus::Solved, chi_final, {}};
        }
    }

    return ChiResult{ChiStatus::Unsolved, nullptr, eqs};
}

NonlocalSymmetry reconstruct_nonlocal(const OdeProblem &ode, const LambdaPair &lp,
                                      const Expr &chi, double tol, uint64_t seed)
{
    ChiPde pde(ode, lp);
    Expr pr = pde.residual_at(chi);
    if (!is_zero(pr) && !equals(pr, make_num(0), tol, seed))
        throw MathError("chi does not satisfy the reconstruction equation; residual " +
                        to_string(pr));

    CoveringSystem cover = build_covering(ode, lp.lambda);
    const JetContext &ctx = cover.base.ctx;
    Expr ew = make_call(Fn::Exp, make_sym(ctx.nonlocal(0)));

    VectorField seed_field;
    seed_field.ctx = ctx;
    seed_field.xi = ew * lp.rho;
    seed_field.eta_v = {ew * lp.psi};
    seed_field.eta_w = {ew * chi};
    NonlocalSymmetry sym;
    sym.y = std_prolong(seed_field, ode.k);
    sym.exponential_form = true;

    auto check = verify_nonlocal_symmetry(cover, sym, tol, seed);
    if (!check.ok())
        throw MathError("reconstructed field is not tangent to the covering");
    return sym;
}

NonlocalVerification verify_nonlocal_symmetry(const CoveringSystem &cover,
                                              const NonlocalSymmetry &sym, double tol,
                                              uint64_t seed)
{
    const OdeProblem &ode = cover.base;
    const JetContext &ctx = ode.ctx.has_nonlocal ? ode.ctx : ode.ctx.with_nonlocal();
    NonlocalVerification out;

    // (a) [∂_w, Y] = Y
    VectorField dw;
    dw.ctx = ctx;
    dw.xi = make_num(0);
    dw.eta_w = {make_num(1)};
    VectorField br = commutator(dw, sym.y);
    bool exp_ok = true;
    auto same_or_numeric = [&](const Expr &a, const Expr &b) {
        return static_cast<bool>(equals(a, b, tol, seed));
    };
    exp_ok = exp_ok && same_or_numeric(br.xi, sym.y.xi);
    for (size_t i = 0; i < std::max(br.eta_v.size(), sym.y.eta_v.size()); ++i) {
        Expr a = i < br.eta_v.size() ? br.eta_v[i] : make_num(0);
        Expr b = i < sym.y.eta_v.size() ? sym.y.eta_v[i] : make_num(0);
        exp_ok = exp_ok && same_or_numeric(a, b);
    }
    for (size_t i = 0; i < std::max(br.eta_w.size(), sym.y.eta_w.size()); ++i) {
        Expr a = i < br.eta_w.size() ? br.eta_w[i] : make_num(0);
        Expr b = i < sym.y.eta_w.size() ? sym.y.eta_w[i] : make_num(0);
        exp_ok = exp_ok && same_or_numeric(a, b);
    }
    out.exponential_commutes = exp_ok;

    // (b), (c) tangency to v_k = f and w1 = H
    Expr r1 = restrict_to_manifold(sym.y.apply(ode.residual()), ode, &cover);
    Expr r2 = restrict_to_manifold(
        sym.y.apply(make_sym(ctx.nonlocal(1)) - cover.h), ode, &cover);
    out.tangent_equation =
        is_zero(r1) || residual_vanishes_on_manifold(r1, ode, &cover, tol, seed);
    out.tangent_covering =
        is_zero(r2) || residual_vanishes_on_manifold(r2, ode, &cover, tol, seed);
    return out;
}

LambdaPair extract_lambda_from_nonlocal(const NonlocalSymmetry &sym,
                                        const CoveringSystem &cover)
{
    const JetContext &ctx = cover.base.ctx;
    Expr emw = make_call(Fn::Exp, -make_sym(ctx.nonlocal(0)));
    auto strip = [&](const Expr &coeff, const char *what) {
        Expr s = coeff * emw;
        if (max_order(s, SymKind::NonlocalJet, ctx.nonlocal_base) >= 0)
            throw MathError(std::string("field is not in exponential form: ") + what +
                            " = " + to_string(coeff));
        return s;
    };
    LambdaPair lp;
    lp.ctx = cover.base.ctx;
    lp.ctx.has_nonlocal = false;
    lp.rho = strip(sym.y.xi, "xi");
    lp.psi = strip(sym.y.eta_v.empty() ? make_num(0) : sym.y.eta_v[0], "eta_v0");
    lp.lambda = cover.h;
    return lp;
}

} // namespace ljet
