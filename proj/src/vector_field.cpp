#include "ljet/vector_field.hpp"

namespace ljet {

VectorField make_field(JetContext ctx, Expr xi, std::vector<Expr> eta_v,
                       std::vector<Expr> eta_w)
{
    VectorField v;
    v.ctx = std::move(ctx);
    v.xi = std::move(xi);
    v.eta_v = std::move(eta_v);
    v.eta_w = std::move(eta_w);
    return v;
}

Expr VectorField::apply(const Expr &e) const
{
    std::vector<Expr> parts;
    if (xi && !is_zero(xi))
        parts.push_back(xi * diff(e, ctx.indep));
    for (size_t i = 0; i < eta_v.size(); ++i)
        if (!is_zero(eta_v[i]))
            parts.push_back(eta_v[i] * diff(e, ctx.jet(static_cast<int>(i))));
    for (size_t i = 0; i < eta_w.size(); ++i)
        if (!is_zero(eta_w[i]))
            parts.push_back(eta_w[i] * diff(e, ctx.nonlocal(static_cast<int>(i))));
    return make_add(std::move(parts));
}

VectorField std_prolong(const VectorField &X, int k)
{
    if (X.eta_v.empty())
        throw MathError("std_prolong needs the ∂_v coefficient");
    VectorField Y;
    Y.ctx = X.ctx;
    Y.xi = X.xi ? X.xi : make_num(0);
    Y.eta_v = {X.eta_v[0]};
    if (!X.eta_w.empty())
        Y.eta_w = {X.eta_w[0]};
    Expr dxi = total_derivative(Y.xi, Y.ctx);
    for (int i = 1; i <= k; ++i) {
        Y.eta_v.push_back(total_derivative(Y.eta_v[i - 1], Y.ctx) -
                          dxi * make_sym(Y.ctx.jet(i)));
        if (!Y.eta_w.empty())
            Y.eta_w.push_back(total_derivative(Y.eta_w[i - 1], Y.ctx) -
                              dxi * make_sym(Y.ctx.nonlocal(i)));
    }
    Y.prolonged = true;
    return Y;
}

VectorField lambda_prolong(const LambdaPair &lp, int k)
{
    if (k < 1)
        throw MathError("lambda_prolong needs k >= 1");
    VectorField Y;
    Y.ctx = lp.ctx;
    Y.xi = lp.rho;
    Y.eta_v = {lp.psi};
    Expr drho = total_derivative(lp.rho, Y.ctx);
    for (int i = 1; i <= k; ++i) {
        Expr vi = make_sym(Y.ctx.jet(i));
        Expr prev = Y.eta_v[i - 1];
        Y.eta_v.push_back(total_derivative(prev, Y.ctx) - drho * vi +
                          lp.lambda * (prev - lp.rho * vi));
    }
    Y.prolonged = true;
    return Y;
}

VectorField commutator(const VectorField &A, const VectorField &B)
{
    if (A.ctx.indep.base != B.ctx.indep.base || A.ctx.jet_base != B.ctx.jet_base ||
        (A.ctx.has_nonlocal && B.ctx.has_nonlocal &&
         A.ctx.nonlocal_base != B.ctx.nonlocal_base))
        throw MathError("commutator: context mismatch");
    VectorField C;
    C.ctx = A.ctx.has_nonlocal ? A.ctx : B.ctx;
    auto bracket = [&](const Expr &fa, const Expr &fb) {
        return A.apply(fb) - B.apply(fa);
    };
    Expr zero = make_num(0);
    C.xi = bracket(A.xi ? A.xi : zero, B.xi ? B.xi : zero);
    size_t nv = std::max(A.eta_v.size(), B.eta_v.size());
    for (size_t i = 0; i < nv; ++i)
        C.eta_v.push_back(bracket(i < A.eta_v.size() ? A.eta_v[i] : zero,
                                  i < B.eta_v.size() ? B.eta_v[i] : zero));
    size_t nw = std::max(A.eta_w.size(), B.eta_w.size());
    for (size_t i = 0; i < nw; ++i)
        C.eta_w.push_back(bracket(i < A.eta_w.size() ? A.eta_w[i] : zero,
                                  i < B.eta_w.size() ? B.eta_w[i] : zero));
    return C;
}

VectorField d0_field(const JetContext &ctx, int k)
{
    VectorField D;
    D.ctx = ctx;
    D.xi = make_num(1);
    for (int i = 0; i < k; ++i)
        D.eta_v.push_back(make_sym(ctx.jet(i + 1)));
    D.eta_v.push_back(make_num(0)); // truncation: the top jet does not move
    return D;
}

CommutationCheck check_commutation(const LambdaPair &lp, int k)
{
    if (k < 1)
        throw MathError("check_commutation needs k >= 1");
    VectorField U = lambda_prolong(lp, k);
    VectorField D0 = d0_field(lp.ctx, k);

    CommutationCheck out;
    out.mu = -(total_derivative(lp.rho, lp.ctx) + lp.lambda * lp.rho);

    // test functions of jets up to order k-1; the identity is exact there
    Expr t = make_sym(lp.ctx.indep);
    Expr v0 = make_sym(lp.ctx.jet(0));
    std::vector<Expr> hs = {t, v0, t * v0, v0 * v0};
    for (int i = 1; i <= k - 1; ++i) {
        Expr vi = make_sym(lp.ctx.jet(i));
        hs.push_back(vi);
        hs.push_back(t * vi);
        hs.push_back(v0 * vi);
    }

    out.ok = true;
    for (const Expr &h : hs) {
        Expr lhs = U.apply(D0.apply(h)) - D0.apply(U.apply(h));
        Expr rhs = out.mu * D0.apply(h) + lp.lambda * U.apply(h);
        Expr r = lhs - rhs;
        if (!is_zero(r)) {
            out.ok = false;
            out.residuals.push_back(r);
        }
    }
    return out;
}

} // namespace ljet
