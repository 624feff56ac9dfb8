#include "ljet/jet.hpp"

namespace ljet {

Expr OdeProblem::residual() const
{
    if (delta)
        return delta;
    return make_sym(ctx.jet(k)) - rhs;
}

Expr total_derivative(const Expr &e, const JetContext &ctx)
{
    std::vector<Expr> parts{diff(e, ctx.indep)};
    for (const Symbol &s : free_symbols(e)) {
        if (s.kind != SymKind::Jet && s.kind != SymKind::NonlocalJet)
            continue;
        Expr d = diff(e, s);
        if (!is_zero(d))
            parts.push_back(make_sym(s.next()) * d);
    }
    return make_add(std::move(parts));
}

namespace {

// Lazily built tables of restricted derivatives of f (and H), substituted
// from the highest order downward.
class Restrictor {
  public:
    Restrictor(const OdeProblem &ode, const CoveringSystem *cover)
        : ode_(ode), cover_(cover)
    {
    }

    Expr run(const Expr &e)
    {
        Expr cur = e;
        for (;;) {
            Bindings b;
            for (const Symbol &s : free_symbols(cur)) {
                if (s.kind == SymKind::Jet && s.order >= ode_.k)
                    b[s] = jet_value(s.order - ode_.k);
                else if (cover_ && s.kind == SymKind::NonlocalJet && s.order >= 1)
                    b[s] = nonlocal_value(s.order - 1);
            }
            if (b.empty())
                return cur;
            cur = substitute(cur, b);
        }
    }

  private:
    const OdeProblem &ode_;
    const CoveringSystem *cover_;
    std::vector<Expr> vtab_; // vtab_[s] = restricted v_{k+s}
    std::vector<Expr> wtab_; // wtab_[s] = restricted w_{1+s}

    Expr jet_value(int s)
    {
        if (vtab_.empty())
            vtab_.push_back(run(ode_.rhs));
        while (static_cast<int>(vtab_.size()) <= s)
            vtab_.push_back(run(total_derivative(vtab_.back(), ode_.ctx)));
        return vtab_[s];
    }

    Expr nonlocal_value(int s)
    {
        if (wtab_.empty())
            wtab_.push_back(run(cover_->h));
        while (static_cast<int>(wtab_.size()) <= s)
            wtab_.push_back(run(total_derivative(wtab_.back(), ode_.ctx)));
        return wtab_[s];
    }
};

} // namespace

Expr restrict_to_manifold(const Expr &e, const OdeProblem &ode, const CoveringSystem *cover)
{
    if (!ode.rhs)
        throw MathError("restriction needs the ODE in normal form");
    if (max_order(ode.rhs, SymKind::Jet, ode.ctx.jet_base) >= ode.k)
        throw MathError("malformed ODE: the right-hand side contains its own top jet");
    if (cover && max_order(cover->h, SymKind::NonlocalJet, ode.ctx.nonlocal_base) >= 1)
        throw MathError("malformed covering: H may depend on w but not its derivatives");
    return Restrictor(ode, cover).run(e);
}

Expr restricted_total_derivative(const Expr &e, const OdeProblem &ode,
                                 const CoveringSystem *cover)
{
    return restrict_to_manifold(total_derivative(e, ode.ctx), ode, cover);
}

OdeProblem make_ode(JetContext ctx, int k, Expr rhs, Expr delta)
{
    if (k < 1)
        throw MathError("ODE order must be at least 1");
    if (!rhs && !delta)
        throw MathError("an ODE needs a right-hand side or a residual");
    OdeProblem ode;
    ode.ctx = std::move(ctx);
    ode.ctx.order = k;
    ode.k = k;
    ode.rhs = std::move(rhs);
    ode.delta = std::move(delta);
    if (ode.rhs && max_order(ode.rhs, SymKind::Jet, ode.ctx.jet_base) >= k)
        throw MathError("right-hand side must not contain jets of order >= " +
                        std::to_string(k));
    if (ode.rhs && ode.delta) {
        Bindings b;
        b[ode.ctx.jet(k)] = ode.rhs;
        Expr r = substitute(ode.delta, b);
        if (!is_zero(r))
            throw MathError("Delta does not vanish on v_k = f; residual " + to_string(r));
    }
    return ode;
}

} // namespace ljet
