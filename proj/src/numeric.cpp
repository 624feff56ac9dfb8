#include "ljet/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace ljet {

double eval(const Expr &e, const Point &point)
{
    switch (e->kind) {
    case Kind::Num:
        return e->num.to_double();
    case Kind::Sym: {
        auto it = point.find(e->sym);
        if (it == point.end())
            throw EvalError("unbound symbol " + e->sym.name());
        return it->second;
    }
    case Kind::Add: {
        double s = 0;
        for (const Expr &k : e->kids)
            s += eval(k, point);
        return s;
    }
    case Kind::Mul: {
        double p = 1;
        for (const Expr &k : e->kids)
            p *= eval(k, point);
        return p;
    }
    case Kind::Pow: {
        double b = eval(e->kids[0], point);
        double x = eval(e->kids[1], point);
        double xr = std::round(x);
        if (std::abs(x - xr) < 1e-9 && std::abs(xr) < 1e6) {
            long long n = static_cast<long long>(xr);
            if (b == 0.0 && n < 0)
                throw EvalError("division by zero");
            double r = 1.0, base = n < 0 ? 1.0 / b : b;
            for (long long i = std::llabs(n); i > 0; --i)
                r *= base;
            return r;
        }
        if (b <= 0.0)
            throw EvalError("fractional power of a non-positive base");
        return std::pow(b, x);
    }
    case Kind::Call: {
        if (e->fn == Fn::Uninterp)
            throw EvalError("uninterpreted function " + e->fname +
                            " has no instantiation");
        double u = eval(e->kids[0], point);
        switch (e->fn) {
        case Fn::Exp:
            return std::exp(u);
        case Fn::Ln:
            if (u <= 0.0)
                throw EvalError("ln of a non-positive value");
            return std::log(u);
        case Fn::Sin:
            return std::sin(u);
        case Fn::Cos:
            return std::cos(u);
        case Fn::Tan:
            if (std::abs(std::cos(u)) < 1e-12)
                throw EvalError("tan at a pole");
            return std::tan(u);
        default:
            break;
        }
    }
    }
    throw EvalError("eval: unreachable node kind");
}

Expr instantiate_functions(const Expr &e, const std::map<std::string, Expr> &inst,
                           const Symbol &t)
{
    switch (e->kind) {
    case Kind::Num:
    case Kind::Sym:
        return e;
    case Kind::Add:
    case Kind::Mul: {
        std::vector<Expr> kids;
        kids.reserve(e->kids.size());
        for (const Expr &k : e->kids)
            kids.push_back(instantiate_functions(k, inst, t));
        return e->kind == Kind::Add ? make_add(std::move(kids)) : make_mul(std::move(kids));
    }
    case Kind::Pow:
        return make_pow(instantiate_functions(e->kids[0], inst, t),
                        instantiate_functions(e->kids[1], inst, t));
    case Kind::Call: {
        if (e->fn == Fn::Uninterp) {
            auto it = inst.find(e->fname);
            if (it == inst.end())
                return e;
            Expr body = it->second;
            for (int i = 0; i < e->forder; ++i)
                body = diff(body, t);
            return body;
        }
        return make_call(e->fn, instantiate_functions(e->kids[0], inst, t));
    }
    }
    throw MathError("instantiate_functions: unreachable node kind");
}

uint64_t Rng::next()
{
    // splitmix64
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi)
{
    double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

long long Rng::pick(long long lo, long long hi)
{
    return lo + static_cast<long long>(next() % static_cast<uint64_t>(hi - lo + 1));
}

Range default_range(const Symbol &s)
{
    switch (s.kind) {
    case SymKind::Independent:
        return {-1.0, 1.0, false};
    case SymKind::Jet:
        if (s.order == 0)
            return {0.5, 2.0, true};
        return {-2.0, 2.0, false};
    case SymKind::NonlocalJet:
        return {-1.0, 1.0, false};
    default:
        return {0.5, 2.0, false};
    }
}

std::vector<Expr> collect_denominators(const Expr &e)
{
    std::vector<Expr> out;
    auto push = [&out](const Expr &d) {
        for (const Expr &x : out)
            if (same(x, d))
                return;
        out.push_back(d);
    };
    struct Walker {
        std::function<void(const Expr &)> fn;
    } w;
    w.fn = [&](const Expr &x) {
        if (x->kind == Kind::Pow) {
            const Expr &ex = x->kids[1];
            bool neg = ex->kind == Kind::Num && ex->num.sign() < 0;
            bool frac = ex->kind == Kind::Num && !ex->num.is_integer();
            if ((neg || frac) && x->kids[0]->kind != Kind::Num)
                push(x->kids[0]);
        }
        if (x->kind == Kind::Call && x->fn == Fn::Ln)
            push(x->kids[0]);
        for (const Expr &k : x->kids)
            w.fn(k);
    };
    w.fn(e);
    return out;
}

std::vector<Point> sample_manifold(const OdeProblem &ode, const CoveringSystem *cover,
                                   const SamplePlan &plan)
{
    if (plan.count < 1)
        throw MathError("sample plan needs count >= 1");
    if (!ode.rhs)
        throw MathError("sampling needs the ODE in normal form");
    const JetContext &ctx = ode.ctx;

    Expr f = instantiate_functions(ode.rhs, ode.instantiations, ctx.indep);
    if (!uninterp_names(f).empty())
        throw MathError("sampling needs instantiations for every uninterpreted function");

    // free coordinates drawn per point
    std::vector<Symbol> coords;
    coords.push_back(ctx.indep);
    for (int i = 0; i < ode.k; ++i)
        coords.push_back(ctx.jet(i));
    if (cover)
        coords.push_back(ctx.nonlocal(0));
    for (const Symbol &s : free_symbols(f))
        if (s.kind == SymKind::Parameter || s.kind == SymKind::IntegrationConstant)
            coords.push_back(s);
    if (cover)
        for (const Symbol &s : free_symbols(cover->h))
            if (s.kind == SymKind::Parameter || s.kind == SymKind::IntegrationConstant) {
                bool seen = false;
                for (const Symbol &c : coords)
                    if (c == s)
                        seen = true;
                if (!seen)
                    coords.push_back(s);
            }

    // derived jets: v_k .. v_{k+extra}, w_1 .. w_{1+extra}, restricted
    std::vector<std::pair<Symbol, Expr>> derived;
    Expr cur = f;
    derived.emplace_back(ctx.jet(ode.k), cur);
    for (int s = 1; s <= plan.fill_extra; ++s) {
        cur = restrict_to_manifold(total_derivative(cur, ctx), ode, cover);
        cur = instantiate_functions(cur, ode.instantiations, ctx.indep);
        derived.emplace_back(ctx.jet(ode.k + s), cur);
    }
    if (cover) {
        Expr h = instantiate_functions(cover->h, ode.instantiations, ctx.indep);
        Expr curw = restrict_to_manifold(h, ode, cover);
        derived.emplace_back(ctx.nonlocal(1), curw);
        for (int s = 1; s <= plan.fill_extra; ++s) {
            curw = restrict_to_manifold(total_derivative(curw, ctx), ode, cover);
            curw = instantiate_functions(curw, ode.instantiations, ctx.indep);
            derived.emplace_back(ctx.nonlocal(1 + s), curw);
        }
    }

    std::vector<Expr> excluded = plan.excluded;
    for (const Expr &d : collect_denominators(f))
        excluded.push_back(d);
    if (cover)
        for (const Expr &d : collect_denominators(cover->h))
            excluded.push_back(d);
    for (auto &ex : excluded)
        ex = instantiate_functions(ex, ode.instantiations, ctx.indep);

    Rng rng(plan.seed);
    std::vector<Point> points;
    points.reserve(static_cast<size_t>(plan.count));
    long long rejected = 0;
    while (static_cast<int>(points.size()) < plan.count) {
        if (rejected > 100ll * plan.count + 1000)
            throw SamplingExhausted("manifold sampling rejection rate above 99%");
        Point p;
        for (const Symbol &s : coords) {
            auto it = plan.ranges.find(s);
            Range r = it != plan.ranges.end() ? it->second : default_range(s);
            double x = rng.uniform(r.lo, r.hi);
            if (r.random_sign && (rng.next() & 1ull))
                x = -x;
            p[s] = x;
        }
        bool ok = true;
        try {
            for (const Expr &ex : excluded)
                if (std::abs(eval(ex, p)) <= plan.exclusion_floor) {
                    ok = false;
                    break;
                }
            if (ok)
                for (auto &[s, expr] : derived)
                    p[s] = eval(expr, p);
        } catch (const EvalError &) {
            ok = false;
        }
        if (!ok) {
            ++rejected;
            continue;
        }
        points.push_back(std::move(p));
    }
    return points;
}

namespace {

// |value| and the magnitude scale of the largest top-level term
std::pair<double, double> eval_scaled(const Expr &e, const Point &p)
{
    if (e->kind != Kind::Add) {
        double v = eval(e, p);
        return {v, std::max(1.0, std::abs(v))};
    }
    double sum = 0, scale = 1.0;
    for (const Expr &k : e->kids) {
        double v = eval(k, p);
        sum += v;
        scale = std::max(scale, std::abs(v));
    }
    return {sum, scale};
}

ResidualReport run_residual(const Expr &e, const std::vector<Point> &points, double tol,
                            bool parallel)
{
    const int n = static_cast<int>(points.size());
    std::vector<double> rel(n, 0.0), abs(n, 0.0);

#ifndef _OPENMP
    (void)parallel; // the serial build has one code path
#endif
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) {
        auto [v, scale] = eval_scaled(e, points[i]);
        abs[i] = std::abs(v);
        rel[i] = std::abs(v) <= 1e-12 ? 0.0 : std::abs(v) / scale;
    }

    ResidualReport rep;
    rep.points_tested = n;
    rep.tolerance = tol;
    for (int i = 0; i < n; ++i) {
        rep.max_abs = std::max(rep.max_abs, abs[i]);
        rep.max_rel = std::max(rep.max_rel, rel[i]);
        if (rel[i] > tol)
            rep.failures.push_back({i, rel[i]});
    }
    return rep;
}

} // namespace

ResidualReport verify_residual(const Expr &e, const std::vector<Point> &points, double tol)
{
    return run_residual(e, points, tol, true);
}

ResidualReport verify_residual_serial(const Expr &e, const std::vector<Point> &points,
                                      double tol)
{
    return run_residual(e, points, tol, false);
}

std::vector<TrajectoryPoint> integrate_ode(const OdeProblem &ode, const Point &initial,
                                           double t0, double t1, double step)
{
    if (!(step > 0))
        throw MathError("integration step must be positive");
    const JetContext &ctx = ode.ctx;
    Expr f = instantiate_functions(ode.rhs, ode.instantiations, ctx.indep);

    const int k = ode.k;
    std::vector<double> y(static_cast<size_t>(k));
    Point base = initial;
    for (int i = 0; i < k; ++i) {
        auto it = initial.find(ctx.jet(i));
        if (it == initial.end())
            throw MathError("initial point must bind " + ctx.jet(i).name());
        y[static_cast<size_t>(i)] = it->second;
    }

    auto deriv = [&](double t, const std::vector<double> &state) {
        Point p = base;
        p[ctx.indep] = t;
        for (int i = 0; i < k; ++i)
            p[ctx.jet(i)] = state[static_cast<size_t>(i)];
        std::vector<double> d(static_cast<size_t>(k));
        for (int i = 0; i + 1 < k; ++i)
            d[static_cast<size_t>(i)] = state[static_cast<size_t>(i) + 1];
        d[static_cast<size_t>(k - 1)] = eval(f, p);
        return d;
    };

    long long nsteps = std::llround((t1 - t0) / step);
    if (nsteps < 1)
        nsteps = 1;
    double h = (t1 - t0) / static_cast<double>(nsteps);

    std::vector<TrajectoryPoint> out;
    out.reserve(static_cast<size_t>(nsteps) + 1);
    out.push_back({t0, y});
    double t = t0;
    for (long long s = 0; s < nsteps; ++s) {
        auto k1 = deriv(t, y);
        std::vector<double> tmp(y.size());
        for (size_t i = 0; i < y.size(); ++i)
            tmp[i] = y[i] + 0.5 * h * k1[i];
        auto k2 = deriv(t + 0.5 * h, tmp);
        for (size_t i = 0; i < y.size(); ++i)
            tmp[i] = y[i] + 0.5 * h * k2[i];
        auto k3 = deriv(t + 0.5 * h, tmp);
        for (size_t i = 0; i < y.size(); ++i)
            tmp[i] = y[i] + h * k3[i];
        auto k4 = deriv(t + h, tmp);
        for (size_t i = 0; i < y.size(); ++i)
            y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        t = t0 + h * static_cast<double>(s + 1);
        out.push_back({t, y});
    }
    return out;
}

ResidualReport verify_solution(const OdeProblem &ode, const Expr &candidate,
                               const std::vector<double> &t_points, double tol)
{
    const JetContext &ctx = ode.ctx;
    Expr c = instantiate_functions(candidate, ode.instantiations, ctx.indep);

    Bindings b;
    Expr der = c;
    b[ctx.jet(0)] = der;
    for (int i = 1; i <= ode.k; ++i) {
        der = diff(der, ctx.indep);
        b[ctx.jet(i)] = der;
    }
    Expr residual = substitute(instantiate_functions(ode.residual(), ode.instantiations,
                                                     ctx.indep),
                               b);

    // domain guards of the candidate itself
    std::vector<Expr> guards = collect_denominators(c);

    ResidualReport rep;
    rep.tolerance = tol;
    for (double t : t_points) {
        Point p;
        p[ctx.indep] = t;
        try {
            bool in_domain = true;
            for (const Expr &g : guards)
                if (std::abs(eval(g, p)) < 0.1) {
                    in_domain = false;
                    break;
                }
            if (!in_domain)
                continue;
            auto [v, scale] = eval_scaled(residual, p);
            double rel = std::abs(v) <= 1e-12 ? 0.0 : std::abs(v) / scale;
            int idx = rep.points_tested;
            rep.max_abs = std::max(rep.max_abs, std::abs(v));
            rep.max_rel = std::max(rep.max_rel, rel);
            if (rel > tol)
                rep.failures.push_back({idx, rel});
            ++rep.points_tested;
        } catch (const EvalError &) {
            continue; // outside the candidate's domain
        }
    }
    if (rep.points_tested == 0)
        throw EvalError("no usable t-points: the candidate is out of domain or has "
                        "unbound symbols");
    return rep;
}

std::vector<double> grid(double lo, double hi, int n)
{
    std::vector<double> out;
    out.reserve(static_cast<size_t>(n));
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < n; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
}

} // namespace ljet
