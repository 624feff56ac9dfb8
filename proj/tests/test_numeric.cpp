#include "support.hpp"

#include <cmath>

using namespace ljtest;

TEST_CASE("eval: spec examples")
{
    JetContext c = ctx2();
    Point p1{{c.indep, 1.0}, {c.jet(0), 2.0}};
    CHECK(eval(P("t/v^2", c), p1) == doctest::Approx(0.25));

    Point p2{{c.indep, 0.0}, {c.jet(0), 1.0}};
    CHECK(eval(ode_ex4().rhs, p2) == doctest::Approx(-1.5));

    Point p3{{c.jet(1), -3.0}};
    CHECK(eval(P("v1", c), p3) == doctest::Approx(-3.0));

    CHECK_THROWS_AS(eval(P("v", c), Point{}), EvalError);
    CHECK_THROWS_AS(eval(P("ln(v)", c), Point{{c.jet(0), -1.0}}), EvalError);
}

TEST_CASE("instantiate_functions differentiates the body")
{
    JetContext c = ctx_ex1();
    Expr e = P("g''(t) + g'(t)*v", c);
    std::map<std::string, Expr> inst{{"g", P("t", c) * P("t", c)}};
    Expr r = instantiate_functions(e, inst, c.indep);
    CHECK(same(r, P("2 + 2*t*v", c)));
}

TEST_CASE("sample_manifold: points satisfy the equations to 1e-12")
{
    OdeProblem ode = ode_ex4();
    SamplePlan plan;
    plan.seed = 42;
    plan.count = 100;
    auto points = sample_manifold(ode, nullptr, plan);
    REQUIRE(points.size() == 100);
    for (const Point &p : points) {
        CHECK(std::abs(p.at(ode.ctx.jet(2)) - eval(ode.rhs, p)) < 1e-12);
        // v3 = D0bar(f) must hold as well
        Expr df = restricted_total_derivative(ode.rhs, ode);
        CHECK(std::abs(p.at(ode.ctx.jet(3)) - eval(df, p)) < 1e-12);
        CHECK(std::abs(p.at(ode.ctx.jet(0))) > 1e-3);
    }
}

TEST_CASE("sample_manifold: covering samples satisfy w1 = lambda")
{
    OdeProblem ode = ode_ex4();
    CoveringSystem cover = build_covering(ode, P("t/v^2", ode.ctx));
    SamplePlan plan;
    plan.seed = 7;
    plan.count = 50;
    auto points = sample_manifold(ode, &cover, plan);
    for (const Point &p : points)
        CHECK(std::abs(p.at(cover.base.ctx.nonlocal(1)) - eval(cover.h, p)) < 1e-12);
}

TEST_CASE("sample_manifold: first order and determinism")
{
    JetContext c;
    c.order = 1;
    OdeProblem ode = make_ode(c, 1, P("v", c));
    SamplePlan plan;
    plan.count = 1;
    auto pts = sample_manifold(ode, nullptr, plan);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].at(c.jet(1)) == pts[0].at(c.jet(0)));

    plan.count = 64;
    auto a = sample_manifold(ode, nullptr, plan);
    auto b = sample_manifold(ode, nullptr, plan);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        auto ita = a[i].begin();
        auto itb = b[i].begin();
        for (; ita != a[i].end(); ++ita, ++itb)
            CHECK(ita->second == itb->second); // bit-for-bit
    }
}

TEST_CASE("sample_manifold: exhaustion is reported")
{
    OdeProblem ode = ode_ex4();
    SamplePlan plan;
    plan.count = 10;
    plan.excluded = {P("v/1000000", ode.ctx)}; // always below the floor
    CHECK_THROWS_AS(sample_manifold(ode, nullptr, plan), SamplingExhausted);
}

TEST_CASE("verify_residual: zero, nonzero and the Example 2 tangency")
{
    OdeProblem ode = ode_ex4();
    SamplePlan plan;
    plan.seed = 3;
    plan.count = 50;
    auto points = sample_manifold(ode, nullptr, plan);

    auto zero = verify_residual(make_num(0), points, 1e-9);
    CHECK(zero.max_abs == 0.0);
    CHECK(zero.ok());

    auto bad = verify_residual(P("v1", ode.ctx), points, 1e-9);
    CHECK(!bad.failures.empty());

    // Example 2: evaluate the unrestricted tangency residual of the
    // reconstructed Y at covering manifold points

    OdeProblem ode2 = ode_ex2();
    NonlocalSymmetry sym = reconstruct_nonlocal(ode2, lp_ex2(), make_num(0));
    CoveringSystem cover = build_covering(ode2, lp_ex2().lambda);
    Expr residual = sym.y.apply(ode2.residual());
    SamplePlan plan2;
    plan2.seed = 9;
    plan2.count = 100;
    plan2.fill_extra = 3;
    auto cpoints = sample_manifold(ode2, &cover, plan2);
    auto rep = verify_residual(residual, cpoints, 1e-9);
    CHECK(rep.ok());
    CHECK(rep.max_rel < 1e-9);
}

TEST_CASE("verify_residual: serial and parallel reports are identical")
{
    OdeProblem ode = ode_ex4();
    SamplePlan plan;
    plan.seed = 4;
    plan.count = 400;
    auto points = sample_manifold(ode, nullptr, plan);
    Expr e = restricted_total_derivative(P("-v1/v - t/(2*v^2)", ode.ctx), ode);

    auto a = verify_residual(e, points, 1e-12);
    auto b = verify_residual_serial(e, points, 1e-12);
    CHECK(a.max_abs == b.max_abs);
    CHECK(a.max_rel == b.max_rel);
    CHECK(a.points_tested == b.points_tested);
    REQUIRE(a.failures.size() == b.failures.size());
    for (size_t i = 0; i < a.failures.size(); ++i) {
        CHECK(a.failures[i].point_index == b.failures[i].point_index);
        CHECK(a.failures[i].value == b.failures[i].value);
    }
}

TEST_CASE("integrate_ode: exponential and sine oracles")
{
    JetContext c1;
    c1.order = 1;
    OdeProblem expgrow = make_ode(c1, 1, P("v", c1));
    Point init{{c1.jet(0), 1.0}};
    auto traj = integrate_ode(expgrow, init, 0.0, 1.0, 1e-3);
    CHECK(std::abs(traj.back().y[0] - std::exp(1.0)) < 1e-9);

    JetContext c2 = ctx2();
    OdeProblem osc = make_ode(c2, 2, P("-v", c2));
    Point init2{{c2.jet(0), 0.0}, {c2.jet(1), 1.0}};
    auto traj2 = integrate_ode(osc, init2, 0.0, 3.0, 1e-3);
    for (const auto &tp : traj2)
        CHECK(std::abs(tp.y[0] - std::sin(tp.t)) < 1e-8);
}

TEST_CASE("integrate_ode: fourth-order convergence on v' = v")
{
    JetContext c;
    c.order = 1;
    OdeProblem ode = make_ode(c, 1, P("v", c));
    Point init{{c.jet(0), 1.0}};
    auto err = [&](double h) {
        auto traj = integrate_ode(ode, init, 0.0, 1.0, h);
        return std::abs(traj.back().y[0] - std::exp(1.0));
    };
    double e1 = err(0.1), e2 = err(0.05), e3 = err(0.025), e4 = err(0.0125);
    CHECK(e1 / e2 > 8.0);
    CHECK(e2 / e3 > 8.0);
    CHECK(e3 / e4 > 8.0);
}

TEST_CASE("Example 4 flow: zeta0 follows tan(t + c1) along trajectories")
{
    OdeProblem ode = ode_ex4();
    const JetContext &c = ode.ctx;
    Expr zeta0 = P("-v1/v - t/(2*v^2)", c);

    SamplePlan plan;
    plan.seed = 2026;
    plan.count = 5;
    plan.ranges[c.jet(0)] = {1.0, 2.0, false};
    plan.ranges[c.jet(1)] = {-0.5, 0.5, false};
    plan.ranges[c.indep] = {-0.5, 0.5, false};
    auto inits = sample_manifold(ode, nullptr, plan);

    for (const Point &init : inits) {
        double t0 = init.at(c.indep);
        double z0 = eval(zeta0, init);
        double c1 = std::atan(z0) - t0;
        auto traj = integrate_ode(ode, init, t0, t0 + 0.3, 1e-3);
        for (const auto &tp : traj) {
            Point p{{c.indep, tp.t}, {c.jet(0), tp.y[0]}, {c.jet(1), tp.y[1]}};
            CHECK(std::abs(eval(zeta0, p) - std::tan(tp.t + c1)) < 1e-6);
        }
    }
}

TEST_CASE("cross-route: restricted and unrestricted residuals agree on samples")
{
    // manifold points satisfy v_{k+s} = D^s f, so evaluating an expression
    // before and after symbolic restriction must give the same numbers
    Rng rng(83);
    JetContext c = ctx2();
    std::vector<Symbol> psyms{c.indep, c.jet(0)};
    std::vector<Symbol> lsyms{c.indep, c.jet(0), c.jet(1)};
    int done = 0;
    for (int it = 0; it < 40 && done < 15; ++it) {
        Expr f = random_poly(rng, lsyms, 2, 3);
        if (is_zero(f))
            continue;
        OdeProblem ode = make_ode(c, 2, f);
        LambdaPair lp{c, random_poly(rng, psyms, 2, 2), random_poly(rng, psyms, 2, 2),
                      random_poly(rng, lsyms, 2, 2)};
        VectorField X = lambda_prolong(lp, 2);
        Expr raw = X.apply(ode.residual());
        Expr restricted = restrict_to_manifold(raw, ode);

        SamplePlan plan;
        plan.seed = 500 + static_cast<uint64_t>(it);
        plan.count = 40;
        plan.fill_extra = 3;
        auto points = sample_manifold(ode, nullptr, plan);
        for (const Point &p : points) {
            double a = eval(raw, p);
            double b = eval(restricted, p);
            CHECK(std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}));
        }
        ++done;
    }
    CHECK(done == 15);
}

TEST_CASE("cross-route: D0bar matches finite differences along trajectories")
{
    // d/dt g(t, v(t)) along an integrated solution equals the restricted
    // total derivative of g evaluated on the trajectory
    Rng rng(89);
    JetContext c;
    c.order = 1;
    std::vector<Symbol> syms{c.indep, c.jet(0)};
    for (int it = 0; it < 10; ++it) {
        Expr f = random_poly(rng, syms, 2, 2);
        OdeProblem ode = make_ode(c, 1, f);
        Expr g = random_poly(rng, syms, 2, 3);
        Expr dg = restricted_total_derivative(g, ode);

        Point init{{c.jet(0), rng.uniform(0.5, 1.0)}};
        init[c.indep] = 0.0;
        const double h = 1e-4;
        auto traj = integrate_ode(ode, init, 0.0, 0.2, h);
        for (size_t i = 1; i + 1 < traj.size(); i += 50) {
            auto at = [&](size_t j) {
                Point p{{c.indep, traj[j].t}, {c.jet(0), traj[j].y[0]}};
                return p;
            };
            double fd = (eval(g, at(i + 1)) - eval(g, at(i - 1))) / (2 * h);
            double sym_val = eval(dg, at(i));
            CHECK(std::abs(fd - sym_val) <=
                  1e-5 * std::max({1.0, std::abs(fd), std::abs(sym_val)}));
        }
    }
}

TEST_CASE("verify_solution: the Example 4 closed form and simple candidates")
{
    OdeProblem ode = ode_ex4();
    Expr candidate = P("cos(t)*(-ln(cos(t)) - t*tan(t) + 1)^(1/2)", ode.ctx);
    auto rep = verify_solution(ode, candidate, grid(-0.5, 0.5, 50), 1e-8);
    CHECK(rep.points_tested == 50);
    CHECK(rep.max_rel < 1e-8);
    CHECK(rep.ok());

    JetContext c1;
    c1.order = 1;
    OdeProblem lin = make_ode(c1, 1, P("v", c1));
    auto good = verify_solution(lin, P("exp(t)", c1), grid(0.0, 1.0, 20), 1e-9);
    CHECK(good.ok());
    auto bad = verify_solution(lin, P("t", c1), grid(0.5, 1.0, 20), 1e-9);
    CHECK(!bad.failures.empty());
}
