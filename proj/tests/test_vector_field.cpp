#include "support.hpp"

using namespace ljtest;

namespace {

VectorField point_field(const JetContext &c, const std::string &xi,
                        const std::string &eta0)
{
    return make_field(c, P(xi, c), {P(eta0, c)});
}

} // namespace

TEST_CASE("std_prolong: spec examples")
{
    JetContext c = ctx2();

    VectorField dv = std_prolong(point_field(c, "0", "1"), 2);
    CHECK(same(dv.eta_v[0], P("1", c)));
    CHECK(is_zero(dv.eta_v[1]));
    CHECK(is_zero(dv.eta_v[2]));

    VectorField tdv = std_prolong(point_field(c, "0", "t"), 1);
    CHECK(same(tdv.eta_v[1], P("1", c)));

    // covering field e^w (v d/dv - 2 d/dw) on the Example 4 covering
    JetContext cw = ctx2w();
    VectorField seed = make_field(cw, P("0", cw), {P("exp(w)*v", cw)},
                                  {P("-2*exp(w)", cw)});
    VectorField y = std_prolong(seed, 2);
    CHECK(same(y.eta_v[1], P("exp(w)*(v1 + w1*v)", cw)));
    CHECK(y.prolonged);
}

TEST_CASE("lambda_prolong: spec examples and the lambda = 0 degeneration")
{
    JetContext c = ctx2();

    LambdaPair zero{c, P("0", c), P("1", c), P("0", c)};
    VectorField a = lambda_prolong(zero, 2);
    VectorField b = std_prolong(point_field(c, "0", "1"), 2);
    for (int i = 0; i <= 2; ++i)
        CHECK(same(a.eta_v[static_cast<size_t>(i)], b.eta_v[static_cast<size_t>(i)]));

    LambdaPair ex2{c, P("1", c), P("v^2", c), P("-v", c)};
    CHECK(same(lambda_prolong(ex2, 1).eta_v[1], P("3*v*v1 - v^3", c)));

    LambdaPair ex4 = lp_ex4();
    CHECK(same(lambda_prolong(ex4, 1).eta_v[1], P("v1 + t/v", c)));

    // Example 5's first-order coefficient: D0(v) + lambda v = v1 + v^2 + t
    CHECK(same(lambda_prolong(lp_ex3(), 1).eta_v[1], P("v1 + v^2 + t", c)));
}

TEST_CASE("std_prolong advances both jet families with the covering derivative")
{
    JetContext cw = ctx2w();
    Expr ew = P("exp(w)", cw);
    VectorField seed = make_field(cw, ew * P("t", cw), {ew * P("v", cw)},
                                  {ew * P("v1", cw)});
    VectorField y = std_prolong(seed, 2);
    Expr dxi = total_derivative(seed.xi, cw);
    for (int i = 1; i <= 2; ++i) {
        CHECK(same(y.eta_v[static_cast<size_t>(i)],
                   total_derivative(y.eta_v[static_cast<size_t>(i - 1)], cw) -
                       dxi * make_sym(cw.jet(i))));
        CHECK(same(y.eta_w[static_cast<size_t>(i)],
                   total_derivative(y.eta_w[static_cast<size_t>(i - 1)], cw) -
                       dxi * make_sym(cw.nonlocal(i))));
    }
}

TEST_CASE("commutator: basic identities")
{
    JetContext c = ctx2();
    VectorField dt = make_field(c, P("1", c), {P("0", c)});
    VectorField dv = make_field(c, P("0", c), {P("1", c)});
    VectorField com = commutator(dt, dv);
    CHECK(is_zero(com.xi));
    CHECK(is_zero(com.eta_v[0]));

    VectorField vdv = make_field(c, P("0", c), {P("v", c), P("0", c)});
    VectorField v1dv1 = make_field(c, P("0", c), {P("0", c), P("v1", c)});
    VectorField com2 = commutator(vdv, v1dv1);
    CHECK(is_zero(com2.xi));
    for (const Expr &e : com2.eta_v)
        CHECK(is_zero(e));

    JetContext other = c;
    other.jet_base = "u";
    VectorField foreign = make_field(other, make_num(0), {make_num(1)});
    CHECK_THROWS_AS(commutator(dt, foreign), MathError);
}

TEST_CASE("commutation characterization: spec examples")
{
    JetContext c = ctx2();

    auto r1 = check_commutation(LambdaPair{c, P("0", c), P("1", c), P("0", c)}, 2);
    CHECK(r1.ok);
    CHECK(is_zero(r1.mu));

    auto r4 = check_commutation(lp_ex4(), 2);
    CHECK(r4.ok);
    CHECK(is_zero(r4.mu));

    auto r3 = check_commutation(LambdaPair{c, P("t", c), P("1", c), P("v", c)}, 1);
    CHECK(r3.ok);
    CHECK(same(r3.mu, P("-(1 + v*t)", c)));
}

TEST_CASE("Example 4: [U, D0] acts as lambda U on first-order functions")
{
    // rho = 0 makes mu vanish, so [U, D0](h) = lambda U(h) for h up to order 1
    JetContext c = ctx2();
    LambdaPair lp = lp_ex4();
    VectorField U = lambda_prolong(lp, 2);
    VectorField D0 = d0_field(c, 2);
    for (const char *h : {"t", "v", "v1", "t*v", "v*v1"}) {
        Expr hh = P(h, c);
        Expr lhs = U.apply(D0.apply(hh)) - D0.apply(U.apply(hh));
        CHECK(same(lhs, lp.lambda * U.apply(hh)));
    }
}

TEST_CASE("apply: spec examples")
{
    JetContext c = ctx2();
    VectorField dv = make_field(c, P("0", c), {P("1", c)});
    CHECK(same(dv.apply(P("v^2", c)), P("2*v", c)));

    VectorField x4 = lambda_prolong(lp_ex4(), 1);
    CHECK(is_zero(x4.apply(P("-v1/v - t/(2*v^2)", c))));

    // Example 1: X^{[lambda,1]}(lambda) is the source term of the
    // reconstruction equation
    LambdaPair l1 = lp_ex1();
    VectorField x1 = lambda_prolong(l1, 1);
    CHECK(same(x1.apply(l1.lambda), P("(p^2 + p)*g(t)*v^(p-1)", lp_ex1().ctx)));
}

TEST_CASE("property: lambda = 0 degenerates to the standard prolongation")
{
    Rng rng(41);
    JetContext c = ctx2();
    std::vector<Symbol> syms{c.indep, c.jet(0)};
    for (int i = 0; i < 200; ++i) {
        Expr rho = random_poly(rng, syms, 2, 3);
        Expr psi = random_poly(rng, syms, 2, 3);
        int k = static_cast<int>(rng.pick(1, 3));
        VectorField a = lambda_prolong(LambdaPair{c, rho, psi, make_num(0)}, k);
        VectorField b = std_prolong(make_field(c, rho, {psi}), k);
        for (int j = 0; j <= k; ++j)
            CHECK(same(a.eta_v[static_cast<size_t>(j)],
                       b.eta_v[static_cast<size_t>(j)]));
    }
}

TEST_CASE("property: commutation identity holds with mu = -(D0(rho) + lambda rho)")
{
    Rng rng(43);
    JetContext c = ctx2();
    std::vector<Symbol> syms{c.indep, c.jet(0)};
    std::vector<Symbol> lsyms{c.indep, c.jet(0), c.jet(1)};
    for (int i = 0; i < 200; ++i) {
        LambdaPair lp{c, random_poly(rng, syms, 2, 2), random_poly(rng, syms, 2, 2),
                      random_poly(rng, lsyms, 2, 2)};
        int k = static_cast<int>(rng.pick(1, 3));
        auto r = check_commutation(lp, k);
        CHECK(r.ok);
    }
}

TEST_CASE("property: Jacobi identity on random polynomial fields")
{
    Rng rng(47);
    JetContext c = ctx2();
    std::vector<Symbol> syms{c.indep, c.jet(0), c.jet(1), c.jet(2)};
    auto random_field = [&]() {
        VectorField f;
        f.ctx = c;
        f.xi = random_poly(rng, syms, 2, 2);
        for (int i = 0; i <= 2; ++i)
            f.eta_v.push_back(random_poly(rng, syms, 2, 2));
        return f;
    };
    for (int i = 0; i < 25; ++i) {
        VectorField A = random_field(), B = random_field(), C = random_field();
        VectorField j1 = commutator(A, commutator(B, C));
        VectorField j2 = commutator(B, commutator(C, A));
        VectorField j3 = commutator(C, commutator(A, B));
        CHECK(is_zero(j1.xi + j2.xi + j3.xi));
        for (size_t s = 0; s < j1.eta_v.size(); ++s) {
            Expr total = j1.eta_v[s];
            if (s < j2.eta_v.size())
                total = total + j2.eta_v[s];
            if (s < j3.eta_v.size())
                total = total + j3.eta_v[s];
            CHECK(is_zero(total));
        }
    }
}

TEST_CASE("property: prolonged coefficients reconstruct from eta_0")
{
    Rng rng(53);
    JetContext c = ctx2();
    std::vector<Symbol> syms{c.indep, c.jet(0)};
    for (int i = 0; i < 100; ++i) {
        Expr xi = random_poly(rng, syms, 2, 2);
        Expr eta0 = random_poly(rng, syms, 2, 2);
        VectorField y = std_prolong(make_field(c, xi, {eta0}), 3);
        REQUIRE(y.prolonged);
        Expr dxi = total_derivative(xi, c);
        for (int j = 1; j <= 3; ++j) {
            Expr expect = total_derivative(y.eta_v[static_cast<size_t>(j - 1)], c) -
                          dxi * make_sym(c.jet(j));
            CHECK(same(y.eta_v[static_cast<size_t>(j)], expect));
        }
    }
}
