#pragma once

#include "ljet/equality.hpp"
#include "ljet/linalg.hpp"
#include "ljet/vector_field.hpp"

namespace ljet {

/// Invariant coordinate x(t, v), the chain zeta_0 .. zeta_{k-1} of derived
/// invariants (restricted to the equation), and the reduced equation over
/// fresh symbols.
struct InvariantChain {
    Expr x;
    std::vector<Expr> zetas;
    Expr reduced; // Delta_red, all terms moved left
    Symbol x_sym;
    std::vector<Symbol> zeta_syms;
};

/// apply(V, I) = 0, symbolically or numerically at random points.
bool verify_invariant(const VectorField &V, const Expr &I, double tol = 1e-9,
                      uint64_t seed = 7);

/// Bounded search for first-order invariants of X^{[lambda,1]}: Laurent
/// monomials t^a v^b v1^c with |a|,|b|,|c| <= degree_bound, solved as an exact
/// homogeneous linear system. Returns a basis of the solution space without
/// constants, lowest total degree first, leading coefficient one.
std::vector<Expr> find_invariant_ansatz(const LambdaPair &lp, int degree_bound);

/// zeta_i = D0bar(zeta_{i-1}) / D0bar(x) for i = 1..k-1, restricted to the
/// equation. Errors when D0bar(x) = 0.
std::vector<Expr> derived_invariants(const OdeProblem &ode, const Expr &x,
                                     const Expr &zeta0, int k);

/// Triangular elimination: solve each (unrestricted) derived-invariant
/// relation for its top jet, substitute into Delta, strip the common content
/// in the original variables and require the rest to be constant over them.
InvariantChain reduce(const OdeProblem &ode, const Expr &x, const Expr &zeta0);

/// First-order residual zeta_0(t, v, v1) - rhs(x(t, v)).
Expr auxiliary_ode(const Expr &zeta0, const Expr &rhs, const Symbol &x_sym,
                   const Expr &x_expr);

} // namespace ljet
