#pragma once

#include <map>

#include "ljet/expr.hpp"
#include "ljet/symbol.hpp"

namespace ljet {

/// k-th order scalar ODE in normal form v_k = f(t, v, ..., v_{k-1}); may also
/// carry a general residual Delta(t, v, ..., v_k) whose zero set agrees with
/// the normal form.
struct OdeProblem {
    JetContext ctx;
    int k = 1;
    Expr rhs;                                   // f
    Expr delta;                                 // optional (nullptr)
    std::map<std::string, Expr> instantiations; // uninterpreted function bodies over t

    /// Delta if present, else v_k - f.
    Expr residual() const;
};

/// One-dimensional covering 𝒴' = {v_k = f, w1 = H}; H depends on
/// (t, v, ..., v_{k-1}, w) at most.
struct CoveringSystem {
    OdeProblem base;
    Expr h;
};

/// Validates the normal form (and Delta consistency when both are given).
OdeProblem make_ode(JetContext ctx, int k, Expr rhs, Expr delta = nullptr);

/// D(e) = ∂_t e + Σ v_{i+1} ∂_{v_i} e + Σ w_{i+1} ∂_{w_i} e. Higher-order
/// jets are created on demand.
Expr total_derivative(const Expr &e, const JetContext &ctx);

/// Substitutes every v_{k+s} by the restricted s-th derivative of f and (when
/// a covering is given) every w_{1+s} by the restricted s-th derivative of H.
/// The result depends only on (t, v, ..., v_{k-1}, w).
Expr restrict_to_manifold(const Expr &e, const OdeProblem &ode,
                          const CoveringSystem *cover = nullptr);

/// restrict_to_manifold(total_derivative(e)) in one step.
Expr restricted_total_derivative(const Expr &e, const OdeProblem &ode,
                                 const CoveringSystem *cover = nullptr);

} // namespace ljet
