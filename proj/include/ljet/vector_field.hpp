#pragma once

#include "ljet/jet.hpp"

namespace ljet {

/// Vector field xi ∂_t + Σ eta_v[i] ∂_{v_i} + Σ eta_w[i] ∂_{w_i} on a finite
/// jet context. Missing components act as zero.
struct VectorField {
    JetContext ctx;
    Expr xi;
    std::vector<Expr> eta_v;
    std::vector<Expr> eta_w;
    bool prolonged = false;

    int order() const { return static_cast<int>(eta_v.size()) - 1; }

    /// Directional derivative: xi ∂_t e + Σ eta_v[i] ∂_{v_i} e + Σ eta_w[i] ∂_{w_i} e.
    Expr apply(const Expr &e) const;
};

/// A point field rho ∂_t + psi ∂_v together with the deformation function
/// lambda(t, v, v1).
struct LambdaPair {
    JetContext ctx;
    Expr rho;
    Expr psi;
    Expr lambda;
};

VectorField make_field(JetContext ctx, Expr xi, std::vector<Expr> eta_v,
                       std::vector<Expr> eta_w = {});

/// Contact prolongation through order k: eta_i = D(eta_{i-1}) - D(xi) * u_i on
/// every jet family present (D is the covering total derivative when a
/// nonlocal component exists).
VectorField std_prolong(const VectorField &X, int k);

/// The lambda-prolongation X^{[lambda,k]}:
///   psi_0 = psi,  psi_i = D0(psi_{i-1}) - D0(rho) v_i + lambda (psi_{i-1} - rho v_i).
/// Coincides with std_prolong when lambda = 0.
VectorField lambda_prolong(const LambdaPair &lp, int k);

/// Lie bracket, component-wise on the union of the finite jet components.
VectorField commutator(const VectorField &A, const VectorField &B);

/// The truncated total derivative on J^k as a vector field
/// (∂_t + v_1 ∂_v + ... + v_k ∂_{v_{k-1}}).
VectorField d0_field(const JetContext &ctx, int k);

struct CommutationCheck {
    Expr mu;
    bool ok = false;
    std::vector<Expr> residuals; // nonzero residuals, if any
};

/// Verifies [U, D0] = mu D0 + lambda U for U = X^{[lambda,k]} with
/// mu = -(D0(rho) + lambda rho), applying both sides to test functions of
/// jets up to order k-1.
CommutationCheck check_commutation(const LambdaPair &lp, int k);

} // namespace ljet
