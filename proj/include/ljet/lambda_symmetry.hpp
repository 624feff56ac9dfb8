#pragma once

#include "ljet/equality.hpp"
#include "ljet/numeric.hpp"
#include "ljet/vector_field.hpp"

namespace ljet {

struct SymmetryCheck {
    bool ok = false;
    bool symbolic = false; // decided symbolically, not by manifold sampling
    Expr residual;         // restricted tangency residual
};

/// Tangency of X^{[lambda,k]} to the equation: restrict(X^{[lambda,k]}(Delta))
/// must vanish, symbolically or numerically on manifold samples.
SymmetryCheck is_lambda_symmetry(const OdeProblem &ode, const LambdaPair &lp,
                                 double tol = 1e-9, uint64_t seed = 42);

/// The covering system 𝒴' = {v_k = f, w1 = lambda}.
CoveringSystem build_covering(const OdeProblem &ode, const Expr &lambda);

/// Residual functional R[chi] of the reconstruction equation
///   ∂_t chi + Σ v_i ∂_{v_{i-1}} chi + f ∂_{v_{k-1}} chi
///     = X^{[lambda,1]}(lambda) + lambda^2 rho + lambda (D0(rho) - chi).
class ChiPde {
  public:
    ChiPde(OdeProblem ode, LambdaPair lp);

    /// R rendered with placeholder symbols chi, chi_t, chi_v, chi_v1, ...
    Expr display() const;

    /// R[chi] for a concrete chi over (t, v, ..., v_{k-1}).
    Expr residual_at(const Expr &chi) const;

    const OdeProblem &ode() const { return ode_; }
    const LambdaPair &pair() const { return lp_; }
    const Expr &known() const { return known_; }

  private:
    OdeProblem ode_;
    LambdaPair lp_;
    Expr known_; // X^{[lambda,1]}(lambda) + lambda^2 rho + lambda D0(rho)
};

enum class ChiStatus { Solved, Unsolved, VerifiedOnly };

struct ChiResult {
    ChiStatus status = ChiStatus::Unsolved;
    Expr chi;                          // set when Solved
    std::vector<Expr> residual_system; // coefficient equations left unsolved
};

/// Solves the reconstruction equation under the ansatz chi = chi(t, v) for
/// second-order problems: the v1-linear coefficient gives a first-order
/// linear ODE in v (solved by integrating factor against a small
/// antiderivative table), the remaining coefficients fix the integration
/// "constant" C(t). Unsolved is a value, not an error.
ChiResult solve_chi_ansatz(const OdeProblem &ode, const LambdaPair &lp);

struct NonlocalSymmetry {
    VectorField y;
    bool exponential_form = false; // xi = e^w rho, eta_i^1 = e^w psi_i, eta_i^2 = e^w chi_i
};

/// Builds Y = e^w rho ∂_t + eta_i^1 ∂_{v_i} + eta_i^2 ∂_{w_i} with
/// eta_0^1 = e^w psi, eta_0^2 = e^w chi, prolonged through the covering total
/// derivative; chi is verified against the reconstruction equation first and
/// the result is verified tangent to the covering.
NonlocalSymmetry reconstruct_nonlocal(const OdeProblem &ode, const LambdaPair &lp,
                                      const Expr &chi, double tol = 1e-9,
                                      uint64_t seed = 42);

struct NonlocalVerification {
    bool exponential_commutes = false; // [∂_w, Y] = Y
    bool tangent_equation = false;     // restrict(Y(v_k - f)) = 0
    bool tangent_covering = false;     // restrict(Y(w1 - lambda)) = 0
    bool ok() const { return exponential_commutes && tangent_equation && tangent_covering; }
};

NonlocalVerification verify_nonlocal_symmetry(const CoveringSystem &cover,
                                              const NonlocalSymmetry &sym,
                                              double tol = 1e-9, uint64_t seed = 42);

/// Inverse direction: strips the e^w factor off Y and reads lambda from the
/// covering. Throws when Y is not in exponential form.
LambdaPair extract_lambda_from_nonlocal(const NonlocalSymmetry &sym,
                                        const CoveringSystem &cover);

} // namespace ljet
