#pragma once

#include "ljet/expr.hpp"

namespace ljet {

enum class EqStatus { EqualSymbolic, EqualNumeric, NotEqual };

struct EqualityResult {
    bool equal;
    EqStatus status;
    explicit operator bool() const { return equal; }
};

/// True if simplify(a - b) is zero; otherwise falls back to evaluation at
/// random points (relative tolerance tol), reporting EqualNumeric for
/// "undecided symbolically, confirmed numerically". Uninterpreted functions
/// are instantiated with random low-degree polynomials per sample. Singular
/// sample points are redrawn; bounded retries, then EvalError.
EqualityResult equals(const Expr &a, const Expr &b, double tol = 1e-9,
                      uint64_t seed = 20260808, int points = 100);

} // namespace ljet
