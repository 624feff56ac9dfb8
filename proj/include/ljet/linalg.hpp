#pragma once

#include <utility>
#include <vector>

#include "ljet/rational.hpp"

namespace ljet {

/// Sparse row of an exact rational matrix: (column, value) pairs sorted by
/// column, values nonzero.
using SparseRow = std::vector<std::pair<int, Rational>>;

/// Basis of {x : A x = 0} over the rationals, one dense vector per free
/// column of the reduced echelon form. Deterministic for a fixed row order.
std::vector<std::vector<Rational>> nullspace(std::vector<SparseRow> rows, int ncols);

} // namespace ljet
