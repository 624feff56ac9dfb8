#include "ljet/linalg.hpp"

#include <map>

namespace ljet {

namespace {

// r -= c * p, both sorted by column
SparseRow axpy(const SparseRow &r, const Rational &c, const SparseRow &p)
{
    SparseRow out;
    out.reserve(r.size() + p.size());
    size_t i = 0, j = 0;
    while (i < r.size() || j < p.size()) {
        if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
            out.push_back(r[i++]);
        } else if (i == r.size() || p[j].first < r[i].first) {
            out.emplace_back(p[j].first, -(c * p[j].second));
            ++j;
        } else {
            Rational v = r[i].second - c * p[j].second;
            if (!v.is_zero())
                out.emplace_back(r[i].first, v);
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace

std::vector<std::vector<Rational>> nullspace(std::vector<SparseRow> rows, int ncols)
{
    std::map<int, SparseRow> pivots; // leading column -> normalized row

    for (SparseRow row : rows) {
        // reduce against existing pivots
        for (;;) {
            if (row.empty())
                break;
            auto it = pivots.find(row[0].first);
            if (it == pivots.end())
                break;
            row = axpy(row, row[0].second, it->second);
        }
        if (row.empty())
            continue;
        Rational lead = row[0].second;
        for (auto &[c, v] : row)
            v = v / lead;
        pivots[row[0].first] = std::move(row);
    }

    // back-substitution: clear pivot columns above
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        const int col = it->first;
        const SparseRow prow = it->second;
        for (auto jt = pivots.begin(); jt != pivots.end(); ++jt) {
            if (jt->first == col)
                continue;
            SparseRow &r = jt->second;
            Rational c(0);
            for (auto &[cc, vv] : r)
                if (cc == col)
                    c = vv;
            if (!c.is_zero())
                r = axpy(r, c, prow);
        }
    }

    std::vector<std::vector<Rational>> basis;
    for (int j = 0; j < ncols; ++j) {
        if (pivots.count(j))
            continue;
        std::vector<Rational> x(static_cast<size_t>(ncols), Rational(0));
        x[static_cast<size_t>(j)] = Rational(1);
        for (auto &[pc, prow] : pivots)
            for (auto &[cc, vv] : prow)
                if (cc == j)
                    x[static_cast<size_t>(pc)] = -vv;
        basis.push_back(std::move(x));
    }
    return basis;
}

} // namespace ljet
