#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ljet {

enum class SymKind : uint8_t {
    Independent = 0,       // t
    Jet = 1,               // v, v1, v2, ...
    NonlocalJet = 2,       // w, w1, ...
    Parameter = 3,         // p, c, ...
    IntegrationConstant = 4 // fresh constants produced by solvers
};

/// A named coordinate. Jet symbols carry a derivative order (order 0 is the
/// dependent variable itself).
struct Symbol {
    SymKind kind = SymKind::Parameter;
    std::string base;
    int order = 0;

    std::string name() const
    {
        if ((kind == SymKind::Jet || kind == SymKind::NonlocalJet) && order > 0)
            return base + std::to_string(order);
        return base;
    }

    /// Next-order jet of the same family.
    Symbol next() const { return Symbol{kind, base, order + 1}; }

    friend int sym_cmp(const Symbol &a, const Symbol &b)
    {
        if (a.kind != b.kind)
            return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
        if (int c = a.base.compare(b.base))
            return c < 0 ? -1 : 1;
        if (a.order != b.order)
            return a.order < b.order ? -1 : 1;
        return 0;
    }
    friend bool operator==(const Symbol &a, const Symbol &b) { return sym_cmp(a, b) == 0; }
    friend bool operator<(const Symbol &a, const Symbol &b) { return sym_cmp(a, b) < 0; }
};

/// Names and ordering of the coordinates of one problem: t, v, v1, ...,
/// optionally w, w1, ..., plus declared parameters, integration constants and
/// uninterpreted function names. Higher-order jets need no declaration; they
/// are derived on demand from the base names.
struct JetContext {
    Symbol indep{SymKind::Independent, "t", 0};
    std::string jet_base = "v";
    int order = 1; // k >= 1
    bool has_nonlocal = false;
    std::string nonlocal_base = "w";
    std::vector<std::string> parameters;
    std::vector<std::string> constants;
    std::vector<std::string> functions;

    Symbol jet(int i) const { return Symbol{SymKind::Jet, jet_base, i}; }
    Symbol nonlocal(int i) const { return Symbol{SymKind::NonlocalJet, nonlocal_base, i}; }
    Symbol parameter(const std::string &n) const { return Symbol{SymKind::Parameter, n, 0}; }
    Symbol constant(const std::string &n) const { return Symbol{SymKind::IntegrationConstant, n, 0}; }

    bool is_function(const std::string &n) const
    {
        for (auto &f : functions)
            if (f == n)
                return true;
        return false;
    }

    JetContext with_nonlocal() const
    {
        JetContext c = *this;
        c.has_nonlocal = true;
        return c;
    }

    /// Resolves an identifier to a declared symbol; nullopt if unknown.
    std::optional<Symbol> resolve(const std::string &name) const;
};

} // namespace ljet
