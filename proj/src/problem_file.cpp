#include "ljet/problem_file.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ljet/parse.hpp"

namespace ljet {

using nlohmann::json;

namespace {

Expr parse_field(const std::string &text, const JetContext &ctx, const std::string &field,
                 const std::string &origin)
{
    try {
        return parse(text, ctx);
    } catch (const ParseError &e) {
        throw FileError(std::string(e.what()) + " in \"" + text + "\"",
                        origin + ":" + field);
    }
}

void check_identifier(const std::string &name, const std::string &what,
                      const std::string &origin)
{
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])))
        throw FileError("invalid " + what + " name '" + name + "'", origin);
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)))
            throw FileError("invalid " + what + " name '" + name + "'", origin);
}

} // namespace

ProblemFile parse_problem_json(const std::string &text, const std::string &origin)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw FileError(e.what(), origin);
    }

    auto require = [&](const char *key) -> const json & {
        if (!j.contains(key))
            throw FileError(std::string("missing required field '") + key + "'", origin);
        return j.at(key);
    };

    ProblemFile pf;
    pf.origin = origin;

    const json &order = require("order");
    if (!order.is_number_integer() || order.get<int>() < 1)
        throw FileError("'order' must be a positive integer", origin + ":order");
    pf.k = order.get<int>();

    // context: parameters, functions
    JetContext ctx;
    ctx.order = pf.k;
    if (j.contains("parameters")) {
        for (const auto &p : j.at("parameters")) {
            std::string name = p.get<std::string>();
            check_identifier(name, "parameter", origin + ":parameters");
            if (ctx.resolve(name) || ctx.is_function(name))
                throw FileError("parameter '" + name + "' clashes with a coordinate",
                                origin + ":parameters");
            ctx.parameters.push_back(name);
        }
    }
    std::map<std::string, Expr> instantiations;
    if (j.contains("functions")) {
        for (const auto &f : j.at("functions")) {
            std::string name = f.at("name").get<std::string>();
            check_identifier(name, "function", origin + ":functions");
            if (ctx.resolve(name) || ctx.is_function(name))
                throw FileError("function '" + name + "' clashes with another name",
                                origin + ":functions");
            ctx.functions.push_back(name);
            if (f.contains("instantiation")) {
                JetContext tctx; // instantiations are plain functions of t
                tctx.parameters = ctx.parameters;
                instantiations[name] =
                    parse_field(f.at("instantiation").get<std::string>(), tctx,
                                "functions." + name, origin);
            }
        }
    }
    pf.ctx = ctx;

    const json &eq = require("equation");
    if (!eq.is_object() || (!eq.contains("rhs") && !eq.contains("delta")))
        throw FileError("'equation' must provide 'rhs' and/or 'delta'",
                        origin + ":equation");
    Expr rhs, delta;
    if (eq.contains("rhs"))
        rhs = parse_field(eq.at("rhs").get<std::string>(), ctx, "equation.rhs", origin);
    if (eq.contains("delta")) {
        delta = parse_field(eq.at("delta").get<std::string>(), ctx, "equation.delta",
                            origin);
        int m = max_order(delta, SymKind::Jet, ctx.jet_base);
        if (m != pf.k)
            throw FileError("'delta' has highest jet v" + std::to_string(m) +
                                " but order is " + std::to_string(pf.k),
                            origin + ":equation.delta");
    }
    if (rhs && max_order(rhs, SymKind::Jet, ctx.jet_base) >= pf.k)
        throw FileError("'rhs' must only use jets of order < " + std::to_string(pf.k),
                        origin + ":equation.rhs");
    if (!rhs) {
        // derive the normal form from an affine residual
        try {
            auto [a, b] = affine_in(delta, ctx.jet(pf.k));
            if (is_zero(a))
                throw MathError("delta does not depend on the top jet");
            rhs = divide(-b, a);
        } catch (const MathError &e) {
            throw FileError(std::string("cannot put 'delta' in normal form: ") + e.what(),
                            origin + ":equation.delta");
        }
    }
    try {
        pf.ode = make_ode(ctx, pf.k, rhs, delta);
    } catch (const MathError &e) {
        throw FileError(e.what(), origin + ":equation");
    }
    pf.ode.instantiations = instantiations;

    const json &vf = require("vector_field");
    if (!vf.is_object() || !vf.contains("rho") || !vf.contains("psi"))
        throw FileError("'vector_field' must provide 'rho' and 'psi'",
                        origin + ":vector_field");
    pf.lp.ctx = ctx;
    pf.lp.rho = parse_field(vf.at("rho").get<std::string>(), ctx, "vector_field.rho", origin);
    pf.lp.psi = parse_field(vf.at("psi").get<std::string>(), ctx, "vector_field.psi", origin);
    for (const char *coef : {"rho", "psi"}) {
        const Expr &e = coef[0] == 'r' ? pf.lp.rho : pf.lp.psi;
        if (max_order(e, SymKind::Jet, ctx.jet_base) >= 1)
            throw FileError(std::string("'") + coef + "' may depend on (t, v) only",
                            origin + ":vector_field");
    }

    pf.lp.lambda = parse_field(require("lambda").get<std::string>(), ctx, "lambda", origin);
    if (max_order(pf.lp.lambda, SymKind::Jet, ctx.jet_base) >= 2)
        throw FileError("'lambda' may depend on (t, v, v1) only", origin + ":lambda");

    if (j.contains("chi")) {
        Expr chi = parse_field(j.at("chi").get<std::string>(), ctx, "chi", origin);
        if (max_order(chi, SymKind::Jet, ctx.jet_base) >= pf.k)
            throw FileError("'chi' may depend on jets of order < " + std::to_string(pf.k),
                            origin + ":chi");
        pf.chi = chi;
    }
    if (j.contains("invariants")) {
        const json &inv = j.at("invariants");
        if (inv.contains("x")) {
            Expr x = parse_field(inv.at("x").get<std::string>(), ctx, "invariants.x", origin);
            if (max_order(x, SymKind::Jet, ctx.jet_base) >= 1)
                throw FileError("'invariants.x' may depend on (t, v) only",
                                origin + ":invariants.x");
            pf.inv_x = x;
        }
        if (inv.contains("zeta0")) {
            Expr z = parse_field(inv.at("zeta0").get<std::string>(), ctx,
                                 "invariants.zeta0", origin);
            if (max_order(z, SymKind::Jet, ctx.jet_base) >= 2)
                throw FileError("'invariants.zeta0' may depend on (t, v, v1) only",
                                origin + ":invariants.zeta0");
            pf.inv_zeta0 = z;
        }
    }

    if (j.contains("numeric")) {
        const json &num = j.at("numeric");
        if (num.contains("seed"))
            pf.numeric.seed = num.at("seed").get<uint64_t>();
        if (num.contains("count")) {
            pf.numeric.count = num.at("count").get<int>();
            if (pf.numeric.count < 1)
                throw FileError("'numeric.count' must be >= 1", origin + ":numeric.count");
        }
        if (num.contains("tolerance"))
            pf.numeric.tolerance = num.at("tolerance").get<double>();
        if (num.contains("ranges")) {
            for (auto it = num.at("ranges").begin(); it != num.at("ranges").end(); ++it) {
                if (!ctx.resolve(it.key()) && it.key() != ctx.nonlocal_base)
                    throw FileError("range for unknown symbol '" + it.key() + "'",
                                    origin + ":numeric.ranges");
                const auto &arr = it.value();
                if (!arr.is_array() || arr.size() != 2)
                    throw FileError("range must be [lo, hi]", origin + ":numeric.ranges");
                pf.numeric.ranges[it.key()] = {arr[0].get<double>(), arr[1].get<double>()};
            }
        }
    }
    return pf;
}

ProblemFile load_problem_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw FileError("cannot open file", path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_json(ss.str(), path);
}

SamplePlan ProblemFile::plan() const
{
    SamplePlan plan;
    plan.seed = numeric.seed;
    plan.count = numeric.count;
    JetContext wctx = ctx.with_nonlocal();
    for (const auto &[name, r] : numeric.ranges) {
        auto s = wctx.resolve(name);
        if (s)
            plan.ranges[*s] = Range{r.first, r.second, false};
    }
    return plan;
}

} // namespace ljet
