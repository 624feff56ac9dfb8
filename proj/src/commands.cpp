#include "ljet/commands.hpp"

#include <sstream>

#include <json.hpp>

#include "ljet/invariant_reduction.hpp"
#include "ljet/lambda_symmetry.hpp"
#include "ljet/parse.hpp"

namespace ljet {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

struct Report {
    json data;
    std::ostringstream text;

    Report(const std::string &command)
    {
        data["schema_version"] = kSchemaVersion;
        data["command"] = command;
    }

    CmdResult finish(int exit_code, const CmdOptions &opt)
    {
        data["exit_code"] = exit_code;
        if (opt.format == CmdOptions::Format::Json)
            return {exit_code, data.dump(2) + "\n"};
        return {exit_code, text.str()};
    }
};

double tol_of(const ProblemFile &pf, const CmdOptions &opt, double fallback = 0)
{
    if (opt.tol)
        return *opt.tol;
    if (fallback > 0)
        return fallback;
    return pf.numeric.tolerance;
}

uint64_t seed_of(const ProblemFile &pf, const CmdOptions &opt)
{
    return opt.seed ? *opt.seed : pf.numeric.seed;
}

std::string status_name(ChiStatus s)
{
    switch (s) {
    case ChiStatus::Solved:
        return "solved";
    case ChiStatus::Unsolved:
        return "unsolved";
    case ChiStatus::VerifiedOnly:
        return "verified-only";
    }
    return "?";
}

} // namespace

CmdResult cmd_check(const ProblemFile &pf, const CmdOptions &opt)
{
    Report rep("check");
    double tol = tol_of(pf, opt);
    uint64_t seed = seed_of(pf, opt);

    SymmetryCheck sc = is_lambda_symmetry(pf.ode, pf.lp, tol, seed);
    CommutationCheck cc = check_commutation(pf.lp, pf.k);

    rep.data["lambda_symmetry"] = {{"ok", sc.ok},
                                   {"symbolic", sc.symbolic},
                                   {"residual", to_string(sc.residual)}};
    rep.data["commutation"] = {{"ok", cc.ok}, {"mu", to_string(cc.mu)}};
    rep.data["ok"] = sc.ok && cc.ok;

    rep.text << "lambda-symmetry: " << (sc.ok ? "ok" : "FAILED")
             << (sc.symbolic ? " (symbolic)" : " (numeric)") << "\n";
    rep.text << "tangency residual: " << to_string(sc.residual) << "\n";
    rep.text << "commutation [U,D0] = mu*D0 + lambda*U: " << (cc.ok ? "ok" : "FAILED")
             << ", mu = " << to_string(cc.mu) << "\n";
    return rep.finish(sc.ok && cc.ok ? 0 : 1, opt);
}

CmdResult cmd_cover(const ProblemFile &pf, const CmdOptions &opt)
{
    Report rep("cover");
    CoveringSystem cover = build_covering(pf.ode, pf.lp.lambda);
    std::string vk = pf.ctx.jet(pf.k).name();
    rep.data["system"] = {{vk, to_string(pf.ode.rhs)}, {"w1", to_string(cover.h)}};
    rep.data["total_derivative"] =
        "D = d/dt + v1*d/dv + ... + (" + to_string(pf.ode.rhs) + ")*d/d" +
        pf.ctx.jet(pf.k - 1).name() + " + (" + to_string(cover.h) + ")*d/dw";
    rep.data["ok"] = true;

    rep.text << "covering system:\n";
    rep.text << "  " << vk << " = " << to_string(pf.ode.rhs) << "\n";
    rep.text << "  w1 = " << to_string(cover.h) << "\n";
    rep.text << "restricted total derivative:\n  " << rep.data["total_derivative"].get<std::string>()
             << "\n";
    return rep.finish(0, opt);
}

CmdResult cmd_chi(const ProblemFile &pf, const CmdOptions &opt)
{
    Report rep("chi");
    double tol = tol_of(pf, opt);
    uint64_t seed = seed_of(pf, opt);
    ChiPde pde(pf.ode, pf.lp);
    rep.data["equation"] = to_string(pde.display());
    rep.text << "reconstruction equation (R[chi] = 0):\n  " << to_string(pde.display())
             << " = 0\n";

    if (pf.chi) {
        Expr r = pde.residual_at(*pf.chi);
        auto eq = equals(r, make_num(0), tol, seed);
        rep.data["status"] = "verified";
        rep.data["chi"] = to_string(*pf.chi);
        rep.data["residual"] = to_string(r);
        rep.data["ok"] = eq.equal;
        rep.text << "chi = " << to_string(*pf.chi) << " (user supplied)\n";
        rep.text << "residual: " << to_string(r) << "\n";
        rep.text << (eq.equal ? (eq.status == EqStatus::EqualSymbolic
                                     ? "verified symbolically\n"
                                     : "verified numerically\n")
                              : "verification FAILED\n");
        return rep.finish(eq.equal ? 0 : 1, opt);
    }

    ChiResult res = solve_chi_ansatz(pf.ode, pf.lp);
    rep.data["status"] = status_name(res.status);
    rep.data["ok"] = res.status == ChiStatus::Solved;
    if (res.status == ChiStatus::Solved) {
        rep.data["chi"] = to_string(res.chi);
        rep.text << "chi = " << to_string(res.chi) << "\n";
        return rep.finish(0, opt);
    }
    if (res.status == ChiStatus::VerifiedOnly) {
        rep.text << "no ansatz solver for order " << pf.k
                 << "; supply a candidate chi in the problem file\n";
        return rep.finish(1, opt);
    }
    json sys = json::array();
    rep.text << "no solution of the form chi(t, v); residual system:\n";
    for (const Expr &e : res.residual_system) {
        sys.push_back(to_string(e));
        rep.text << "  " << to_string(e) << " = 0\n";
    }
    rep.data["residual_system"] = sys;
    return rep.finish(1, opt);
}

CmdResult cmd_reconstruct(const ProblemFile &pf, const CmdOptions &opt)
{
    Report rep("reconstruct");
    double tol = tol_of(pf, opt);
    uint64_t seed = seed_of(pf, opt);

    Expr chi;
    if (pf.chi) {
        chi = *pf.chi;
    } else {
        ChiResult res = solve_chi_ansatz(pf.ode, pf.lp);
        if (res.status != ChiStatus::Solved) {
            rep.data["ok"] = false;
            rep.data["status"] = status_name(res.status);
            rep.text << "cannot reconstruct: chi is " << status_name(res.status) << "\n";
            return rep.finish(1, opt);
        }
        chi = res.chi;
    }

    NonlocalSymmetry sym = reconstruct_nonlocal(pf.ode, pf.lp, chi, tol, seed);
    CoveringSystem cover = build_covering(pf.ode, pf.lp.lambda);
    NonlocalVerification ver = verify_nonlocal_symmetry(cover, sym, tol, seed);
    LambdaPair back = extract_lambda_from_nonlocal(sym, cover);

    bool round_trip = same(back.rho, pf.lp.rho) && same(back.psi, pf.lp.psi) &&
                      same(back.lambda, pf.lp.lambda);

    json field;
    field["xi"] = to_string(sym.y.xi);
    json ev = json::array(), ew = json::array();
    for (const Expr &e : sym.y.eta_v)
        ev.push_back(to_string(e));
    for (const Expr &e : sym.y.eta_w)
        ew.push_back(to_string(e));
    field["eta_v"] = ev;
    field["eta_w"] = ew;
    rep.data["field"] = field;
    rep.data["chi"] = to_string(chi);
    rep.data["verified"] = {{"exponential_commutes", ver.exponential_commutes},
                            {"tangent_equation", ver.tangent_equation},
                            {"tangent_covering", ver.tangent_covering}};
    rep.data["round_trip"] = round_trip;
    bool ok = ver.ok() && round_trip;
    rep.data["ok"] = ok;

    rep.text << "nonlocal symmetry Y (exponential form):\n";
    rep.text << "  xi    = " << to_string(sym.y.xi) << "\n";
    for (size_t i = 0; i < sym.y.eta_v.size(); ++i)
        rep.text << "  eta_v" << i << " = " << to_string(sym.y.eta_v[i]) << "\n";
    for (size_t i = 0; i < sym.y.eta_w.size(); ++i)
        rep.text << "  eta_w" << i << " = " << to_string(sym.y.eta_w[i]) << "\n";
    rep.text << "tangency: equation " << (ver.tangent_equation ? "ok" : "FAILED")
             << ", covering " << (ver.tangent_covering ? "ok" : "FAILED")
             << ", [dw,Y]=Y " << (ver.exponential_commutes ? "ok" : "FAILED") << "\n";
    rep.text << "round trip (rho, psi, lambda): " << (round_trip ? "ok" : "FAILED") << "\n";
    return rep.finish(ok ? 0 : 1, opt);
}

CmdResult cmd_reduce(const ProblemFile &pf, const CmdOptions &opt)
{
    Report rep("reduce");
    double tol = tol_of(pf, opt);
    uint64_t seed = seed_of(pf, opt);

    Expr x, zeta0;
    if (pf.inv_x)
        x = *pf.inv_x;
    else if (is_zero(pf.lp.rho))
        x = make_sym(pf.ctx.indep); // rho = 0 makes t invariant
    else {
        rep.data["ok"] = false;
        rep.text << "no invariant x given and rho != 0; supply invariants.x\n";
        return rep.finish(1, opt);
    }

    VectorField X1 = lambda_prolong(pf.lp, 1);
    if (!verify_invariant(X1, x, tol, seed)) {
        rep.data["ok"] = false;
        rep.text << "x is not an invariant of the lambda-prolonged field\n";
        return rep.finish(1, opt);
    }

    InvariantChain chain;
    if (pf.inv_zeta0) {
        zeta0 = *pf.inv_zeta0;
        if (!verify_invariant(X1, zeta0, tol, seed)) {
            rep.data["ok"] = false;
            rep.text << "zeta0 is not an invariant of the lambda-prolonged field\n";
            return rep.finish(1, opt);
        }
        chain = reduce(pf.ode, x, zeta0);
    } else {
        // search, skipping candidates the affine elimination cannot use
        // (products of invariants come out quadratic in v1)
        auto basis = find_invariant_ansatz(pf.lp, opt.degree_bound);
        bool reduced = false;
        std::string last_error = "no first-order invariant found up to degree bound " +
                                 std::to_string(opt.degree_bound);
        for (const Expr &cand : basis) {
            if (is_zero(diff(cand, pf.ctx.jet(1))))
                continue;
            if (!verify_invariant(X1, cand, tol, seed))
                continue;
            try {
                chain = reduce(pf.ode, x, cand);
            } catch (const MathError &e) {
                last_error = e.what();
                continue;
            }
            zeta0 = cand;
            reduced = true;
            break;
        }
        if (!reduced) {
            rep.data["ok"] = false;
            rep.text << last_error << "\n";
            return rep.finish(1, opt);
        }
        rep.data["zeta0_found"] = to_string(zeta0);
    }

    json zetas = json::array();
    for (const Expr &z : chain.zetas)
        zetas.push_back(to_string(z));
    rep.data["x"] = to_string(chain.x);
    rep.data["zetas"] = zetas;
    rep.data["reduced"] = to_string(chain.reduced);

    // solved form: top invariant on the left
    auto [a, b] = affine_in(chain.reduced, chain.zeta_syms.back());
    Expr solved = divide(-b, a);
    std::string eqn = chain.zeta_syms.back().name() + " = " + to_string(solved);
    rep.data["reduced_equation"] = eqn;

    rep.text << "invariants:\n  x = " << to_string(chain.x) << "\n";
    for (size_t i = 0; i < chain.zetas.size(); ++i)
        rep.text << "  zeta" << i << " = " << to_string(chain.zetas[i]) << "\n";
    rep.text << "reduced equation: " << eqn << "\n";
    rep.text << "residual form: " << to_string(chain.reduced) << " = 0\n";

    if (opt.aux_rhs) {
        JetContext rctx; // expressions of x and declared parameters
        rctx.parameters = pf.ctx.parameters;
        rctx.parameters.push_back(chain.x_sym.name());
        rctx.functions = pf.ctx.functions;
        Expr rhs;
        try {
            rhs = parse(*opt.aux_rhs, rctx);
        } catch (const ParseError &e) {
            throw FileError(e.what(), "--aux-rhs");
        }
        Bindings rename; // the rhs is written in terms of the symbol named like x_sym
        rename[rctx.parameter(chain.x_sym.name())] = chain.x;
        Expr rhs2 = substitute(rhs, rename);
        Expr residual = zeta0 - rhs2;
        rep.data["auxiliary_ode"] = to_string(residual);
        rep.text << "auxiliary first-order ODE residual: " << to_string(residual)
                 << " = 0\n";
    }
    rep.data["ok"] = true;
    return rep.finish(0, opt);
}

CmdResult cmd_verify_solution(const ProblemFile &pf, const std::string &solution,
                              const CmdOptions &opt)
{
    Report rep("verify-solution");
    double tol = tol_of(pf, opt, 1e-8);

    Expr candidate;
    try {
        JetContext sctx;
        sctx.parameters = pf.ctx.parameters;
        sctx.functions = pf.ctx.functions;
        candidate = parse(solution, sctx);
    } catch (const ParseError &e) {
        throw FileError(e.what(), "solution");
    }

    double lo = -0.5, hi = 0.5;
    if (auto it = pf.numeric.ranges.find("t"); it != pf.numeric.ranges.end()) {
        lo = it->second.first;
        hi = it->second.second;
    }
    int n = opt.points ? *opt.points : pf.numeric.count;
    ResidualReport r = verify_solution(pf.ode, candidate, grid(lo, hi, n), tol);

    rep.data["candidate"] = to_string(candidate);
    rep.data["points_tested"] = r.points_tested;
    rep.data["max_abs"] = r.max_abs;
    rep.data["max_rel"] = r.max_rel;
    rep.data["failures"] = r.failures.size();
    rep.data["ok"] = r.ok();

    rep.text << "candidate v(t) = " << to_string(candidate) << "\n";
    rep.text << "points tested: " << r.points_tested << ", max |residual| = " << r.max_abs
             << ", max relative = " << r.max_rel << "\n";
    rep.text << (r.ok() ? "solution verified\n" : "solution FAILED verification\n");
    return rep.finish(r.ok() ? 0 : 1, opt);
}

CmdResult run_command(const std::string &command, const std::string &path,
                      const std::optional<std::string> &solution, const CmdOptions &opt)
{
    try {
        ProblemFile pf = load_problem_file(path);
        if (command == "check")
            return cmd_check(pf, opt);
        if (command == "cover")
            return cmd_cover(pf, opt);
        if (command == "chi")
            return cmd_chi(pf, opt);
        if (command == "reconstruct")
            return cmd_reconstruct(pf, opt);
        if (command == "reduce")
            return cmd_reduce(pf, opt);
        if (command == "verify-solution") {
            if (!solution)
                return {2, "verify-solution needs a candidate solution expression\n"};
            return cmd_verify_solution(pf, *solution, opt);
        }
        return {2, "unknown command '" + command + "'\n"};
    } catch (const FileError &e) {
        return {2, std::string("input error: ") + e.what() + "\n"};
    } catch (const ParseError &e) {
        return {2, std::string("input error: ") + e.what() + "\n"};
    } catch (const std::exception &e) {
        return {1, std::string("error: ") + e.what() + "\n"};
    }
}

} // namespace ljet
