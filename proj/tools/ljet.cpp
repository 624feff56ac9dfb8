#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ljet/commands.hpp"

int main(int argc, char **argv)
{
    CLI::App app{"ljet - lambda-symmetry verification, nonlocal reconstruction and "
                 "order reduction for scalar ODEs"};
    app.require_subcommand(1);

    std::string file;
    std::string format = "text";
    ljet::CmdOptions opt;
    uint64_t seed = 0;
    double tol = 0;
    bool has_seed = false, has_tol = false;
    std::string aux_rhs, solution;
    int points = 0;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("file", file, "problem file (JSON)")->required();
        cmd->add_option("--format", format, "output format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--seed", seed, "seed for numeric sampling")
            ->each([&](const std::string &) { has_seed = true; });
        cmd->add_option("--tol", tol, "relative tolerance for numeric checks")
            ->each([&](const std::string &) { has_tol = true; });
        return cmd;
    };

    add_common(app.add_subcommand("check", "verify the lambda-symmetry and the "
                                           "commutation characterization"));
    add_common(app.add_subcommand("cover", "emit the covering system and its total "
                                           "derivative"));
    add_common(app.add_subcommand("chi", "solve or verify the reconstruction equation"));
    add_common(app.add_subcommand("reconstruct",
                                  "build the nonlocal symmetry and round-trip it"));
    auto *reduce = add_common(
        app.add_subcommand("reduce", "reduce the order by differential invariants"));
    reduce->add_option("--degree-bound", opt.degree_bound,
                       "Laurent degree bound of the invariant search");
    reduce->add_option("--aux-rhs", aux_rhs,
                       "right-hand side (in x) for the auxiliary first-order ODE");
    auto *vs = add_common(app.add_subcommand("verify-solution",
                                             "check a closed-form candidate solution"));
    vs->add_option("solution", solution, "candidate v(t) expression")->required();
    vs->add_option("--points", points, "number of t samples");

    CLI11_PARSE(app, argc, argv);

    opt.format = format == "json" ? ljet::CmdOptions::Format::Json
                                  : ljet::CmdOptions::Format::Text;
    if (has_seed)
        opt.seed = seed;
    if (has_tol)
        opt.tol = tol;
    if (!aux_rhs.empty())
        opt.aux_rhs = aux_rhs;
    if (points > 0)
        opt.points = points;

    std::string command = app.get_subcommands().front()->get_name();
    std::optional<std::string> sol;
    if (!solution.empty())
        sol = solution;

    ljet::CmdResult res = ljet::run_command(command, file, sol, opt);
    std::cout << res.output;
    return res.exit_code;
}
