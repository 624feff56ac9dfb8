#pragma once

#include <optional>
#include <string>

#include "ljet/problem_file.hpp"

namespace ljet {

struct CmdOptions {
    enum class Format { Text, Json };
    Format format = Format::Text;
    std::optional<uint64_t> seed;
    std::optional<double> tol;
    int degree_bound = 3;
    std::optional<std::string> aux_rhs;  // reduce: rhs of the solved reduced equation
    std::optional<int> points;           // verify-solution: number of t samples
};

struct CmdResult {
    int exit_code = 0;
    std::string output;
};

CmdResult cmd_check(const ProblemFile &pf, const CmdOptions &opt);
CmdResult cmd_cover(const ProblemFile &pf, const CmdOptions &opt);
CmdResult cmd_chi(const ProblemFile &pf, const CmdOptions &opt);
CmdResult cmd_reconstruct(const ProblemFile &pf, const CmdOptions &opt);
CmdResult cmd_reduce(const ProblemFile &pf, const CmdOptions &opt);
CmdResult cmd_verify_solution(const ProblemFile &pf, const std::string &solution,
                              const CmdOptions &opt);

/// Loads the file, dispatches, and maps exceptions to exit codes
/// (0 verified, 1 mathematical failure, 2 input error).
CmdResult run_command(const std::string &command, const std::string &path,
                      const std::optional<std::string> &solution, const CmdOptions &opt);

} // namespace ljet
