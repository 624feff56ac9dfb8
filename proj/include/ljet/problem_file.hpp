#pragma once

#include <optional>
#include <string>

#include "ljet/numeric.hpp"
#include "ljet/vector_field.hpp"

namespace ljet {

/// Input errors (malformed file, undeclared symbols, schema violations);
/// mapped to exit code 2 by the CLI.
class FileError : public std::runtime_error {
  public:
    FileError(const std::string &msg, const std::string &location)
        : std::runtime_error(msg + " [" + location + "]"), location_(location)
    {
    }
    const std::string &location() const { return location_; }

  private:
    std::string location_;
};

struct NumericSettings {
    uint64_t seed = 42;
    int count = 100;
    double tolerance = 1e-9;
    std::map<std::string, std::pair<double, double>> ranges;
};

/// Parsed and validated problem description.
struct ProblemFile {
    int k = 1;
    JetContext ctx;
    OdeProblem ode;        // normal form always available (derived from delta if needed)
    LambdaPair lp;
    std::optional<Expr> chi;
    std::optional<Expr> inv_x;
    std::optional<Expr> inv_zeta0;
    NumericSettings numeric;
    std::string origin; // path or "<memory>", for error messages

    SamplePlan plan() const;
};

ProblemFile load_problem_file(const std::string &path);
ProblemFile parse_problem_json(const std::string &text, const std::string &origin);

} // namespace ljet
