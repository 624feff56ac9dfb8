#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ljet/jet.hpp"

namespace ljet {

class EvalError : public std::runtime_error {
  public:
    explicit EvalError(const std::string &msg) : std::runtime_error(msg) {}
};

class SamplingExhausted : public std::runtime_error {
  public:
    explicit SamplingExhausted(const std::string &msg) : std::runtime_error(msg) {}
};

using Point = std::map<Symbol, double, SymLess>;

/// IEEE double evaluation; every free symbol must be bound and uninterpreted
/// functions must be instantiated beforehand. Domain violations (ln of a
/// non-positive value, fractional powers of negatives, tan at a pole) raise
/// EvalError.
double eval(const Expr &e, const Point &point);

/// Replaces g^{(d)}(t) by the d-th derivative of the instantiation body.
Expr instantiate_functions(const Expr &e, const std::map<std::string, Expr> &inst,
                           const Symbol &t);

/// splitmix64; identical seeds give bit-identical streams on every platform.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}
    uint64_t next();
    double uniform(double lo, double hi);
    long long pick(long long lo, long long hi); // inclusive
  private:
    uint64_t state_;
};

struct Range {
    double lo = 0.5;
    double hi = 2.0;
    bool random_sign = false;
};

struct SamplePlan {
    std::map<Symbol, Range, SymLess> ranges;
    std::vector<Expr> excluded; // denominators/radicands kept away from zero
    int count = 100;
    uint64_t seed = 42;
    double exclusion_floor = 1e-3;
    int fill_extra = 2; // extra jet orders beyond v_k / w_1 filled per point
};

/// Default ranges for a coordinate: |v| in [0.5, 2] with random sign,
/// t, w in [-1, 1], higher jets in [-2, 2], parameters in [0.5, 2].
Range default_range(const Symbol &s);

/// Draws points of the equation manifold: free coordinates in their ranges,
/// rejecting draws that bring an excluded expression below the floor, then
/// fills v_k, w_1 and higher jets from the equations. Deterministic for a
/// fixed seed; throws SamplingExhausted past a 99% rejection rate.
std::vector<Point> sample_manifold(const OdeProblem &ode, const CoveringSystem *cover,
                                   const SamplePlan &plan);

struct Failure {
    int point_index;
    double value;
};

struct ResidualReport {
    double max_abs = 0;
    double max_rel = 0;
    int points_tested = 0;
    double tolerance = 1e-9;
    std::vector<Failure> failures;
    bool ok() const { return failures.empty(); }
};

/// Evaluates e at every point; the relative error at a point is |value|
/// divided by the magnitude of the largest top-level term (floored at 1), and
/// values below 1e-12 never count as failures. OpenMP-parallel over points.
ResidualReport verify_residual(const Expr &e, const std::vector<Point> &points,
                               double tol = 1e-9);

/// Serial reference implementation; must produce bit-identical reports.
ResidualReport verify_residual_serial(const Expr &e, const std::vector<Point> &points,
                                      double tol = 1e-9);

struct TrajectoryPoint {
    double t;
    std::vector<double> y; // (v, v1, ..., v_{k-1})
};

/// Classical fixed-step RK4 on the first-order system for (v, ..., v_{k-1}).
/// The step is adjusted to land exactly on t1.
std::vector<TrajectoryPoint> integrate_ode(const OdeProblem &ode, const Point &initial,
                                           double t0, double t1, double step);

/// Substitutes a candidate solution v = c(t) (and its derivatives) into the
/// ODE residual and evaluates on the given t grid. Points where the candidate
/// leaves its domain are skipped.
ResidualReport verify_solution(const OdeProblem &ode, const Expr &candidate,
                               const std::vector<double> &t_points, double tol = 1e-8);

std::vector<double> grid(double lo, double hi, int n);

/// Zero sets to avoid when sampling: bases of negative powers, radicands of
/// fractional powers, ln arguments.
std::vector<Expr> collect_denominators(const Expr &e);

} // namespace ljet
