#pragma once

#include <limits>
#include <string>
#include <vector>

namespace capex::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense : char { le = 'L', ge = 'G', eq = 'E' };

enum class Status { optimal, infeasible, unbounded, iteration_limit };

std::string status_name(Status s);

struct Triplet {
    int row;
    int col;
    double value;
};

/// Sparse minimization LP: cost vector, triplet constraint matrix, row
/// senses and right-hand sides, variable bounds.
struct LinearProgram {
    std::vector<double> cost;
    std::vector<double> lo, hi;
    std::vector<Triplet> entries;
    std::vector<Sense> senses;
    std::vector<double> rhs;
    double objective_offset = 0.0;

    int num_vars() const { return static_cast<int>(cost.size()); }
    int num_rows() const { return static_cast<int>(rhs.size()); }

    int add_var(double c, double lower = 0.0, double upper = kInf);
    int add_row(Sense sense, double b);
    void add_entry(int row, int col, double value);

    /// Throws ValidationError on NaN/inf coefficients, inconsistent
    /// dimensions or inverted bounds.
    void check() const;
};

struct SolveOptions {
    double tolerance = 1e-9;
    int max_iterations = 0; // 0 = automatic from problem size
    bool want_duals = true;
};

struct Solution {
    Status status = Status::iteration_limit;
    std::vector<double> x;
    double objective = 0.0;
    std::vector<double> duals; // one per row when requested and optimal
    int iterations = 0;
    std::string message;
};

/// Bounded-variable revised simplex, two-phase, geometric scaling, Dantzig
/// pricing with a Bland fallback on stalls. Deterministic for identical
/// input.
Solution solve(const LinearProgram& lp, const SolveOptions& opts = {});

} // namespace capex::lp
