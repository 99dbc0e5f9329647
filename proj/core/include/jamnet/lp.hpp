#pragma once

#include <vector>

namespace jamnet {

// Small dense linear programs:
//   maximize c·x  subject to  a_i·x (<= | == | >=) b_i,  x >= 0.
// Two-phase tableau simplex with Bland's rule (anti-cycling, deterministic).
// Built for the scheduling problems here: tens of variables, exact
// reproducibility mattering more than speed.

enum class LpRelation { LessEqual, Equal, GreaterEqual };

struct LpProblem {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    std::vector<LpRelation> rel;
    std::vector<double> c;

    void add_row(std::vector<double> coeffs, LpRelation r, double rhs);
};

struct LpSolution {
    std::vector<double> x;
    double objective = 0.0;
    int iterations = 0;
};

// throws LpError (infeasible, unbounded, or iteration cap) with a trace
LpSolution solve_lp(const LpProblem& problem);

} // namespace jamnet
