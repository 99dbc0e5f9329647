#include "jamnet/lp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "jamnet/errors.hpp"

namespace jamnet {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr int kMaxPivots = 100000;

// Tableau layout: rows 0..m-1 are constraints, row m is the objective being
// minimized (phase 1: artificial sum; phase 2: -c). Columns: structural,
// slack/surplus, artificial, rhs last.
struct Tableau {
    int m = 0;
    int cols = 0; // including rhs
    std::vector<std::vector<double>> t;
    std::vector<int> basis;
    int iterations = 0;

    double& at(int r, int c) { return t[r][c]; }

    void pivot(int pr, int pc) {
        const double pv = t[pr][pc];
        for (int c = 0; c < cols; ++c) t[pr][c] /= pv;
        for (int r = 0; r <= m; ++r) {
            if (r == pr) continue;
            const double factor = t[r][pc];
            if (factor == 0.0) continue;
            for (int c = 0; c < cols; ++c) t[r][c] -= factor * t[pr][c];
        }
        basis[pr] = pc;
        ++iterations;
    }

    // Bland: entering = lowest-index column with negative reduced cost;
    // leaving = min ratio, ties to the lowest basis column index.
    bool simplex_step(int num_cols_usable) {
        int pc = -1;
        for (int c = 0; c < num_cols_usable; ++c)
            if (t[m][c] < -kPivotEps) {
                pc = c;
                break;
            }
        if (pc == -1) return false; // optimal
        int pr = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int r = 0; r < m; ++r) {
            if (t[r][pc] <= kPivotEps) continue;
            const double ratio = t[r][cols - 1] / t[r][pc];
            if (ratio < best_ratio - 1e-15 ||
                (std::abs(ratio - best_ratio) <= 1e-15 &&
                 (pr == -1 || basis[r] < basis[pr]))) {
                best_ratio = ratio;
                pr = r;
            }
        }
        if (pr == -1) {
            std::ostringstream os;
            os << "LP unbounded at iteration " << iterations << " (column " << pc << ")";
            throw LpError(os.str());
        }
        pivot(pr, pc);
        if (iterations > kMaxPivots) {
            std::ostringstream os;
            os << "LP iteration cap " << kMaxPivots << " exceeded";
            throw LpError(os.str());
        }
        return true;
    }
};

} // namespace

void LpProblem::add_row(std::vector<double> coeffs, LpRelation r, double rhs) {
    a.push_back(std::move(coeffs));
    rel.push_back(r);
    b.push_back(rhs);
}

LpSolution solve_lp(const LpProblem& problem) {
    const int m = static_cast<int>(problem.a.size());
    const int n = static_cast<int>(problem.c.size());
    for (const auto& row : problem.a)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("solve_lp: ragged constraint matrix");

    // normalize to b >= 0
    std::vector<std::vector<double>> a = problem.a;
    std::vector<double> b = problem.b;
    std::vector<LpRelation> rel = problem.rel;
    for (int r = 0; r < m; ++r) {
        if (b[r] < 0.0) {
            for (double& v : a[r]) v = -v;
            b[r] = -b[r];
            if (rel[r] == LpRelation::LessEqual)
                rel[r] = LpRelation::GreaterEqual;
            else if (rel[r] == LpRelation::GreaterEqual)
                rel[r] = LpRelation::LessEqual;
        }
    }

    int num_slack = 0;
    int num_artificial = 0;
    for (int r = 0; r < m; ++r) {
        if (rel[r] != LpRelation::Equal) ++num_slack;
        if (rel[r] != LpRelation::LessEqual) ++num_artificial;
    }

    Tableau tb;
    tb.m = m;
    tb.cols = n + num_slack + num_artificial + 1;
    tb.t.assign(m + 1, std::vector<double>(tb.cols, 0.0));
    tb.basis.assign(m, -1);

    int slack_at = n;
    int artificial_at = n + num_slack;
    std::vector<int> artificial_row;
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < n; ++c) tb.at(r, c) = a[r][c];
        tb.at(r, tb.cols - 1) = b[r];
        switch (rel[r]) {
            case LpRelation::LessEqual:
                tb.at(r, slack_at) = 1.0;
                tb.basis[r] = slack_at++;
                break;
            case LpRelation::GreaterEqual:
                tb.at(r, slack_at++) = -1.0;
                [[fallthrough]];
            case LpRelation::Equal:
                tb.at(r, artificial_at) = 1.0;
                tb.basis[r] = artificial_at++;
                artificial_row.push_back(r);
                break;
        }
    }

    const int structural_cols = n + num_slack;

    // phase 1: minimize the artificial sum
    if (num_artificial > 0) {
        for (int r : artificial_row)
            for (int c = 0; c < tb.cols; ++c)
                if (c < n + num_slack || c == tb.cols - 1) tb.at(m, c) -= tb.at(r, c);
        while (tb.simplex_step(structural_cols)) {}
        const double infeas = -tb.at(m, tb.cols - 1);
        if (infeas > 1e-8) {
            std::ostringstream os;
            os << "LP infeasible (phase-1 residual " << infeas << " after "
               << tb.iterations << " pivots)";
            throw LpError(os.str());
        }
        // drive any lingering artificial out of the basis
        for (int r = 0; r < m; ++r) {
            if (tb.basis[r] < structural_cols) continue;
            int pc = -1;
            for (int c = 0; c < structural_cols; ++c)
                if (std::abs(tb.at(r, c)) > kPivotEps) {
                    pc = c;
                    break;
                }
            if (pc != -1) tb.pivot(r, pc);
            // else: the row is all zeros (redundant constraint) - harmless
        }
    }

    // phase 2: objective row = -c (we minimize -c·x)
    for (int c = 0; c < tb.cols; ++c) tb.at(m, c) = 0.0;
    for (int c = 0; c < n; ++c) tb.at(m, c) = -problem.c[c];
    for (int r = 0; r < m; ++r) {
        const int bc = tb.basis[r];
        const double coeff = tb.at(m, bc);
        if (coeff != 0.0)
            for (int c = 0; c < tb.cols; ++c) tb.at(m, c) -= coeff * tb.t[r][c];
    }
    while (tb.simplex_step(structural_cols)) {}

    LpSolution sol;
    sol.x.assign(n, 0.0);
    for (int r = 0; r < m; ++r)
        if (tb.basis[r] < n) sol.x[tb.basis[r]] = tb.at(r, tb.cols - 1);
    sol.objective = tb.at(m, tb.cols - 1);
    sol.iterations = tb.iterations;
    return sol;
}

} // namespace jamnet
