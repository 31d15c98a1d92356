#include "fblearn/simplex.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fblearn/errors.hpp"

namespace fblearn {

namespace {

constexpr double kPivotTol = 1e-11;

// Tableau layout: rows = constraints, columns = structural | slack |
// artificial | rhs. Objective rows are kept separately as reduced-cost rows.
struct Tableau {
    std::size_t m, k, n_total;
    std::size_t art_begin;  // first artificial column
    std::vector<std::vector<double>> rows;  // m x (n_total + 1)
    std::vector<std::size_t> basis;         // basic column per row

    double& rhs(std::size_t i) { return rows[i][n_total]; }

    void pivot(std::size_t r, std::size_t col) {
        double piv = rows[r][col];
        for (double& v : rows[r]) v /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r) continue;
            double f = rows[i][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n_total; ++j) rows[i][j] -= f * rows[r][j];
        }
        basis[r] = col;
    }
};

// Runs simplex iterations for objective cost vector (size n_total),
// minimizing. Columns with allow[j] == 0 may not enter. Bland's rule.
double run_phase(Tableau& t, const std::vector<double>& cost, const std::vector<char>& allow) {
    while (true) {
        // Reduced costs: cost_j - cost_B' B^{-1} A_j, computed from the tableau.
        std::size_t enter = t.n_total;
        for (std::size_t j = 0; j < t.n_total; ++j) {
            if (!allow[j]) continue;
            double red = cost[j];
            for (std::size_t i = 0; i < t.m; ++i) red -= cost[t.basis[i]] * t.rows[i][j];
            if (red < -kPivotTol) {
                enter = j;  // Bland: lowest eligible index
                break;
            }
        }
        if (enter == t.n_total) break;  // optimal
        std::size_t leave = t.m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < t.m; ++i) {
            double a = t.rows[i][enter];
            if (a > kPivotTol) {
                double ratio = t.rhs(i) / a;
                if (ratio < best_ratio - kPivotTol ||
                    (ratio < best_ratio + kPivotTol &&
                     (leave == t.m || t.basis[i] < t.basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave == t.m) throw UnboundedLp("column " + std::to_string(enter));
        t.pivot(leave, enter);
    }
    double obj = 0.0;
    for (std::size_t i = 0; i < t.m; ++i) obj += cost[t.basis[i]] * t.rhs(i);
    return obj;
}

}  // namespace

LpSolution solve_lp(const LpProblem& prob, double feas_tol) {
    const std::size_t m = prob.a.size(), k = prob.c.size();
    if (prob.b.size() != m) throw InvalidArgument("lp: b size mismatch");

    Tableau t;
    t.m = m;
    t.k = k;
    // One slack per row; artificials only where the slack basis is invalid
    // (negative rhs rows get sign-flipped first).
    std::size_t arts = 0;
    for (double bi : prob.b)
        if (bi < 0.0) ++arts;
    t.art_begin = k + m;
    t.n_total = k + m + arts;
    t.rows.assign(m, std::vector<double>(t.n_total + 1, 0.0));
    t.basis.assign(m, 0);

    std::size_t art = t.art_begin;
    for (std::size_t i = 0; i < m; ++i) {
        if (prob.a[i].size() != k) throw InvalidArgument("lp: row size mismatch");
        double sign = prob.b[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < k; ++j) t.rows[i][j] = sign * prob.a[i][j];
        t.rows[i][k + i] = sign;  // slack
        t.rhs(i) = sign * prob.b[i];
        if (sign < 0.0) {
            t.rows[i][art] = 1.0;
            t.basis[i] = art;
            ++art;
        } else {
            t.basis[i] = k + i;
        }
    }

    std::vector<char> allow(t.n_total, 1);
    if (arts > 0) {
        std::vector<double> phase1(t.n_total, 0.0);
        for (std::size_t j = t.art_begin; j < t.n_total; ++j) phase1[j] = 1.0;
        double infeas = run_phase(t, phase1, allow);
        if (infeas > feas_tol) throw InfeasibleLp("phase-1 residual " + std::to_string(infeas));
    }
    // Artificials stay at (numerical) zero but may not re-enter.
    for (std::size_t j = t.art_begin; j < t.n_total; ++j) allow[j] = 0;

    std::vector<double> cost(t.n_total, 0.0);
    for (std::size_t j = 0; j < k; ++j) cost[j] = prob.c[j];
    double obj = run_phase(t, cost, allow);

    LpSolution sol;
    sol.objective = obj;
    sol.x.assign(k, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis[i] < k) sol.x[t.basis[i]] = t.rhs(i);
    return sol;
}

}  // namespace fblearn
