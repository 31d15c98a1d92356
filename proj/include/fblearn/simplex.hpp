#ifndef FBLEARN_SIMPLEX_HPP
#define FBLEARN_SIMPLEX_HPP

#include <cstddef>
#include <vector>

namespace fblearn {

/// min c'x subject to A x <= b, x >= 0.
/// Dense two-phase tableau simplex with Bland's rule; meant for the tiny
/// dispersion LPs (tens of variables), not general use.
struct LpProblem {
    std::vector<double> c;               // objective, size k
    std::vector<std::vector<double>> a;  // m rows of size k
    std::vector<double> b;               // size m
};

struct LpSolution {
    double objective = 0.0;
    std::vector<double> x;
};

/// Throws InfeasibleLp / UnboundedLp.
LpSolution solve_lp(const LpProblem& prob, double feas_tol = 1e-9);

}  // namespace fblearn

#endif
