#include "fblearn/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fblearn/simplex.hpp"

namespace fblearn {

namespace {

// D(W(.|x) || q) in bits; +inf if the row escapes q's support.
double row_divergence(const Dmc& w, std::size_t x, const Dist& q) {
    double acc = 0.0;
    for (std::size_t y = 0; y < w.num_outputs(); ++y) {
        double wxy = w(x, y);
        if (wxy <= 0.0) continue;
        if (q(y) <= 0.0) return std::numeric_limits<double>::infinity();
        acc += wxy * std::log2(wxy / q(y));
    }
    return acc;
}

// Var_{Y~W(.|x)} log2(W(Y|x)/q(Y)) in bits^2.
double row_variance(const Dmc& w, std::size_t x, const Dist& q) {
    double mean = 0.0, second = 0.0;
    for (std::size_t y = 0; y < w.num_outputs(); ++y) {
        double wxy = w(x, y);
        if (wxy <= 0.0) continue;
        if (q(y) <= 0.0) throw SupportViolation("caod zero on reachable output");
        double v = std::log2(wxy / q(y));
        mean += wxy * v;
        second += wxy * v * v;
    }
    return std::max(second - mean * mean, 0.0);
}

// LP over the CAID polytope: returns (min or max) of sum_x p(x) obj(x)
// subject to p >= 0, sum p = 1, W' p = caod. Equalities are written as
// inequality pairs; feas_tol absorbs the mass Blahut-Arimoto leaves on
// inputs outside the KKT support.
LpSolution caid_polytope_lp(const Dmc& w, const std::vector<std::size_t>& support,
                            const Dist& caod, const std::vector<double>& obj, bool maximize,
                            double feas_tol) {
    const std::size_t k = support.size();
    const std::size_t ny = w.num_outputs();
    LpProblem prob;
    prob.c.resize(k);
    for (std::size_t j = 0; j < k; ++j) prob.c[j] = maximize ? -obj[j] : obj[j];
    auto add_equality = [&](const std::vector<double>& row, double target) {
        prob.a.push_back(row);
        prob.b.push_back(target);
        std::vector<double> neg(row);
        for (double& v : neg) v = -v;
        prob.a.push_back(std::move(neg));
        prob.b.push_back(-target);
    };
    for (std::size_t y = 0; y < ny; ++y) {
        std::vector<double> row(k);
        for (std::size_t j = 0; j < k; ++j) row[j] = w(support[j], y);
        add_equality(row, caod(y));
    }
    add_equality(std::vector<double>(k, 1.0), 1.0);
    LpSolution sol = solve_lp(prob, feas_tol);
    if (maximize) sol.objective = -sol.objective;
    return sol;
}

}  // namespace

BlahutArimotoResult blahut_arimoto(const Dmc& w, double tol, std::size_t max_iter) {
    if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
    const std::size_t nx = w.num_inputs();
    std::vector<double> p(nx, 1.0 / static_cast<double>(nx));
    BlahutArimotoResult res;
    double lower = 0.0, upper = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= max_iter; ++it) {
        Dist px{std::vector<double>(p)};
        Dist q = output_marginal(px, w);
        double lb = 0.0, ub = 0.0;
        std::vector<double> d(nx);
        for (std::size_t x = 0; x < nx; ++x) {
            d[x] = row_divergence(w, x, q);
            lb += p[x] * d[x];
            ub = std::max(ub, d[x]);
        }
        lower = lb;
        upper = std::min(upper, ub);
        res.iterations = it;
        res.lower_trace.push_back(lb);
        if (upper - lower <= tol) {
            res.capacity = lower;
            res.caid_witness = px;
            res.caod = q;
            res.gap = upper - lower;
            return res;
        }
        // Multiplicative update p(x) <- p(x) 2^{D_x} / Z.
        double z = 0.0;
        double dmax = *std::max_element(d.begin(), d.end());
        for (std::size_t x = 0; x < nx; ++x) {
            p[x] *= std::exp2(d[x] - dmax);
            z += p[x];
        }
        for (double& v : p) v /= z;
    }
    throw NotConverged("blahut_arimoto gap " + std::to_string(upper - lower) + " after " +
                       std::to_string(max_iter) + " iterations");
}

std::vector<std::size_t> caid_support(const Dmc& w, const Dist& caod, double capacity,
                                      double slack) {
    std::vector<std::size_t> support;
    for (std::size_t x = 0; x < w.num_inputs(); ++x)
        if (row_divergence(w, x, caod) >= capacity - slack) support.push_back(x);
    return support;
}

double conditional_dispersion(const Dmc& w, const Dist& px, const Dist& caod) {
    if (px.size() != w.num_inputs() || caod.size() != w.num_outputs())
        throw DimensionMismatch("conditional_dispersion operands");
    double acc = 0.0;
    for (std::size_t x = 0; x < w.num_inputs(); ++x) {
        if (px(x) <= 0.0) continue;
        acc += px(x) * row_variance(w, x, caod);
    }
    return acc;
}

CapacityDispersion dispersion_extremal(const Dmc& w, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0) || epsilon == 0.5)
        throw InvalidArgument("epsilon must be in (0,1) and != 1/2");
    BlahutArimotoResult ba = blahut_arimoto(w);

    CapacityDispersion cd;
    cd.capacity = ba.capacity;
    cd.caod = ba.caod;
    cd.caid_witness = ba.caid_witness;

    double slack = 1e-7;
    for (int attempt = 0;; ++attempt) {
        auto support = caid_support(w, ba.caod, ba.capacity, slack);
        std::vector<double> v(support.size());
        std::vector<char> in_support(w.num_inputs(), 0);
        for (std::size_t j = 0; j < support.size(); ++j) {
            v[j] = row_variance(w, support[j], ba.caod);
            in_support[support[j]] = 1;
        }
        double excluded_mass = 0.0;
        for (std::size_t x = 0; x < w.num_inputs(); ++x)
            if (!in_support[x]) excluded_mass += ba.caid_witness(x);
        double feas_tol = std::max(1e-9, 10.0 * excluded_mass);
        try {
            LpSolution lo = caid_polytope_lp(w, support, ba.caod, v, false, feas_tol);
            LpSolution hi = caid_polytope_lp(w, support, ba.caod, v, true, feas_tol);
            cd.dispersion_min = std::max(lo.objective, 0.0);
            cd.dispersion_max = std::max(hi.objective, cd.dispersion_min);
            // CAID uniqueness probe: extremize each coordinate over the polytope.
            cd.unique_caid = true;
            for (std::size_t j = 0; j < support.size() && cd.unique_caid; ++j) {
                std::vector<double> e(support.size(), 0.0);
                e[j] = 1.0;
                double pj_min = caid_polytope_lp(w, support, ba.caod, e, false, feas_tol).objective;
                double pj_max = caid_polytope_lp(w, support, ba.caod, e, true, feas_tol).objective;
                if (pj_max - pj_min > 1e-6) cd.unique_caid = false;
            }
            return cd;
        } catch (const InfeasibleLp&) {
            if (attempt >= 3) throw;
            slack *= 10.0;  // BA caod is approximate; widen the KKT slack
        }
    }
}

}  // namespace fblearn
