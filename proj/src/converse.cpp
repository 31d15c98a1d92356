#include "fblearn/converse.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "fblearn/capacity.hpp"
#include "fblearn/learning.hpp"
#include "fblearn/parallel.hpp"

namespace fblearn {

namespace {

bool pmfs_equal(const SparsePmf& a, const SparsePmf& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& u = a.atom(i);
        const auto& v = b.atom(i);
        if (std::abs(u.value - v.value) > 1e-12 * std::max(1.0, std::abs(u.value))) return false;
        if (std::abs(u.p - v.p) > 1e-12) return false;
        if (std::abs(u.q_log2 - v.q_log2) > 1e-9 * std::max(1.0, std::abs(u.q_log2))) return false;
    }
    return true;
}

// Groups identical row laws so symmetric channels collapse to one class.
struct RowClasses {
    std::vector<SparsePmf> pmfs;                  // one per class
    std::vector<std::vector<std::size_t>> members;  // input indices per class
};

RowClasses classify_rows(const Dmc& w, const Dist& qy) {
    RowClasses rc;
    for (std::size_t x = 0; x < w.num_inputs(); ++x) {
        SparsePmf pmf = row_llr_pmf(w, x, qy);
        bool found = false;
        for (std::size_t c = 0; c < rc.pmfs.size(); ++c) {
            if (pmfs_equal(rc.pmfs[c], pmf)) {
                rc.members[c].push_back(x);
                found = true;
                break;
            }
        }
        if (!found) {
            rc.pmfs.push_back(std::move(pmf));
            rc.members.push_back({x});
        }
    }
    return rc;
}

SparsePmf composition_pmf(const RowClasses& rc, const std::vector<std::size_t>& counts,
                          std::size_t atom_cap) {
    SparsePmf acc;
    bool have = false;
    for (std::size_t c = 0; c < rc.pmfs.size(); ++c) {
        if (counts[c] == 0) continue;
        SparsePmf part = self_convolve(rc.pmfs[c], counts[c], atom_cap);
        acc = have ? convolve(acc, part, atom_cap) : std::move(part);
        have = true;
    }
    return acc;
}

// Lexicographically smallest per-input composition for given class counts:
// each class count goes entirely to its largest member index.
std::vector<std::size_t> to_input_composition(const RowClasses& rc, std::size_t nx,
                                              const std::vector<std::size_t>& counts) {
    std::vector<std::size_t> comp(nx, 0);
    for (std::size_t c = 0; c < counts.size(); ++c)
        comp[rc.members[c].back()] += counts[c];
    return comp;
}

// Initial class counts proportional to the capacity-achieving input law,
// rounded by largest remainder.
std::vector<std::size_t> capacity_counts(const Dmc& w, const RowClasses& rc, std::size_t n) {
    BlahutArimotoResult ba = blahut_arimoto(w, 1e-9, 100000);
    std::vector<double> weight(rc.pmfs.size(), 0.0);
    for (std::size_t c = 0; c < rc.pmfs.size(); ++c)
        for (std::size_t x : rc.members[c]) weight[c] += ba.caid_witness(x);
    std::vector<std::size_t> counts(rc.pmfs.size(), 0);
    std::vector<std::pair<double, std::size_t>> rema;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        double exact = weight[c] * static_cast<double>(n);
        counts[c] = static_cast<std::size_t>(std::floor(exact));
        assigned += counts[c];
        rema.push_back({exact - std::floor(exact), c});
    }
    std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) counts[rema[i % rema.size()].second]++;
    return counts;
}

}  // namespace

CompositionSearchResult composition_search(const Dmc& w_hat, const Dist& qy, std::size_t n,
                                           double alpha, std::size_t atom_cap) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidAlpha("alpha must be in (0,1]");
    if (n < 1) throw InvalidArgument("n must be >= 1");
    RowClasses rc = classify_rows(w_hat, qy);
    const std::size_t r = rc.pmfs.size();
    CompositionSearchResult res;

    if (r == 1) {
        // All rows share a law: every composition gives the same beta.
        std::vector<std::size_t> counts{n};
        res.beta = np_beta(composition_pmf(rc, counts, atom_cap), alpha);
        res.composition = to_input_composition(rc, w_hat.num_inputs(), counts);
        res.heuristic = false;
        return res;
    }

    if (r == 2) {
        // Exhaustive scan over all n+1 class compositions (exact minimum).
        std::vector<double> log2_betas(n + 1);
        std::vector<BetaResult> betas(n + 1);
        std::vector<std::exception_ptr> errors(n + 1);
        parallel_for(n + 1, [&](std::size_t k) {
            try {
                std::vector<std::size_t> counts{k, n - k};
                betas[k] = np_beta(composition_pmf(rc, counts, atom_cap), alpha);
                log2_betas[k] = betas[k].log2_beta;
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
        // Ties resolve to the lexicographically smallest per-input vector.
        std::vector<std::size_t> best_comp =
            to_input_composition(rc, w_hat.num_inputs(), {0, n});
        BetaResult best_beta = betas[0];
        for (std::size_t k = 1; k <= n; ++k) {
            auto comp = to_input_composition(rc, w_hat.num_inputs(), {k, n - k});
            if (log2_betas[k] < best_beta.log2_beta - 1e-12 ||
                (std::abs(log2_betas[k] - best_beta.log2_beta) <= 1e-12 && comp < best_comp)) {
                best_beta = betas[k];
                best_comp = comp;
            }
        }
        res.beta = best_beta;
        res.composition = best_comp;
        res.heuristic = false;
        return res;
    }

    // r > 2: hill climbing around the capacity-achieving composition.
    std::vector<std::size_t> counts = capacity_counts(w_hat, rc, n);
    BetaResult cur = np_beta(composition_pmf(rc, counts, atom_cap), alpha);
    const std::size_t max_moves = 50 + 4 * r * r;
    for (std::size_t move = 0; move < max_moves; ++move) {
        bool improved = false;
        std::vector<std::size_t> best_counts = counts;
        BetaResult best = cur;
        for (std::size_t from = 0; from < r; ++from) {
            if (counts[from] == 0) continue;
            for (std::size_t to = 0; to < r; ++to) {
                if (to == from) continue;
                std::vector<std::size_t> cand = counts;
                --cand[from];
                ++cand[to];
                BetaResult b = np_beta(composition_pmf(rc, cand, atom_cap), alpha);
                if (b.log2_beta < best.log2_beta - 1e-12) {
                    best = b;
                    best_counts = cand;
                    improved = true;
                }
            }
        }
        if (!improved) break;
        counts = std::move(best_counts);
        cur = best;
    }
    res.beta = cur;
    res.composition = to_input_composition(rc, w_hat.num_inputs(), counts);
    res.heuristic = true;
    return res;
}

ConverseResult converse_bound(const Dmc& w_hat, std::size_t n, double epsilon, std::size_t m,
                              double delta, const Dist& qy, ConverseOptions opts) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must be in (0,1)");
    ConverseResult res;
    res.kappa = opts.exact_channel
                    ? 0.0
                    : tv_penalty({m, w_hat.num_inputs() * w_hat.num_outputs(), delta, n});
    double alpha = 1.0 - epsilon - res.kappa;
    if (alpha <= 0.0) {
        res.vacuous = true;
        res.alpha_used = 0.0;
        res.log2_m_upper = std::numeric_limits<double>::infinity();
        return res;
    }
    res.alpha_used = alpha;
    CompositionSearchResult search = composition_search(w_hat, qy, n, alpha, opts.atom_cap);
    res.best_composition = search.composition;
    res.heuristic = search.heuristic;
    res.log2_m_upper = -search.beta.log2_beta;
    res.vacuous = false;
    return res;
}

}  // namespace fblearn
