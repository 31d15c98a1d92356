#include "fblearn/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fblearn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-11;   // value-grouping tolerance, relative
constexpr double kAbsTol = 1e-13;   // and absolute floor near zero

bool values_close(double a, double b) {
    double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= std::max(kAbsTol, kRelTol * scale);
}

// log2(2^a + 2^b) without leaving the log domain.
double log2_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == kNegInf || a - b > 1100.0) return a;
    return a + std::log2(1.0 + std::exp2(b - a));
}

// Sorts by value and merges groups within tolerance. Group representative is
// the P-weighted mean value (plain mean when the group carries no P mass),
// which keeps convolution moments exact to rounding.
std::vector<PmfAtom> sort_and_group(std::vector<PmfAtom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const PmfAtom& a, const PmfAtom& b) { return a.value < b.value; });
    std::vector<PmfAtom> out;
    out.reserve(atoms.size());
    std::size_t i = 0;
    while (i < atoms.size()) {
        std::size_t j = i + 1;
        double p_sum = atoms[i].p;
        double wv = atoms[i].value * atoms[i].p;
        double plain = atoms[i].value;
        double q = atoms[i].q_log2;
        std::size_t count = 1;
        while (j < atoms.size() && values_close(atoms[i].value, atoms[j].value)) {
            p_sum += atoms[j].p;
            wv += atoms[j].value * atoms[j].p;
            plain += atoms[j].value;
            q = log2_add(q, atoms[j].q_log2);
            ++count;
            ++j;
        }
        PmfAtom merged;
        merged.value = p_sum > 0.0 ? wv / p_sum : plain / static_cast<double>(count);
        merged.p = p_sum;
        merged.q_log2 = q;
        out.push_back(merged);
        i = j;
    }
    return out;
}

// Arithmetic-progression detection: many letter pmfs live on a value lattice,
// and n-fold convolutions of lattice pmfs stay on the lattice. The fast path
// below exploits that to skip sorting entirely.
struct Lattice {
    double origin = 0.0;
    double step = 0.0;  // 0 means single atom
};

bool detect_lattice(const std::vector<PmfAtom>& atoms, Lattice& lat) {
    if (atoms.empty()) return false;
    lat.origin = atoms.front().value;
    if (atoms.size() == 1) {
        lat.step = 0.0;
        return true;
    }
    double span = atoms.back().value - atoms.front().value;
    double step = (atoms.back().value - atoms.front().value) /
                  static_cast<double>(atoms.size() - 1);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        double expected = lat.origin + step * static_cast<double>(i);
        if (std::abs(atoms[i].value - expected) > 1e-12 * std::max(1.0, std::abs(span)))
            return false;
    }
    lat.step = step;
    return true;
}

bool same_step(const Lattice& a, const Lattice& b) {
    if (a.step == 0.0 || b.step == 0.0) return true;
    return std::abs(a.step - b.step) <= 1e-12 * std::max(std::abs(a.step), std::abs(b.step));
}

}  // namespace

SparsePmf::SparsePmf(std::vector<PmfAtom> atoms, bool complete_p) {
    if (atoms.empty()) throw InvalidArgument("pmf needs at least one atom");
    atoms_ = sort_and_group(std::move(atoms));
    double p = p_total();
    if (complete_p && std::abs(p - 1.0) > 1e-10)
        throw InvalidArgument("P masses sum to " + std::to_string(p));
    if (q_log2_total() > std::log2(1.0 + 1e-10))
        throw InvalidArgument("Q masses exceed 1");
}

SparsePmf SparsePmf::from_sorted_unchecked(std::vector<PmfAtom> atoms) {
    SparsePmf pmf;
    pmf.atoms_ = std::move(atoms);
    return pmf;
}

double SparsePmf::p_total() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.p;
    return s;
}

double SparsePmf::q_log2_total() const {
    double s = kNegInf;
    for (const auto& a : atoms_) s = log2_add(s, a.q_log2);
    return s;
}

double SparsePmf::mean() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.p * a.value;
    return s;
}

double SparsePmf::variance() const {
    double mu = mean(), s = 0.0;
    for (const auto& a : atoms_) s += a.p * (a.value - mu) * (a.value - mu);
    return s;
}

double SparsePmf::third_abs_central() const {
    double mu = mean(), s = 0.0;
    for (const auto& a : atoms_) {
        double d = std::abs(a.value - mu);
        s += a.p * d * d * d;
    }
    return s;
}

SparsePmf letter_pmf(const Dmc& w, const Dist& px, const Dist& qy) {
    if (px.size() != w.num_inputs() || qy.size() != w.num_outputs())
        throw DimensionMismatch("letter_pmf operands");
    std::vector<PmfAtom> atoms;
    for (std::size_t x = 0; x < w.num_inputs(); ++x) {
        if (px(x) <= 0.0) continue;
        for (std::size_t y = 0; y < w.num_outputs(); ++y) {
            if (w(x, y) <= 0.0) continue;
            if (qy(y) <= 0.0)
                throw SupportViolation("qy(y)=0 on reachable output y=" + std::to_string(y));
            PmfAtom a;
            a.value = std::log2(w(x, y) / qy(y));
            a.p = px(x) * w(x, y);
            a.q_log2 = std::log2(px(x) * qy(y));
            atoms.push_back(a);
        }
    }
    return SparsePmf(std::move(atoms));
}

SparsePmf row_llr_pmf(const Dmc& w, std::size_t x, const Dist& qy) {
    if (x >= w.num_inputs()) throw IndexOutOfRange("row index");
    if (qy.size() != w.num_outputs()) throw DimensionMismatch("row_llr_pmf operands");
    std::vector<PmfAtom> atoms;
    for (std::size_t y = 0; y < w.num_outputs(); ++y) {
        if (w(x, y) <= 0.0) continue;
        if (qy(y) <= 0.0)
            throw SupportViolation("qy(y)=0 on reachable output y=" + std::to_string(y));
        PmfAtom a;
        a.value = std::log2(w(x, y) / qy(y));
        a.p = w(x, y);
        a.q_log2 = std::log2(qy(y));
        atoms.push_back(a);
    }
    return SparsePmf(std::move(atoms));
}

SparsePmf convolve(const SparsePmf& a, const SparsePmf& b, std::size_t atom_cap) {
    const auto& xa = a.atoms();
    const auto& xb = b.atoms();
    if (xa.size() > atom_cap / std::max<std::size_t>(xb.size(), 1))
        throw AtomBudgetExceeded(std::to_string(xa.size()) + " x " + std::to_string(xb.size()) +
                                 " products");

    Lattice la, lb;
    if (detect_lattice(xa, la) && detect_lattice(xb, lb) && same_step(la, lb)) {
        // Lattice fast path: index arithmetic instead of sort+group.
        double step = la.step != 0.0 ? la.step : lb.step;
        std::size_t out_n = xa.size() + xb.size() - 1;
        std::vector<double> p(out_n, 0.0);
        std::vector<double> qmax(out_n, kNegInf);
        for (std::size_t i = 0; i < xa.size(); ++i)
            for (std::size_t j = 0; j < xb.size(); ++j)
                qmax[i + j] = std::max(qmax[i + j], xa[i].q_log2 + xb[j].q_log2);
        std::vector<double> qacc(out_n, 0.0);
        for (std::size_t i = 0; i < xa.size(); ++i) {
            for (std::size_t j = 0; j < xb.size(); ++j) {
                p[i + j] += xa[i].p * xb[j].p;
                double ql = xa[i].q_log2 + xb[j].q_log2;
                if (qmax[i + j] != kNegInf) qacc[i + j] += std::exp2(ql - qmax[i + j]);
            }
        }
        std::vector<PmfAtom> out(out_n);
        double origin = la.origin + lb.origin;
        for (std::size_t k = 0; k < out_n; ++k) {
            out[k].value = origin + step * static_cast<double>(k);
            out[k].p = p[k];
            out[k].q_log2 = qmax[k] == kNegInf ? kNegInf : qmax[k] + std::log2(qacc[k]);
        }
        return SparsePmf::from_sorted_unchecked(std::move(out));
    }

    std::vector<PmfAtom> prod;
    prod.reserve(xa.size() * xb.size());
    for (const auto& u : xa) {
        for (const auto& v : xb) {
            PmfAtom c;
            c.value = u.value + v.value;
            c.p = u.p * v.p;
            c.q_log2 = u.q_log2 + v.q_log2;
            prod.push_back(c);
        }
    }
    auto grouped = sort_and_group(std::move(prod));
    if (grouped.size() > atom_cap) throw AtomBudgetExceeded("grouped atom count");
    return SparsePmf::from_sorted_unchecked(std::move(grouped));
}

SparsePmf self_convolve(const SparsePmf& pmf, std::size_t n, std::size_t atom_cap) {
    if (n < 1) throw InvalidArgument("convolution power must be >= 1");
    // Binary expansion of n over doubled powers: O(log n) convolutions.
    SparsePmf result;
    bool have_result = false;
    SparsePmf power = pmf;
    std::size_t remaining = n;
    while (true) {
        if (remaining & 1) {
            result = have_result ? convolve(result, power, atom_cap) : power;
            have_result = true;
        }
        remaining >>= 1;
        if (remaining == 0) break;
        power = convolve(power, power, atom_cap);
    }
    return result;
}

double expect_min_one(const SparsePmf& pmf, double log_a) {
    if (log_a == kNegInf) return 0.0;
    if (std::isnan(log_a) || log_a == std::numeric_limits<double>::infinity())
        throw InvalidArgument("log_a must be finite or -inf");
    double acc = 0.0;
    for (const auto& a : pmf.atoms()) {
        double e = log_a - a.value;
        acc += e >= 0.0 ? a.p : a.p * std::exp2(e);
    }
    return std::min(acc, 1.0);
}

BetaResult np_beta(const SparsePmf& pmf, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidAlpha("alpha = " + std::to_string(alpha));
    BetaResult r;
    if (alpha == 0.0) {
        r.beta = 0.0;
        r.log2_beta = kNegInf;
        r.threshold = std::numeric_limits<double>::infinity();
        r.randomization = 0.0;
        return r;
    }
    const auto& atoms = pmf.atoms();
    // Walk values from the top: the optimal test accepts the largest
    // likelihood ratios first and randomizes exactly at the boundary atom.
    double p_above = 0.0;
    double q_above = kNegInf;
    std::size_t t = atoms.size();
    while (t > 0) {
        const auto& a = atoms[t - 1];
        if (p_above + a.p >= alpha || t == 1) break;
        p_above += a.p;
        q_above = log2_add(q_above, a.q_log2);
        --t;
    }
    const auto& boundary = atoms[t - 1];
    double rand = boundary.p > 0.0 ? (alpha - p_above) / boundary.p : 1.0;
    rand = std::clamp(rand, 0.0, 1.0);
    r.threshold = boundary.value;
    r.randomization = rand;
    double q_at = boundary.q_log2 + (rand > 0.0 ? std::log2(rand) : kNegInf);
    r.log2_beta = log2_add(q_above, q_at);
    r.beta = std::exp2(r.log2_beta);
    if (r.beta > 1.0) r.beta = 1.0;
    return r;
}

}  // namespace fblearn
