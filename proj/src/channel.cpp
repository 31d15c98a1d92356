#include "fblearn/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fblearn {

namespace {
constexpr double kInputTol = 1e-9;

void renormalize(std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e;
    for (double& e : v) e /= s;
}
}  // namespace

Dist::Dist(std::vector<double> mass) : mass_(std::move(mass)) {
    if (mass_.empty()) throw InvalidArgument("empty distribution");
    double s = 0.0;
    for (double e : mass_) {
        if (e < -kInputTol || e > 1.0 + kInputTol) throw NegativeEntry("pmf entry " + std::to_string(e));
        s += e;
    }
    if (std::abs(s - 1.0) > kInputTol) throw RowNotStochastic("pmf sums to " + std::to_string(s));
    for (double& e : mass_) e = std::max(e, 0.0);
    renormalize(mass_);
}

Dist Dist::uniform(std::size_t k) {
    return Dist(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

Dist Dist::point_mass(std::size_t k, std::size_t at) {
    std::vector<double> m(k, 0.0);
    m.at(at) = 1.0;
    return Dist(std::move(m));
}

Dist Dmc::row(std::size_t x) const {
    return Dist(std::vector<double>(w_.begin() + static_cast<std::ptrdiff_t>(x * ny_),
                                    w_.begin() + static_cast<std::ptrdiff_t>((x + 1) * ny_)));
}

Dmc validate_dmc(const std::vector<std::vector<double>>& raw) {
    if (raw.empty() || raw[0].empty()) throw InvalidArgument("empty transition matrix");
    Dmc dmc;
    dmc.nx_ = raw.size();
    dmc.ny_ = raw[0].size();
    dmc.w_.reserve(dmc.nx_ * dmc.ny_);
    for (std::size_t x = 0; x < dmc.nx_; ++x) {
        if (raw[x].size() != dmc.ny_) throw InvalidArgument("ragged transition matrix");
        double s = 0.0;
        for (double e : raw[x]) {
            if (e < 0.0) throw NegativeEntry("W(y|" + std::to_string(x) + ") = " + std::to_string(e));
            if (e > 1.0 + kInputTol) throw NegativeEntry("entry above 1 in row " + std::to_string(x));
            s += e;
        }
        if (std::abs(s - 1.0) > kInputTol)
            throw RowNotStochastic("row " + std::to_string(x) + " sums to " + std::to_string(s));
        std::vector<double> row(raw[x]);
        renormalize(row);
        dmc.w_.insert(dmc.w_.end(), row.begin(), row.end());
    }
    return dmc;
}

Dist output_marginal(const Dist& px, const Dmc& w) {
    if (px.size() != w.num_inputs()) throw DimensionMismatch("px size vs channel inputs");
    std::vector<double> py(w.num_outputs(), 0.0);
    for (std::size_t x = 0; x < w.num_inputs(); ++x)
        for (std::size_t y = 0; y < w.num_outputs(); ++y) py[y] += px(x) * w(x, y);
    // Forward image of two stochastic objects; renormalization inside Dist
    // only irons out rounding.
    return Dist(std::move(py));
}

InfoDensityTable info_density_table(const Dist& px, const Dmc& w) {
    Dist py = output_marginal(px, w);
    InfoDensityTable t;
    t.nx = w.num_inputs();
    t.ny = w.num_outputs();
    t.values.assign(t.nx * t.ny, 0.0);
    t.present.assign(t.nx * t.ny, 0);
    for (std::size_t x = 0; x < t.nx; ++x) {
        for (std::size_t y = 0; y < t.ny; ++y) {
            double wxy = w(x, y);
            if (wxy <= 0.0) continue;
            if (py(y) <= 0.0) {
                if (px(x) > 0.0)
                    throw UnreachableOutputWithMass("PY(y)=0 at reachable (x,y)=(" +
                                                    std::to_string(x) + "," + std::to_string(y) + ")");
                continue;  // no forward mass; leave absent
            }
            t.values[x * t.ny + y] = std::log2(wxy / py(y));
            t.present[x * t.ny + y] = 1;
        }
    }
    t.input_dist = px;
    t.output_marginal = py;
    return t;
}

double mutual_information(const Dist& px, const Dmc& w) {
    InfoDensityTable t = info_density_table(px, w);
    double acc = 0.0;
    for (std::size_t x = 0; x < t.nx; ++x)
        for (std::size_t y = 0; y < t.ny; ++y)
            if (t.is_present(x, y)) acc += px(x) * w(x, y) * t(x, y);
    return std::max(acc, 0.0);
}

double kl_divergence(const Dist& p, const Dist& q) {
    if (p.size() != q.size()) throw DimensionMismatch("kl_divergence operands");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p(i) <= 0.0) continue;
        if (q(i) <= 0.0) return std::numeric_limits<double>::infinity();
        acc += p(i) * std::log(p(i) / q(i));
    }
    return std::max(acc, 0.0);
}

double total_variation(const Dist& p, const Dist& q) {
    if (p.size() != q.size()) throw DimensionMismatch("total_variation operands");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p(i) - q(i));
    return 0.5 * acc;
}

}  // namespace fblearn
