#include "fblearn/learning.hpp"

#include <cmath>
#include <span>

#include "fblearn/rng.hpp"

namespace fblearn {

TrainingSet sample_training_set(const Dmc& w, std::size_t m, std::uint64_t seed) {
    if (m < 1) throw InvalidArgument("training size m must be >= 1");
    TrainingSet d;
    d.input_alphabet = w.num_inputs();
    d.output_alphabet = w.num_outputs();
    d.pairs.resize(m);
    std::vector<double> rows(w.num_inputs() * w.num_outputs());
    for (std::size_t x = 0; x < w.num_inputs(); ++x)
        for (std::size_t y = 0; y < w.num_outputs(); ++y) rows[x * w.num_outputs() + y] = w(x, y);
    for (std::size_t j = 0; j < m; ++j) {
        auto x = static_cast<std::uint32_t>(
            rng::uniform_index(seed, rng::kTrainingInput, j, w.num_inputs()));
        std::span<const double> row(rows.data() + static_cast<std::size_t>(x) * w.num_outputs(),
                                    w.num_outputs());
        auto y = static_cast<std::uint32_t>(rng::categorical(row, seed, rng::kTrainingOutput, j));
        d.pairs[j] = {x, y};
    }
    return d;
}

EmpiricalEstimate estimate_empirical_channel(const TrainingSet& d) {
    if (d.pairs.empty()) throw InvalidArgument("empty training set");
    const std::size_t nx = d.input_alphabet, ny = d.output_alphabet;
    std::vector<std::size_t> joint(nx * ny, 0), row(nx, 0);
    for (auto [x, y] : d.pairs) {
        if (x >= nx || y >= ny) throw IndexOutOfRange("training pair outside alphabets");
        ++joint[static_cast<std::size_t>(x) * ny + y];
        ++row[x];
    }
    std::vector<std::vector<double>> west(nx, std::vector<double>(ny));
    EmpiricalEstimate est;
    for (std::size_t x = 0; x < nx; ++x) {
        if (row[x] == 0) {
            est.unvisited_inputs.push_back(x);
            for (std::size_t y = 0; y < ny; ++y) west[x][y] = 1.0 / static_cast<double>(ny);
        } else {
            for (std::size_t y = 0; y < ny; ++y)
                west[x][y] = static_cast<double>(joint[x * ny + y]) / static_cast<double>(row[x]);
        }
    }
    est.channel = validate_dmc(west);
    return est;
}

double kl_concentration_bound(std::size_t m, std::size_t cardinality, double delta) {
    if (m < 1 || cardinality < 1) throw InvalidArgument("m and cardinality must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidDelta("delta must be in (0,1)");
    double num = static_cast<double>(cardinality - 1) * std::log(static_cast<double>(m) + 1.0) -
                 std::log(delta);
    return num / static_cast<double>(m);
}

double tv_penalty(const PenaltyParams& p) {
    if (p.n0 < 1) throw InvalidArgument("n0 must be >= 1");
    double bound = kl_concentration_bound(p.m, p.alphabet_product, p.delta);
    double inner = -static_cast<double>(p.n0) * bound;
    // expm1 keeps kappa accurate when the exponent is tiny.
    return std::sqrt(-std::expm1(inner));
}

std::size_t max_blocklength(std::size_t m, std::size_t cardinality, double delta) {
    double denom = kl_concentration_bound(m, cardinality, delta) * static_cast<double>(m);
    double n = std::sqrt(static_cast<double>(m) / denom);
    auto floor_n = static_cast<std::size_t>(std::floor(n));
    // Guard against floating drift right at an integer boundary.
    while ((static_cast<double>(floor_n) + 1.0) <= n) ++floor_n;
    return floor_n;
}

}  // namespace fblearn
