#include "fblearn/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "fblearn/achievability.hpp"
#include "fblearn/asymptotics.hpp"
#include "fblearn/capacity.hpp"
#include "fblearn/codesim.hpp"
#include "fblearn/converse.hpp"
#include "fblearn/density.hpp"
#include "fblearn/rng.hpp"

namespace fblearn::cli {

namespace {

std::string g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.rfind(prefix, 0) == 0;
}

double parse_probability(const std::string& s, const std::string& what) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !(v >= 0.0 && v <= 1.0))
        throw ParseError("bad " + what + " '" + s + "'");
    return v;
}

Dmc bsc(double p) {
    return validate_dmc({{1.0 - p, p}, {p, 1.0 - p}});
}

Dmc bec(double p) {
    return validate_dmc({{1.0 - p, 0.0, p}, {0.0, 1.0 - p, p}});
}

Dmc identity_channel(std::size_t k) {
    std::vector<std::vector<double>> w(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) w[i][i] = 1.0;
    return validate_dmc(w);
}

Dmc uniform_channel(std::size_t kx, std::size_t ky) {
    std::vector<std::vector<double>> w(kx,
                                       std::vector<double>(ky, 1.0 / static_cast<double>(ky)));
    return validate_dmc(w);
}

struct CommandContext {
    const RunConfig& cfg;
    std::ostringstream out;
    std::ostringstream err;
};

Dmc channel_from(const CommandContext&, const std::string& spec);

// Shared resolution of W^ for bound commands: --channel directly, or
// --training + alphabet sizes (unvisited rows warned on stderr).
Dmc resolve_channel(CommandContext& ctx) {
    if (!ctx.cfg.training_path.empty()) {
        if (ctx.cfg.nx == 0 || ctx.cfg.ny == 0)
            throw InvalidArgument("--training needs --nx and --ny");
        TrainingSet ts =
            parse_training_file(read_file(ctx.cfg.training_path), ctx.cfg.nx, ctx.cfg.ny);
        EmpiricalEstimate est = estimate_empirical_channel(ts);
        for (std::size_t x : est.unvisited_inputs)
            ctx.err << "warning: input " << x
                    << " never observed; row set to uniform (PAC guarantee vacuous)\n";
        return est.channel;
    }
    if (ctx.cfg.channel_spec.empty()) throw InvalidArgument("--channel or --training required");
    return channel_from(ctx, ctx.cfg.channel_spec);
}

Dmc channel_from(const CommandContext&, const std::string& spec) { return make_channel(spec); }

double effective_epsilon(CommandContext& ctx, double eps) {
    if (eps == 0.5) {
        ctx.err << "warning: epsilon = 1/2 is outside the dispersion definition; "
                   "using the min branch\n";
        return std::nextafter(0.5, 0.0);
    }
    return eps;
}

double resolve_log2m(const RunConfig& cfg) {
    if (cfg.log2m >= 0.0) return cfg.log2m;
    if (cfg.rate >= 0.0) return cfg.rate * static_cast<double>(cfg.n);
    throw InvalidArgument("--rate or --log2m required");
}

Dist resolve_qy(CommandContext& ctx, const Dmc& w) {
    if (ctx.cfg.qy_spec == "caod") return blahut_arimoto(w).caod;
    if (ctx.cfg.qy_spec == "uniform") return Dist::uniform(w.num_outputs());
    Dmc q = parse_channel_file(read_file(ctx.cfg.qy_spec));
    if (q.num_inputs() != 1 || q.num_outputs() != w.num_outputs())
        throw DimensionMismatch("qy file must be a 1 x |Y| dmc");
    return q.row(0);
}

void cmd_capacity(CommandContext& ctx) {
    Dmc w = resolve_channel(ctx);
    BlahutArimotoResult ba = blahut_arimoto(w, ctx.cfg.tol);
    ctx.out << "capacity_bits\n" << g12(ba.capacity) << "\n";
}

void cmd_dispersion(CommandContext& ctx) {
    Dmc w = resolve_channel(ctx);
    double eps = effective_epsilon(ctx, ctx.cfg.epsilon);
    CapacityDispersion cd = dispersion_extremal(w, eps);
    if (cd.dispersion_min == 0.0)
        ctx.err << "warning: dispersion_min = 0 (possible exotic-channel territory)\n";
    ctx.out << "capacity_bits,dispersion_min_bits2,dispersion_max_bits2,v_eps_bits2,unique_caid\n"
            << g12(cd.capacity) << ',' << g12(cd.dispersion_min) << ',' << g12(cd.dispersion_max)
            << ',' << g12(cd.dispersion_for(eps)) << ',' << (cd.unique_caid ? 1 : 0) << "\n";
}

void cmd_estimate(CommandContext& ctx) {
    if (ctx.cfg.training_path.empty()) throw InvalidArgument("--training required");
    if (ctx.cfg.nx == 0 || ctx.cfg.ny == 0) throw InvalidArgument("--nx and --ny required");
    TrainingSet ts = parse_training_file(read_file(ctx.cfg.training_path), ctx.cfg.nx, ctx.cfg.ny);
    EmpiricalEstimate est = estimate_empirical_channel(ts);
    for (std::size_t x : est.unvisited_inputs)
        ctx.err << "warning: input " << x
                << " never observed; row set to uniform (PAC guarantee vacuous)\n";
    ctx.out << write_channel_file(est.channel);
}

void cmd_sample(CommandContext& ctx) {
    Dmc w = resolve_channel(ctx);
    TrainingSet ts = sample_training_set(w, ctx.cfg.m, ctx.cfg.seed);
    for (auto [x, y] : ts.pairs) ctx.out << x << ',' << y << "\n";
}

BoundParams bound_params(const RunConfig& cfg, const Dmc&) {
    BoundParams p;
    p.n = cfg.n;
    p.rate = cfg.log2m >= 0.0 ? cfg.log2m / static_cast<double>(cfg.n)
                              : (cfg.rate >= 0.0 ? cfg.rate : 0.0);
    p.epsilon = cfg.epsilon;
    p.delta = cfg.delta;
    p.m = cfg.m;
    if (cfg.n0 > 0) p.n0 = cfg.n0;
    p.exact_channel = cfg.exact_channel;
    p.mc_seed = cfg.seed;
    return p;
}

void cmd_achieve(CommandContext& ctx) {
    Dmc w = resolve_channel(ctx);
    BoundParams p = bound_params(ctx.cfg, w);
    if (ctx.cfg.rate < 0.0 && ctx.cfg.log2m < 0.0)
        throw InvalidArgument("--rate or --log2m required");
    AchievabilityResult r = rcu_learning_bound(w, Dist::uniform(w.num_inputs()), p);
    ctx.out << "error_upper_bound,best_n0,first_term,penalty_term,raw_sum,method,mc_std_error\n"
            << g12(r.error_upper_bound) << ',' << r.best_n0 << ',' << g12(r.first_term) << ','
            << g12(r.penalty_term) << ',' << g12(r.raw_sum) << ','
            << (r.method == AchievabilityResult::Method::exact ? "exact" : "monte_carlo") << ','
            << (r.mc_std_error ? g12(*r.mc_std_error) : std::string()) << "\n";
}

void cmd_max_rate(CommandContext& ctx) {
    Dmc w = resolve_channel(ctx);
    double rate = max_rate_achievable(w, Dist::uniform(w.num_inputs()), ctx.cfg.n, ctx.cfg.m,
                                      ctx.cfg.epsilon, ctx.cfg.delta, ctx.cfg.exact_channel);
    ctx.out << "rate_bits_per_use\n" << g12(rate) << "\n";
}

std::string join_composition(const std::vector<std::size_t>& comp) {
    std::string s;
    for (std::size_t i = 0; i < comp.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(comp[i]);
    }
    return s;
}

void cmd_converse(CommandContext& ctx) {
    Dmc w = resolve_channel(ctx);
    Dist qy = resolve_qy(ctx, w);
    ConverseOptions opts;
    opts.exact_channel = ctx.cfg.exact_channel;
    ConverseResult r =
        converse_bound(w, ctx.cfg.n, ctx.cfg.epsilon, ctx.cfg.m, ctx.cfg.delta, qy, opts);
    ctx.out << "log2_m_upper_bits,rate_upper_bits_per_use,alpha_used,kappa,vacuous,heuristic,"
               "best_composition\n"
            << g12(r.log2_m_upper) << ','
            << g12(r.log2_m_upper / static_cast<double>(ctx.cfg.n)) << ',' << g12(r.alpha_used)
            << ',' << g12(r.kappa) << ',' << (r.vacuous ? 1 : 0) << ',' << (r.heuristic ? 1 : 0)
            << ',' << join_composition(r.best_composition) << "\n";
}

void cmd_normal_approx(CommandContext& ctx) {
    Dmc w = resolve_channel(ctx);
    double eps = effective_epsilon(ctx, ctx.cfg.epsilon);
    CapacityDispersion cd = dispersion_extremal(w, eps);
    std::optional<TrainingBudget> budget;
    if (ctx.cfg.m > 1)
        budget = TrainingBudget{ctx.cfg.m, w.num_inputs() * w.num_outputs(), ctx.cfg.delta};
    NormalApproxResult r =
        ctx.cfg.n0 > 0 ? normal_approx_rate_partial(cd, ctx.cfg.n, ctx.cfg.n0, eps, budget)
                       : normal_approx_rate(cd, ctx.cfg.n, eps, budget);
    if (static_cast<double>(ctx.cfg.n) < r.min_n_hint)
        ctx.err << "warning: n < 1/eps^2; the normal approximation may not have set in\n";
    double radius =
        berry_esseen_radius(info_density_moments(w, cd.caid_witness),
                            ctx.cfg.n0 > 0 ? ctx.cfg.n0 : ctx.cfg.n);
    ctx.out << "rate_bits_per_use,capacity_term,dispersion_term,condition_ok,min_n_hint,"
               "be_radius\n"
            << g12(r.rate) << ',' << g12(r.capacity_term) << ',' << g12(r.dispersion_term) << ','
            << (r.condition_ok ? (*r.condition_ok ? "1" : "0") : "NA") << ','
            << g12(r.min_n_hint) << ',' << g12(radius) << "\n";
}

void cmd_simulate(CommandContext& ctx) {
    if (ctx.cfg.channel_spec.empty()) throw InvalidArgument("--channel (true channel) required");
    Dmc w_true = channel_from(ctx, ctx.cfg.channel_spec);
    Dmc w_hat = w_true;
    if (!ctx.cfg.channel_est_spec.empty()) {
        w_hat = channel_from(ctx, ctx.cfg.channel_est_spec);
    } else if (!ctx.cfg.training_path.empty()) {
        TrainingSet ts = parse_training_file(read_file(ctx.cfg.training_path),
                                             w_true.num_inputs(), w_true.num_outputs());
        EmpiricalEstimate est = estimate_empirical_channel(ts);
        for (std::size_t x : est.unvisited_inputs)
            ctx.err << "warning: input " << x << " never observed; row set to uniform\n";
        w_hat = est.channel;
    }
    double log2m = resolve_log2m(ctx.cfg);
    std::size_t n0 = ctx.cfg.n0 > 0 ? ctx.cfg.n0 : ctx.cfg.n;
    Dist px = Dist::uniform(w_true.num_inputs());

    if (ctx.cfg.ensemble > 0) {
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t c = 0; c < ctx.cfg.ensemble; ++c) {
            std::uint64_t cb_seed = rng::bits(ctx.cfg.seed, rng::kDrawDerive, c);
            Codebook cb = generate_codebook(px, log2m, ctx.cfg.n, n0, cb_seed);
            SimResult r = simulate_error_prob(w_true, w_hat, cb, ctx.cfg.trials,
                                              rng::bits(cb_seed, rng::kDrawDerive, 1));
            sum += r.error_estimate;
            sumsq += r.error_estimate * r.error_estimate;
        }
        double k = static_cast<double>(ctx.cfg.ensemble);
        double mean = sum / k;
        double sd = std::sqrt(std::max(sumsq / k - mean * mean, 0.0) / k);
        ctx.out << "ensemble_mean,ensemble_std_error,codebooks,trials_per_codebook,seed\n"
                << g12(mean) << ',' << g12(sd) << ',' << ctx.cfg.ensemble << ',' << ctx.cfg.trials
                << ',' << ctx.cfg.seed << "\n";
        return;
    }

    Codebook cb = generate_codebook(px, log2m, ctx.cfg.n, n0, ctx.cfg.seed);
    SimResult r = simulate_error_prob(w_true, w_hat, cb, ctx.cfg.trials,
                                      rng::bits(ctx.cfg.seed, rng::kDrawDerive, 1));
    ctx.out << "error_estimate,std_error,trials,seed,m0,l,effective_n\n"
            << g12(r.error_estimate) << ',' << g12(r.std_error) << ',' << r.trials << ','
            << ctx.cfg.seed << ',' << cb.m0 << ',' << cb.l << ',' << cb.effective_n << "\n";
}

void cmd_verify(CommandContext& ctx) {
    Dmc w_true = resolve_channel(ctx);
    BoundParams p = bound_params(ctx.cfg, w_true);
    p.rate = resolve_log2m(ctx.cfg) / static_cast<double>(ctx.cfg.n);
    VerifyOptions opts;
    opts.fresh_codebook_per_draw = ctx.cfg.fresh_codebook;
    ReliabilityReport rep =
        verify_reliability(w_true, p, ctx.cfg.draws, ctx.cfg.trials, ctx.cfg.seed, opts);
    ctx.out << "draws,fraction_within_eps,mean_pe,sigma_fraction,sigma_mean,pass_fraction,"
               "pass_mean\n"
            << rep.draws << ',' << g12(rep.fraction_within_eps) << ',' << g12(rep.mean_pe) << ','
            << g12(rep.sigma_fraction) << ',' << g12(rep.sigma_mean) << ','
            << (rep.pass_fraction ? 1 : 0) << ',' << (rep.pass_mean ? 1 : 0) << "\n";
}

void cmd_sandwich(CommandContext& ctx) {
    Dmc w = resolve_channel(ctx);
    double eps = effective_epsilon(ctx, ctx.cfg.epsilon);
    std::vector<std::size_t> ns;
    std::stringstream ss(ctx.cfg.n_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        char* end = nullptr;
        long v = std::strtol(tok.c_str(), &end, 10);
        if (end == tok.c_str() || *end != '\0' || v < 1) throw ParseError("bad n '" + tok + "'");
        ns.push_back(static_cast<std::size_t>(v));
    }
    if (ns.empty()) throw InvalidArgument("--n-list required");
    CapacityDispersion cd = dispersion_extremal(w, eps);
    Dist qy = resolve_qy(ctx, w);
    Dist px = Dist::uniform(w.num_inputs());
    std::optional<TrainingBudget> budget;
    if (!ctx.cfg.exact_channel)
        budget = TrainingBudget{ctx.cfg.m, w.num_inputs() * w.num_outputs(), ctx.cfg.delta};
    ctx.out << "n,achievable_rate,converse_rate,normal_approx_rate,kappa,condition_ok\n";
    for (std::size_t n : ns) {
        double ach = max_rate_achievable(w, px, n, ctx.cfg.m, eps, ctx.cfg.delta,
                                         ctx.cfg.exact_channel);
        ConverseOptions copts;
        copts.exact_channel = ctx.cfg.exact_channel;
        ConverseResult conv = converse_bound(w, n, eps, ctx.cfg.m, ctx.cfg.delta, qy, copts);
        NormalApproxResult na = normal_approx_rate(cd, n, eps, budget);
        ctx.out << n << ',' << g12(ach) << ','
                << g12(conv.log2_m_upper / static_cast<double>(n)) << ',' << g12(na.rate) << ','
                << g12(conv.kappa) << ','
                << (na.condition_ok ? (*na.condition_ok ? "1" : "0") : "NA") << "\n";
    }
}

}  // namespace

Dmc parse_channel_file(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::size_t nx = 0, ny = 0;
    bool header_seen = false;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        if (!header_seen) {
            std::string tag;
            ls >> tag;
            if (tag != "dmc")
                throw ParseError("line " + std::to_string(lineno) + ": expected 'dmc |X| |Y|'");
            long long a = 0, b = 0;
            if (!(ls >> a >> b) || a < 1 || b < 1)
                throw ParseError("line " + std::to_string(lineno) + ": bad alphabet sizes");
            std::string extra;
            if (ls >> extra)
                throw ParseError("line " + std::to_string(lineno) + ": trailing token '" + extra +
                                 "'");
            nx = static_cast<std::size_t>(a);
            ny = static_cast<std::size_t>(b);
            header_seen = true;
            continue;
        }
        if (rows.size() == nx)
            throw ParseError("line " + std::to_string(lineno) + ": more than " +
                             std::to_string(nx) + " rows");
        std::vector<double> row;
        std::string tok;
        std::size_t col = 0;
        while (ls >> tok) {
            ++col;
            char* end = nullptr;
            double v = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() || *end != '\0')
                throw ParseError("line " + std::to_string(lineno) + ", column " +
                                 std::to_string(col) + ": bad probability '" + tok + "'");
            row.push_back(v);
        }
        if (row.size() != ny)
            throw ParseError("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(ny) + " columns, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (!header_seen) throw ParseError("missing 'dmc |X| |Y|' header");
    if (rows.size() != nx)
        throw ParseError("expected " + std::to_string(nx) + " rows, got " +
                         std::to_string(rows.size()));
    return validate_dmc(rows);
}

std::string write_channel_file(const Dmc& w) {
    std::ostringstream out;
    out << "dmc " << w.num_inputs() << ' ' << w.num_outputs() << "\n";
    for (std::size_t x = 0; x < w.num_inputs(); ++x) {
        for (std::size_t y = 0; y < w.num_outputs(); ++y) {
            if (y) out << ' ';
            out << g17(w(x, y));
        }
        out << "\n";
    }
    return out.str();
}

TrainingSet parse_training_file(const std::string& text, std::size_t nx, std::size_t ny) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    TrainingSet ts;
    ts.input_alphabet = nx;
    ts.output_alphabet = ny;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected 'x,y'");
        char* end = nullptr;
        long x = std::strtol(line.c_str(), &end, 10);
        if (end == line.c_str() || static_cast<std::size_t>(end - line.c_str()) > comma)
            throw ParseError("line " + std::to_string(lineno) + ": bad input index");
        const char* ystr = line.c_str() + comma + 1;
        long y = std::strtol(ystr, &end, 10);
        if (end == ystr) throw ParseError("line " + std::to_string(lineno) + ": bad output index");
        while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
        if (*end != '\0')
            throw ParseError("line " + std::to_string(lineno) + ": trailing characters");
        if (x < 0 || static_cast<std::size_t>(x) >= nx)
            throw IndexOutOfRange("line " + std::to_string(lineno) + ": x = " +
                                  std::to_string(x));
        if (y < 0 || static_cast<std::size_t>(y) >= ny)
            throw IndexOutOfRange("line " + std::to_string(lineno) + ": y = " +
                                  std::to_string(y));
        ts.pairs.emplace_back(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
    }
    if (ts.pairs.empty()) throw ParseError("training file has no pairs (m >= 1 required)");
    return ts;
}

Dmc make_channel(const std::string& spec) {
    if (starts_with(spec, "bsc:")) return bsc(parse_probability(spec.substr(4), "bsc parameter"));
    if (starts_with(spec, "bec:")) return bec(parse_probability(spec.substr(4), "bec parameter"));
    if (starts_with(spec, "identity:")) {
        long k = std::strtol(spec.c_str() + 9, nullptr, 10);
        if (k < 1) throw ParseError("bad identity size in '" + spec + "'");
        return identity_channel(static_cast<std::size_t>(k));
    }
    if (starts_with(spec, "uniform:")) {
        std::size_t comma = spec.find(',', 8);
        if (comma == std::string::npos) throw ParseError("uniform needs 'uniform:kx,ky'");
        long kx = std::strtol(spec.substr(8, comma - 8).c_str(), nullptr, 10);
        long ky = std::strtol(spec.substr(comma + 1).c_str(), nullptr, 10);
        if (kx < 1 || ky < 1) throw ParseError("bad uniform sizes in '" + spec + "'");
        return uniform_channel(static_cast<std::size_t>(kx), static_cast<std::size_t>(ky));
    }
    if (starts_with(spec, "file:")) return parse_channel_file(read_file(spec.substr(5)));
    return parse_channel_file(read_file(spec));
}

RunResult run(const std::vector<std::string>& args) {
    RunConfig cfg;
    CLI::App app{"Finite-blocklength bounds for channel codes learned from samples"};
    app.require_subcommand(1);

    auto add_channel = [&](CLI::App* sub) {
        sub->add_option("--channel", cfg.channel_spec,
                        "bsc:p | bec:p | identity:k | uniform:kx,ky | file path");
        sub->add_option("--training", cfg.training_path, "training CSV (x,y per line)");
        sub->add_option("--nx", cfg.nx, "input alphabet size (with --training)");
        sub->add_option("--ny", cfg.ny, "output alphabet size (with --training)");
        sub->add_option("--out", cfg.out_path, "write output to file instead of stdout");
    };

    CLI::App* c;
    c = app.add_subcommand("capacity", "Blahut-Arimoto capacity of the channel");
    add_channel(c);
    c->add_option("--tol", cfg.tol, "certified bracket width in bits");

    c = app.add_subcommand("dispersion", "capacity and extremal conditional variance");
    add_channel(c);
    c->add_option("--eps", cfg.epsilon, "target error (selects min/max branch)");

    c = app.add_subcommand("estimate", "empirical channel from a training CSV");
    add_channel(c);

    c = app.add_subcommand("sample", "draw a training set from a known channel");
    add_channel(c);
    c->add_option("--m", cfg.m, "training size")->required();
    c->add_option("--seed", cfg.seed, "rng seed");

    auto add_bound_common = [&](CLI::App* sub) {
        add_channel(sub);
        sub->add_option("--n", cfg.n, "blocklength")->required();
        sub->add_option("--eps", cfg.epsilon, "target error");
        sub->add_option("--delta", cfg.delta, "confidence parameter");
        sub->add_option("--m", cfg.m, "training size");
        sub->add_flag("--exact", cfg.exact_channel, "known-channel mode: penalty forced to 0");
    };

    c = app.add_subcommand("achieve", "learned RCU error bound at a fixed rate");
    add_bound_common(c);
    c->add_option("--rate", cfg.rate, "R in bits/use");
    c->add_option("--log2m", cfg.log2m, "log2 of the codebook size");
    c->add_option("--n0", cfg.n0, "force a sub-blocklength");
    c->add_option("--seed", cfg.seed, "Monte Carlo fallback seed");

    c = app.add_subcommand("max-rate", "largest rate with achievability bound <= eps");
    add_bound_common(c);

    c = app.add_subcommand("converse", "metaconverse upper bound on log2 M");
    add_bound_common(c);
    c->add_option("--qy", cfg.qy_spec, "auxiliary output law: caod | uniform | 1x|Y| dmc file");

    c = app.add_subcommand("normal-approx", "normal-approximation rate expansion");
    add_channel(c);
    c->add_option("--n", cfg.n, "blocklength")->required();
    c->add_option("--eps", cfg.epsilon, "target error");
    c->add_option("--n0", cfg.n0, "partial sub-blocklength (Corollary-style rate)");
    c->add_option("--m", cfg.m, "training size (enables the condition check)");
    c->add_option("--delta", cfg.delta, "confidence parameter");

    c = app.add_subcommand("simulate", "Monte Carlo error of the learned random code");
    add_channel(c);
    c->add_option("--channel-est", cfg.channel_est_spec, "decoder channel estimate");
    c->add_option("--n", cfg.n, "blocklength")->required();
    c->add_option("--rate", cfg.rate, "R in bits/use");
    c->add_option("--log2m", cfg.log2m, "log2 of the codebook size");
    c->add_option("--n0", cfg.n0, "mini-codebook sub-blocklength (default n)");
    c->add_option("--trials", cfg.trials, "Monte Carlo trials");
    c->add_option("--seed", cfg.seed, "rng seed");
    c->add_option("--ensemble", cfg.ensemble, "average over this many fresh codebooks");

    c = app.add_subcommand("verify", "empirical check of the reliability constraint");
    add_bound_common(c);
    c->add_option("--rate", cfg.rate, "R in bits/use");
    c->add_option("--log2m", cfg.log2m, "log2 of the codebook size");
    c->add_option("--n0", cfg.n0, "mini-codebook sub-blocklength (default n)");
    c->add_option("--draws", cfg.draws, "independent training draws");
    c->add_option("--trials", cfg.trials, "trials per draw");
    c->add_option("--seed", cfg.seed, "rng seed");
    c->add_flag("--fresh-codebook", cfg.fresh_codebook, "redraw the codebook every draw");

    c = app.add_subcommand("sandwich", "achievability/converse/normal-approx per blocklength");
    add_channel(c);
    c->add_option("--n-list", cfg.n_list, "comma-separated blocklengths")->required();
    c->add_option("--eps", cfg.epsilon, "target error");
    c->add_option("--delta", cfg.delta, "confidence parameter");
    c->add_option("--m", cfg.m, "training size");
    c->add_option("--qy", cfg.qy_spec, "auxiliary output law: caod | uniform | file");
    c->add_flag("--exact", cfg.exact_channel, "known-channel mode: penalty forced to 0");

    RunResult result;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());  // CLI11 convention
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        result.out = app.help();
        result.exit_code = 0;
        return result;
    } catch (const CLI::ParseError& e) {
        result.err = std::string("error: ") + e.what() + "\n";
        result.err += "run with --help for usage\n";
        result.exit_code = 2;
        return result;
    }

    CommandContext ctx{cfg, {}, {}};
    try {
        if (app.got_subcommand("capacity")) cmd_capacity(ctx);
        else if (app.got_subcommand("dispersion")) cmd_dispersion(ctx);
        else if (app.got_subcommand("estimate")) cmd_estimate(ctx);
        else if (app.got_subcommand("sample")) cmd_sample(ctx);
        else if (app.got_subcommand("achieve")) cmd_achieve(ctx);
        else if (app.got_subcommand("max-rate")) cmd_max_rate(ctx);
        else if (app.got_subcommand("converse")) cmd_converse(ctx);
        else if (app.got_subcommand("normal-approx")) cmd_normal_approx(ctx);
        else if (app.got_subcommand("simulate")) cmd_simulate(ctx);
        else if (app.got_subcommand("verify")) cmd_verify(ctx);
        else if (app.got_subcommand("sandwich")) cmd_sandwich(ctx);
    } catch (const Error& e) {
        result.err = ctx.err.str() + "error: " + e.what() + "\n";
        result.exit_code = 1;
        return result;
    } catch (const std::exception& e) {
        result.err = ctx.err.str() + "error: " + e.what() + "\n";
        result.exit_code = 1;
        return result;
    }

    result.err = ctx.err.str();
    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path, std::ios::binary);
        if (!out) {
            result.err += "error: cannot write " + cfg.out_path + "\n";
            result.exit_code = 1;
            return result;
        }
        out << ctx.out.str();
    } else {
        result.out = ctx.out.str();
    }
    return result;
}

}  // namespace fblearn::cli
