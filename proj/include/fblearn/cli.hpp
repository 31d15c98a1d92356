#ifndef FBLEARN_CLI_HPP
#define FBLEARN_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fblearn/channel.hpp"
#include "fblearn/learning.hpp"

namespace fblearn::cli {

/// Parsed command-line configuration; one instance is shared across
/// subcommands and only the fields a command declares get populated.
struct RunConfig {
    std::string command;
    std::string channel_spec;      // family (bsc:p, bec:p, identity:k, uniform:kx,ky) or file path
    std::string channel_est_spec;  // simulate: estimated channel override
    std::string training_path;     // estimate/simulate: training CSV
    std::string qy_spec = "caod";  // converse auxiliary output law: caod | uniform | file path
    std::string out_path;          // empty = stdout
    std::string n_list;            // sandwich: comma-separated blocklengths

    std::size_t n = 1, m = 1, n0 = 0;  // n0 = 0 means "not set"
    std::size_t nx = 0, ny = 0;
    std::size_t trials = 10000, draws = 100, ensemble = 0;
    double rate = -1.0, log2m = -1.0;
    double epsilon = 1e-3, delta = 0.1, tol = 1e-10;
    std::uint64_t seed = 1;
    bool exact_channel = false;
    bool fresh_codebook = false;
};

struct RunResult {
    int exit_code = 0;
    std::string out;  // stdout payload (CSV or file format)
    std::string err;  // warnings and the single-line error on failure
};

/// Parses the `dmc |X| |Y|` channel file format ('#' comment lines allowed).
Dmc parse_channel_file(const std::string& text);

/// Writes a Dmc in the channel file format with 17 significant digits, so a
/// write/parse round trip is bit-identical.
std::string write_channel_file(const Dmc& w);

/// Parses the two-column `x,y` training CSV (0-based indices, no header).
TrainingSet parse_training_file(const std::string& text, std::size_t nx, std::size_t ny);

/// Builds a channel from a family spec or loads it from a file.
Dmc make_channel(const std::string& spec);

/// Runs a full command line (excluding argv[0]); never throws.
RunResult run(const std::vector<std::string>& args);

}  // namespace fblearn::cli

#endif
