#pragma once

#include <string>
#include <vector>

#include "droplets/harness.hpp"
#include "droplets/io.hpp"

namespace droplets {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat key=value configuration shared by the CLI subcommands. Unknown keys
// are rejected; command-line flags override file values.
struct Config {
    std::string shape = "disk:0.4";
    std::size_t samples = 512;

    std::string anisotropy_kind = "exact"; // exact | mollified | constant
    double omega = 0.0;                    // 0: solver default
    double constant = 1.0;

    std::vector<double> checkpoints;

    int L = 128;
    std::vector<int> Ls;
    uint64_t seed = 1;
    int seeds = 8;
    int margin = 8;

    double eta = 0.05;
    double whp_threshold = 7.0 / 8.0;
    std::size_t flow_samples = 1024;

    std::string out_dir = "out";

    static Config from_file(const std::string& path); // throws ConfigError
    static Config from_key_values(const KeyValueMap& kv);
    KeyValueMap to_key_values() const;

    AnisotropyProfile profile() const;     // throws ConfigError on bad kind
    ShapeSpec shape_spec() const;          // with `samples`
    ExperimentPlan plan() const;           // compare-command view
};

std::vector<double> parse_double_list(const std::string& s);
std::vector<int> parse_int_list(const std::string& s);

} // namespace droplets
