#include "droplets/config.hpp"

#include <sstream>

namespace droplets {

namespace {
std::string trimmed(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}
} // namespace

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trimmed(tok);
        if (!tok.empty()) out.push_back(parse_double(tok));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trimmed(tok);
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    return out;
}

Config Config::from_file(const std::string& path) {
    KeyValueMap kv;
    try {
        kv = read_key_values(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return from_key_values(kv);
}

Config Config::from_key_values(const KeyValueMap& kv) {
    Config c;
    for (const auto& [key, value] : kv) {
        try {
            if (key == "shape") c.shape = value;
            else if (key == "shape.samples") c.samples = std::stoul(value);
            else if (key == "anisotropy.kind") c.anisotropy_kind = value;
            else if (key == "anisotropy.omega") c.omega = parse_double(value);
            else if (key == "anisotropy.constant") c.constant = parse_double(value);
            else if (key == "checkpoints") c.checkpoints = parse_double_list(value);
            else if (key == "glauber.L") c.L = std::stoi(value);
            else if (key == "glauber.seed") c.seed = std::stoull(value);
            else if (key == "glauber.margin") c.margin = std::stoi(value);
            else if (key == "compare.L") c.Ls = parse_int_list(value);
            else if (key == "compare.seeds") c.seeds = std::stoi(value);
            else if (key == "compare.eta") c.eta = parse_double(value);
            else if (key == "compare.whp_threshold") c.whp_threshold = parse_double(value);
            else if (key == "compare.flow_samples") c.flow_samples = std::stoul(value);
            else if (key == "out") c.out_dir = value;
            else throw ConfigError("unknown config key '" + key + "'");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("bad value for key '" + key + "': '" + value + "'");
        }
    }
    return c;
}

KeyValueMap Config::to_key_values() const {
    KeyValueMap kv;
    kv["shape"] = shape;
    kv["shape.samples"] = std::to_string(samples);
    kv["anisotropy.kind"] = anisotropy_kind;
    kv["anisotropy.omega"] = format_double(omega);
    kv["anisotropy.constant"] = format_double(constant);
    std::ostringstream cps;
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
        cps << (i ? "," : "") << format_double(checkpoints[i]);
    kv["checkpoints"] = cps.str();
    kv["glauber.L"] = std::to_string(L);
    kv["glauber.seed"] = std::to_string(seed);
    kv["glauber.margin"] = std::to_string(margin);
    std::ostringstream ls;
    for (std::size_t i = 0; i < Ls.size(); ++i)
        ls << (i ? "," : "") << Ls[i];
    kv["compare.L"] = ls.str();
    kv["compare.seeds"] = std::to_string(seeds);
    kv["compare.eta"] = format_double(eta);
    kv["compare.whp_threshold"] = format_double(whp_threshold);
    kv["compare.flow_samples"] = std::to_string(flow_samples);
    kv["out"] = out_dir;
    return kv;
}

AnisotropyProfile Config::profile() const {
    if (anisotropy_kind == "exact") return AnisotropyProfile::exact();
    if (anisotropy_kind == "mollified") {
        if (!(omega > 0.0))
            throw ConfigError("anisotropy.omega must be set for mollified mode");
        return AnisotropyProfile::mollified(omega);
    }
    if (anisotropy_kind == "constant") return AnisotropyProfile::constant(constant);
    throw ConfigError("anisotropy.kind must be exact, mollified or constant");
}

ShapeSpec Config::shape_spec() const {
    try {
        return ShapeSpec::parse(shape, samples);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

ExperimentPlan Config::plan() const {
    ExperimentPlan p;
    p.shape = shape_spec();
    if (anisotropy_kind == "exact") p.profile_kind = AnisotropyKind::Exact;
    else if (anisotropy_kind == "mollified") p.profile_kind = AnisotropyKind::Mollified;
    else if (anisotropy_kind == "constant") p.profile_kind = AnisotropyKind::Constant;
    else throw ConfigError("anisotropy.kind must be exact, mollified or constant");
    p.omega = omega;
    p.constant = constant;
    p.Ls = Ls;
    p.seeds = seeds;
    p.base_seed = seed;
    p.eta = eta;
    p.checkpoints = checkpoints;
    p.flow_samples = flow_samples;
    p.whp_threshold = whp_threshold;
    p.window_margin = margin;
    return p;
}

} // namespace droplets
