#include "droplets/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace droplets {

std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

void write_curve_snapshot(const std::string& path, const MarkerCurve& c, double time) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << c.size() << ' ' << format_double(time) << '\n';
    const auto& th = c.tangent_angle();
    const auto& k = c.curvature();
    for (std::size_t i = 0; i < c.size(); ++i)
        f << format_double(c.points()[i].x) << ' ' << format_double(c.points()[i].y)
          << ' ' << format_double(th[i]) << ' ' << format_double(k[i]) << '\n';
    if (!f) throw std::runtime_error("write failed: " + path);
}

CurveSnapshot read_curve_snapshot(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::size_t n = 0;
    std::string tok;
    f >> n >> tok;
    CurveSnapshot snap;
    snap.time = parse_double(tok);
    snap.points.resize(n);
    snap.theta.resize(n);
    snap.k.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string a, b, c, d;
        f >> a >> b >> c >> d;
        if (!f) throw std::runtime_error("truncated curve snapshot: " + path);
        snap.points[i] = {parse_double(a), parse_double(b)};
        snap.theta[i] = parse_double(c);
        snap.k[i] = parse_double(d);
    }
    return snap;
}

void write_cell_union(const std::string& path, const Region& region) {
    const auto* cu = region.as_cells();
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    if (!cu) {
        // empty droplet: header with scale 0 cells
        f << 1 << '\n';
        return;
    }
    f << cu->L << '\n';
    for (auto [i, j] : cu->cells) f << i << ' ' << j << '\n';
    if (!f) throw std::runtime_error("write failed: " + path);
}

Region read_cell_union(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    int L = 0;
    f >> L;
    std::vector<std::pair<int, int>> cells;
    int i, j;
    while (f >> i >> j) cells.emplace_back(i, j);
    if (cells.empty()) return Region::empty();
    return Region::cell_union(L, std::move(cells));
}

void write_key_values(const std::string& path, const KeyValueMap& kv) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    for (const auto& [k, v] : kv) f << k << " = " << v << '\n';
}

KeyValueMap read_key_values(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    KeyValueMap kv;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("bad config line: '" + line + "'");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::string config_hash(const std::string& canonical) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return std::string(buf, 12);
}

} // namespace droplets
