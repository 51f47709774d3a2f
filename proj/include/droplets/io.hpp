#pragma once

#include <map>
#include <string>
#include <vector>

#include "droplets/curve.hpp"
#include "droplets/region.hpp"

namespace droplets {

// Curve snapshot file: header "N time", then N lines "x y theta k".
// Doubles are printed with 17 significant digits so round-trips are
// bit-exact.
struct CurveSnapshot {
    double time = 0.0;
    std::vector<Vec2> points;
    std::vector<double> theta, k;
};

void write_curve_snapshot(const std::string& path, const MarkerCurve& c, double time);
CurveSnapshot read_curve_snapshot(const std::string& path);

// Cell-union file: header "L", then sorted "i j" lines.
void write_cell_union(const std::string& path, const Region& region);
Region read_cell_union(const std::string& path);

// Flat "key = value" metadata / config files, keys kept in insertion order
// irrelevant (sorted on write).
using KeyValueMap = std::map<std::string, std::string>;
void write_key_values(const std::string& path, const KeyValueMap& kv);
KeyValueMap read_key_values(const std::string& path);

std::string format_double(double v); // shortest round-trip decimal
double parse_double(const std::string& s);

// FNV-1a over a canonical string; used to stamp report files
std::string config_hash(const std::string& canonical);

} // namespace droplets
