#include "droplets/shapes.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "droplets/io.hpp"

namespace droplets {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_bounds(const std::vector<Vec2>& pts) {
    for (const Vec2& p : pts)
        if (std::abs(p.x) > 1.0 || std::abs(p.y) > 1.0)
            throw std::invalid_argument("shape must stay inside [-1,1]^2");
}
} // namespace

ShapeSpec ShapeSpec::disk(double r, Vec2 c, std::size_t n) {
    ShapeSpec s;
    s.kind = Kind::Disk;
    s.r = r;
    s.center = c;
    s.samples = n;
    return s;
}

ShapeSpec ShapeSpec::ellipse(double a, double b, Vec2 c, std::size_t n) {
    ShapeSpec s;
    s.kind = Kind::Ellipse;
    s.a = a;
    s.b = b;
    s.center = c;
    s.samples = n;
    return s;
}

ShapeSpec ShapeSpec::star(double R, double eps, int m, Vec2 c, std::size_t n) {
    ShapeSpec s;
    s.kind = Kind::Star;
    s.R = R;
    s.eps = eps;
    s.lobes = m;
    s.center = c;
    s.samples = n;
    return s;
}

ShapeSpec ShapeSpec::parse(const std::string& text, std::size_t n) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("shape spec needs kind:params, got '" + text + "'");
    std::string kind = text.substr(0, colon);
    std::string rest = text.substr(colon + 1);
    std::vector<double> nums;
    if (kind != "poly") {
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ',')) nums.push_back(std::stod(tok));
    }
    if (kind == "disk" && nums.size() == 1) return disk(nums[0], {}, n);
    if (kind == "ellipse" && nums.size() == 2) return ellipse(nums[0], nums[1], {}, n);
    if (kind == "star" && nums.size() == 3)
        return star(nums[0], nums[1], int(nums[2]), {}, n);
    if (kind == "poly") {
        ShapeSpec s;
        s.kind = Kind::PolygonFile;
        s.path = rest;
        s.samples = n;
        return s;
    }
    throw std::invalid_argument("bad shape spec '" + text + "'");
}

MarkerCurve ShapeSpec::make_curve() const {
    if (samples < 16) throw std::invalid_argument("need at least 16 samples");
    std::vector<Vec2> pts;
    pts.reserve(samples);
    switch (kind) {
    case Kind::Disk: {
        if (!(r > 0.0)) throw std::invalid_argument("disk radius must be positive");
        for (std::size_t i = 0; i < samples; ++i) {
            double phi = 2.0 * kPi * double(i) / double(samples);
            pts.push_back({center.x + r * std::cos(phi), center.y + r * std::sin(phi)});
        }
        break;
    }
    case Kind::Ellipse: {
        if (!(a > 0.0) || !(b > 0.0))
            throw std::invalid_argument("ellipse semi-axes must be positive");
        for (std::size_t i = 0; i < samples; ++i) {
            double phi = 2.0 * kPi * double(i) / double(samples);
            pts.push_back({center.x + a * std::cos(phi), center.y + b * std::sin(phi)});
        }
        break;
    }
    case Kind::Star: {
        if (!(R > 0.0) || eps < 0.0 || lobes < 1)
            throw std::invalid_argument("bad star parameters");
        if (eps >= 1.0)
            throw std::invalid_argument("star with eps >= 1 self-intersects");
        for (std::size_t i = 0; i < samples; ++i) {
            double phi = 2.0 * kPi * double(i) / double(samples);
            double rr = R * (1.0 + eps * std::cos(lobes * phi));
            pts.push_back({center.x + rr * std::cos(phi), center.y + rr * std::sin(phi)});
        }
        break;
    }
    case Kind::PolygonFile: {
        CurveSnapshot snap = read_curve_snapshot(path);
        pts = std::move(snap.points);
        break;
    }
    }
    check_bounds(pts);
    return MarkerCurve(std::move(pts)).resample(samples);
}

double ShapeSpec::analytic_area() const {
    switch (kind) {
    case Kind::Disk:
        return kPi * r * r;
    case Kind::Ellipse:
        return kPi * a * b;
    case Kind::Star:
        // (1/2) integral of R^2 (1 + eps cos(m phi))^2
        return kPi * R * R * (1.0 + 0.5 * eps * eps);
    case Kind::PolygonFile:
        return make_curve().area();
    }
    return 0.0;
}

std::string ShapeSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::Disk:
        os << "disk:" << r;
        break;
    case Kind::Ellipse:
        os << "ellipse:" << a << "," << b;
        break;
    case Kind::Star:
        os << "star:" << R << "," << eps << "," << lobes;
        break;
    case Kind::PolygonFile:
        os << "poly:" << path;
        break;
    }
    return os.str();
}

} // namespace droplets
