#include "droplets/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace droplets {

namespace {

constexpr float kInf = std::numeric_limits<float>::max() / 4;

// 1D squared distance transform, lower envelope of parabolas
void dt1d(const float* f, float* d, int* v, float* z, int n) {
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        float s;
        while (true) {
            int p = v[k];
            s = ((f[q] + float(q) * q) - (f[p] + float(p) * p)) / (2.0f * (q - p));
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        float dq = float(q) - float(v[k]);
        d[q] = dq * dq + f[v[k]];
    }
}

std::vector<float> edt_impl(const Raster& r, bool parallel) {
    const int nx = int(r.nx), ny = int(r.ny);
    std::vector<float> g(std::size_t(nx) * ny);

    // columns first
#pragma omp parallel if (parallel)
    {
        std::vector<float> f(std::max(nx, ny)), d(std::max(nx, ny));
        std::vector<int> v(std::max(nx, ny));
        std::vector<float> z(std::max(nx, ny) + 1);
#pragma omp for
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < ny; ++j)
                f[j] = r.mask[std::size_t(j) * nx + i] ? 0.0f : kInf;
            dt1d(f.data(), d.data(), v.data(), z.data(), ny);
            for (int j = 0; j < ny; ++j) g[std::size_t(j) * nx + i] = d[j];
        }
#pragma omp barrier
#pragma omp for
        for (int j = 0; j < ny; ++j) {
            float* row = g.data() + std::size_t(j) * nx;
            for (int i = 0; i < nx; ++i) f[i] = row[i];
            dt1d(f.data(), d.data(), v.data(), z.data(), nx);
            for (int i = 0; i < nx; ++i) row[i] = d[i];
        }
    }
    return g;
}

int64_t pick_grid(double eta_scale, const Region& a, const Region* b = nullptr) {
    // power-of-two pixels-per-unit; finer than eta/8 and than any involved
    // lattice spacing, never coarser than 1/1024
    int64_t p = 1024;
    auto need = [&](double cell) {
        while (1.0 / double(p) > cell && p < (1 << 22)) p *= 2;
    };
    if (eta_scale > 0.0) need(eta_scale / 8.0);
    auto from_region = [&](const Region& r) {
        if (auto* cu = r.as_cells()) need(1.0 / cu->L);
        if (auto* gr = r.as_grid()) need(gr->r.res);
    };
    from_region(a);
    if (b) from_region(*b);
    return p;
}

} // namespace

std::size_t Raster::count() const {
    std::size_t c = 0;
    for (uint8_t m : mask) c += m;
    return c;
}

void BBox::merge(const BBox& o) {
    xlo = std::min(xlo, o.xlo);
    xhi = std::max(xhi, o.xhi);
    ylo = std::min(ylo, o.ylo);
    yhi = std::max(yhi, o.yhi);
}

Region Region::polygon(std::vector<Vec2> pts) {
    if (pts.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
    double a2 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec2& p = pts[i];
        const Vec2& q = pts[(i + 1) % pts.size()];
        a2 += p.x * q.y - p.y * q.x;
    }
    if (a2 < 0.0) std::reverse(pts.begin(), pts.end());
    return Region(Polygon{std::move(pts)});
}

Region Region::cell_union(int L, std::vector<std::pair<int, int>> cells) {
    if (L < 1) throw std::invalid_argument("cell union scale must be positive");
    if (cells.empty()) return Region::empty();
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return Region(CellUnion{L, std::move(cells)});
}

Region Region::grid(Raster r) {
    bool any = false;
    for (uint8_t m : r.mask)
        if (m) {
            any = true;
            break;
        }
    if (!any) return Region::empty();
    return Region(Grid{std::move(r)});
}

BBox Region::bbox() const {
    if (auto* p = as_point()) return {p->p.x, p->p.x, p->p.y, p->p.y};
    if (auto* poly = as_polygon()) {
        BBox b{poly->pts[0].x, poly->pts[0].x, poly->pts[0].y, poly->pts[0].y};
        for (const Vec2& v : poly->pts) {
            b.xlo = std::min(b.xlo, v.x);
            b.xhi = std::max(b.xhi, v.x);
            b.ylo = std::min(b.ylo, v.y);
            b.yhi = std::max(b.yhi, v.y);
        }
        return b;
    }
    if (auto* cu = as_cells()) {
        int ilo = cu->cells[0].first, ihi = ilo;
        int jlo = cu->cells[0].second, jhi = jlo;
        for (auto [i, j] : cu->cells) {
            ilo = std::min(ilo, i);
            ihi = std::max(ihi, i);
            jlo = std::min(jlo, j);
            jhi = std::max(jhi, j);
        }
        double h = 0.5 / cu->L;
        return {double(ilo) / cu->L - h, double(ihi) / cu->L + h,
                double(jlo) / cu->L - h, double(jhi) / cu->L + h};
    }
    if (auto* gr = as_grid()) {
        const Raster& r = gr->r;
        int64_t ilo = r.nx, ihi = -1, jlo = r.ny, jhi = -1;
        for (int64_t j = 0; j < r.ny; ++j)
            for (int64_t i = 0; i < r.nx; ++i)
                if (r.at(i, j)) {
                    ilo = std::min(ilo, i);
                    ihi = std::max(ihi, i);
                    jlo = std::min(jlo, j);
                    jhi = std::max(jhi, j);
                }
        return {double(r.ix0 + ilo) * r.res, double(r.ix0 + ihi + 1) * r.res,
                double(r.iy0 + jlo) * r.res, double(r.iy0 + jhi + 1) * r.res};
    }
    return {0, 0, 0, 0};
}

double Region::area_estimate() const {
    if (auto* poly = as_polygon()) {
        double a2 = 0.0;
        for (std::size_t i = 0; i < poly->pts.size(); ++i) {
            const Vec2& p = poly->pts[i];
            const Vec2& q = poly->pts[(i + 1) % poly->pts.size()];
            a2 += p.x * q.y - p.y * q.x;
        }
        return 0.5 * std::abs(a2);
    }
    if (auto* cu = as_cells())
        return double(cu->cells.size()) / (double(cu->L) * cu->L);
    if (auto* gr = as_grid())
        return double(gr->r.count()) * gr->r.res * gr->r.res;
    return 0.0;
}

bool Region::contains(Vec2 p) const {
    if (is_empty()) return false;
    if (auto* pt = as_point()) return pt->p.x == p.x && pt->p.y == p.y;
    if (as_polygon()) {
        auto xs = row_crossings(p.y);
        int c = 0;
        for (double x : xs)
            if (x <= p.x) ++c;
        return c % 2 == 1;
    }
    if (auto* cu = as_cells()) {
        int i = int(std::lround(p.x * cu->L));
        int j = int(std::lround(p.y * cu->L));
        double h = 0.5 / cu->L;
        if (std::abs(p.x - double(i) / cu->L) > h ||
            std::abs(p.y - double(j) / cu->L) > h)
            return false;
        return std::binary_search(cu->cells.begin(), cu->cells.end(),
                                  std::make_pair(i, j));
    }
    if (auto* gr = as_grid()) {
        const Raster& r = gr->r;
        int64_t i = (int64_t)std::floor(p.x / r.res) - r.ix0;
        int64_t j = (int64_t)std::floor(p.y / r.res) - r.iy0;
        if (i < 0 || j < 0 || i >= r.nx || j >= r.ny) return false;
        return r.at(i, j) != 0;
    }
    return false;
}

std::vector<double> Region::row_crossings(double y) const {
    auto* poly = as_polygon();
    if (!poly) throw std::logic_error("row_crossings: polygon regions only");
    std::vector<double> xs;
    const auto& pts = poly->pts;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = pts[i];
        const Vec2& q = pts[(i + 1) % n];
        if ((p.y <= y && q.y > y) || (q.y <= y && p.y > y))
            xs.push_back(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y));
    }
    std::sort(xs.begin(), xs.end());
    return xs;
}

Raster Region::rasterize(const BBox& box, double res) const {
    Raster r;
    r.res = res;
    r.ix0 = (int64_t)std::floor(box.xlo / res);
    r.iy0 = (int64_t)std::floor(box.ylo / res);
    r.nx = (int64_t)std::ceil(box.xhi / res) - r.ix0 + 1;
    r.ny = (int64_t)std::ceil(box.yhi / res) - r.iy0 + 1;
    r.mask.assign(std::size_t(r.nx) * r.ny, 0);

    if (is_empty()) return r;

    if (auto* pt = as_point()) {
        int64_t i = (int64_t)std::floor(pt->p.x / res) - r.ix0;
        int64_t j = (int64_t)std::floor(pt->p.y / res) - r.iy0;
        if (i >= 0 && j >= 0 && i < r.nx && j < r.ny)
            r.mask[std::size_t(j * r.nx + i)] = 1;
        return r;
    }

    if (as_polygon()) {
        for (int64_t j = 0; j < r.ny; ++j) {
            auto xs = row_crossings(r.cy(j));
            for (std::size_t a = 0; a + 1 < xs.size(); a += 2) {
                // pixels whose centers lie inside [xs[a], xs[a+1])
                int64_t i0 = (int64_t)std::ceil(xs[a] / res - 0.5);
                int64_t i1 = (int64_t)std::ceil(xs[a + 1] / res - 0.5) - 1;
                i0 = std::max(i0 - r.ix0, int64_t(0));
                i1 = std::min(i1 - r.ix0, r.nx - 1);
                for (int64_t i = i0; i <= i1; ++i)
                    r.mask[std::size_t(j * r.nx + i)] = 1;
            }
        }
        return r;
    }

    if (auto* cu = as_cells()) {
        double h = 0.5 / cu->L;
        for (auto [ci, cj] : cu->cells) {
            double xl = double(ci) / cu->L - h, xh = double(ci) / cu->L + h;
            double yl = double(cj) / cu->L - h, yh = double(cj) / cu->L + h;
            int64_t i0 = std::max((int64_t)std::ceil(xl / res - 0.5) - r.ix0, int64_t(0));
            int64_t i1 = std::min((int64_t)std::ceil(xh / res - 0.5) - 1 - r.ix0, r.nx - 1);
            int64_t j0 = std::max((int64_t)std::ceil(yl / res - 0.5) - r.iy0, int64_t(0));
            int64_t j1 = std::min((int64_t)std::ceil(yh / res - 0.5) - 1 - r.iy0, r.ny - 1);
            for (int64_t j = j0; j <= j1; ++j)
                for (int64_t i = i0; i <= i1; ++i)
                    r.mask[std::size_t(j * r.nx + i)] = 1;
        }
        return r;
    }

    if (auto* gr = as_grid()) {
        const Raster& s = gr->r;
        for (int64_t j = 0; j < r.ny; ++j) {
            double y = r.cy(j);
            int64_t sj = (int64_t)std::floor(y / s.res) - s.iy0;
            if (sj < 0 || sj >= s.ny) continue;
            for (int64_t i = 0; i < r.nx; ++i) {
                int64_t si = (int64_t)std::floor(r.cx(i) / s.res) - s.ix0;
                if (si < 0 || si >= s.nx) continue;
                r.mask[std::size_t(j * r.nx + i)] = s.at(si, sj);
            }
        }
        return r;
    }
    return r;
}

std::vector<float> edt_squared(const Raster& r, bool parallel) {
    return edt_impl(r, parallel);
}

Region dilate_erode(const Region& region, double eta) {
    if (eta == 0.0) return region;
    if (region.is_empty()) return Region::empty();

    int64_t p = pick_grid(std::abs(eta), region);
    double res = 1.0 / double(p);
    BBox box = region.bbox();
    box.expand(std::abs(eta) + 4.0 * res);

    Raster mask = region.rasterize(box, res);
    const double thr = (std::abs(eta) / res) * (std::abs(eta) / res);

    if (eta > 0.0) {
        auto d = edt_squared(mask);
        Raster out = mask;
        for (std::size_t i = 0; i < d.size(); ++i)
            out.mask[i] = d[i] <= thr ? 1 : 0;
        return Region::grid(std::move(out));
    }

    Raster comp = mask;
    for (auto& m : comp.mask) m = m ? 0 : 1;
    auto d = edt_squared(comp);
    Raster out = mask;
    for (std::size_t i = 0; i < d.size(); ++i)
        out.mask[i] = d[i] >= thr ? 1 : 0;
    return Region::grid(std::move(out));
}

double hausdorff(const Region& a, const Region& b) {
    if (a.is_empty() || b.is_empty())
        throw std::invalid_argument("hausdorff distance of an empty region");
    if (a.is_point() && b.is_point())
        return (a.as_point()->p - b.as_point()->p).norm();

    int64_t p = pick_grid(0.0, a, &b);
    double res = 1.0 / double(p);
    BBox box = a.bbox();
    box.merge(b.bbox());
    box.expand(4.0 * res);

    Raster ra = a.rasterize(box, res);
    Raster rb = b.rasterize(box, res);
    // guard against sub-pixel regions vanishing in rasterization
    auto ensure = [&](Raster& r, const Region& src) {
        if (r.count() == 0) {
            BBox bb = src.bbox();
            Vec2 c{0.5 * (bb.xlo + bb.xhi), 0.5 * (bb.ylo + bb.yhi)};
            int64_t i = (int64_t)std::floor(c.x / res) - r.ix0;
            int64_t j = (int64_t)std::floor(c.y / res) - r.iy0;
            r.mask[std::size_t(j * r.nx + i)] = 1;
        }
    };
    ensure(ra, a);
    ensure(rb, b);

    auto da = edt_squared(ra);
    auto db = edt_squared(rb);
    float h2 = 0.0f;
    for (std::size_t i = 0; i < ra.mask.size(); ++i) {
        if (ra.mask[i]) h2 = std::max(h2, db[i]);
        if (rb.mask[i]) h2 = std::max(h2, da[i]);
    }
    return std::sqrt(double(h2)) * res;
}

InclusionVerdict inclusion_check(const Region& inner, const Region& outer) {
    if (inner.is_empty()) return {true, std::nullopt};
    if (outer.is_empty()) {
        BBox bb = inner.bbox();
        return {false, Vec2{0.5 * (bb.xlo + bb.xhi), 0.5 * (bb.ylo + bb.yhi)}};
    }

    // exact path for cell unions at the same scale
    if (auto* ci = inner.as_cells()) {
        if (auto* co = outer.as_cells(); co && co->L == ci->L) {
            for (auto c : ci->cells)
                if (!std::binary_search(co->cells.begin(), co->cells.end(), c))
                    return {false,
                            Vec2{double(c.first) / ci->L, double(c.second) / ci->L}};
            return {true, std::nullopt};
        }
    }

    int64_t p = pick_grid(0.0, inner, &outer);
    double res = 1.0 / double(p);
    BBox box = inner.bbox();
    box.merge(outer.bbox());
    box.expand(4.0 * res);

    Raster ri = inner.rasterize(box, res);
    Raster ro = outer.rasterize(box, res);
    for (int64_t j = 0; j < ri.ny; ++j)
        for (int64_t i = 0; i < ri.nx; ++i)
            if (ri.at(i, j) && !ro.at(i, j))
                return {false, Vec2{ri.cx(i), ri.cy(j)}};
    return {true, std::nullopt};
}

} // namespace droplets
