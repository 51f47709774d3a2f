#include "droplets/glauber.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace droplets {

SpinLattice SpinLattice::init_from_region(int L, const Region& region, int margin) {
    if (L < 16) throw std::invalid_argument("lattice scale L must be >= 16");
    SpinLattice lat;
    lat.L_ = L;
    if (region.is_empty() || region.is_point()) return lat; // all "+", rate 0

    BBox bb = region.bbox();
    lat.i0_ = int(std::floor(bb.xlo * L)) - margin;
    lat.j0_ = int(std::floor(bb.ylo * L)) - margin;
    lat.nx_ = int(std::ceil(bb.xhi * L)) - lat.i0_ + 1 + margin;
    lat.ny_ = int(std::ceil(bb.yhi * L)) - lat.j0_ + 1 + margin;
    lat.spin_.assign(std::size_t(lat.nx_) * lat.ny_, +1);
    lat.class_.assign(lat.spin_.size(), 0);
    lat.pos_.assign(lat.spin_.size(), -1);

    if (region.as_polygon()) {
        for (int j = lat.j0_; j < lat.j0_ + lat.ny_; ++j) {
            auto xs = region.row_crossings(double(j) / L);
            for (std::size_t a = 0; a + 1 < xs.size(); a += 2) {
                int ilo = int(std::ceil(xs[a] * L));
                int ihi = int(std::floor(xs[a + 1] * L));
                for (int i = std::max(ilo, lat.i0_);
                     i <= std::min(ihi, lat.i0_ + lat.nx_ - 1); ++i) {
                    lat.spin_[std::size_t(lat.idx(i, j))] = -1;
                    ++lat.minus_;
                }
            }
        }
    } else {
        for (int j = lat.j0_; j < lat.j0_ + lat.ny_; ++j)
            for (int i = lat.i0_; i < lat.i0_ + lat.nx_; ++i)
                if (region.contains({double(i) / L, double(j) / L})) {
                    lat.spin_[std::size_t(lat.idx(i, j))] = -1;
                    ++lat.minus_;
                }
    }

    // full scan to build the rate classes
    for (int j = lat.j0_; j < lat.j0_ + lat.ny_; ++j)
        for (int i = lat.i0_; i < lat.i0_ + lat.nx_; ++i) lat.classify(i, j);
    return lat;
}

int SpinLattice::spin_at(int i, int j) const {
    if (!in_window(i, j)) return +1;
    return spin_[std::size_t(idx(i, j))];
}

int SpinLattice::disagree_count(int i, int j) const {
    int s = spin_at(i, j);
    return (spin_at(i - 1, j) != s) + (spin_at(i + 1, j) != s) +
           (spin_at(i, j - 1) != s) + (spin_at(i, j + 1) != s);
}

void SpinLattice::classify(int i, int j) {
    if (!in_window(i, j)) return; // pinned "+", never active
    int s = idx(i, j);
    int h = disagree_count(i, j);
    uint8_t nc = h >= 3 ? 2 : (h == 2 ? 1 : 0);
    uint8_t oc = class_[std::size_t(s)];
    if (nc == oc) return;
    if (oc != 0) {
        auto& list = members_[oc];
        int32_t p = pos_[std::size_t(s)];
        list[std::size_t(p)] = list.back();
        pos_[std::size_t(list.back())] = p;
        list.pop_back();
        pos_[std::size_t(s)] = -1;
    }
    class_[std::size_t(s)] = nc;
    if (nc != 0) {
        members_[nc].push_back(s);
        pos_[std::size_t(s)] = int32_t(members_[nc].size()) - 1;
    }
}

void SpinLattice::flip(int i, int j) {
    int8_t& s = spin_[std::size_t(idx(i, j))];
    minus_ += s == 1 ? 1 : -1;
    s = -s;
    classify(i, j);
    classify(i - 1, j);
    classify(i + 1, j);
    classify(i, j - 1);
    classify(i, j + 1);
}

double SpinLattice::total_rate() const {
    return double(members_[2].size()) + 0.5 * double(members_[1].size());
}

void SpinLattice::advance(RngStream& rng, double until) {
    if (until < t_) throw std::invalid_argument("advance target before t_micro");
    while (true) {
        double rate = total_rate();
        if (rate == 0.0) {
            t_ = until;
            return;
        }
        double dt = rng.exponential(rate);
        if (t_ + dt > until) {
            t_ = until;
            return;
        }
        t_ += dt;
        double x = rng.uniform() * rate;
        const auto& list = x < double(members_[2].size()) ? members_[2] : members_[1];
        int s = list[std::size_t(rng.uniform_below(list.size()))];
        flip(i0_ + s % nx_, j0_ + s / nx_);
    }
}

double SpinLattice::death_time(RngStream& rng, double cap) {
    double last = t_;
    while (true) {
        double rate = total_rate();
        if (rate == 0.0) return minus_ == 0 ? last : t_;
        double dt = rng.exponential(rate);
        t_ += dt;
        if (cap > 0.0 && t_ > cap)
            throw std::runtime_error("glauber death_time exceeded safety cap");
        double x = rng.uniform() * rate;
        const auto& list = x < double(members_[2].size()) ? members_[2] : members_[1];
        int s = list[std::size_t(rng.uniform_below(list.size()))];
        flip(i0_ + s % nx_, j0_ + s / nx_);
        last = t_;
    }
}

Region SpinLattice::droplet() const {
    std::vector<std::pair<int, int>> cells;
    cells.reserve(minus_);
    for (int j = j0_; j < j0_ + ny_; ++j)
        for (int i = i0_; i < i0_ + nx_; ++i)
            if (spin_[std::size_t(idx(i, j))] == -1) cells.emplace_back(i, j);
    if (cells.empty()) return Region::empty();
    return Region::cell_union(L_, std::move(cells));
}

bool SpinLattice::active_set_consistent() const {
    std::size_t n1 = 0, n2 = 0;
    for (int j = j0_; j < j0_ + ny_; ++j) {
        for (int i = i0_; i < i0_ + nx_; ++i) {
            int h = disagree_count(i, j);
            uint8_t want = h >= 3 ? 2 : (h == 2 ? 1 : 0);
            int s = idx(i, j);
            if (class_[std::size_t(s)] != want) return false;
            if (want != 0) {
                const auto& list = members_[want];
                int32_t p = pos_[std::size_t(s)];
                if (p < 0 || p >= int32_t(list.size()) || list[std::size_t(p)] != s)
                    return false;
                (want == 1 ? n1 : n2) += 1;
            }
        }
    }
    return n1 == members_[1].size() && n2 == members_[2].size();
}

bool SpinLattice::ordered(const SpinLattice& lower, const SpinLattice& upper) {
    if (lower.L_ != upper.L_) return false;
    // compare over the union of windows; off-window is +1
    int ilo = std::min(lower.i0_, upper.i0_);
    int jlo = std::min(lower.j0_, upper.j0_);
    int ihi = std::max(lower.i0_ + lower.nx_, upper.i0_ + upper.nx_);
    int jhi = std::max(lower.j0_ + lower.ny_, upper.j0_ + upper.ny_);
    for (int j = jlo; j < jhi; ++j)
        for (int i = ilo; i < ihi; ++i)
            if (lower.spin_at(i, j) > upper.spin_at(i, j)) return false;
    return true;
}

void SpinLattice::coupled_advance(SpinLattice& lower, SpinLattice& upper,
                                  RngStream& rng, double until, bool check_order) {
    if (lower.L_ != upper.L_ || lower.i0_ != upper.i0_ || lower.j0_ != upper.j0_ ||
        lower.nx_ != upper.nx_ || lower.ny_ != upper.ny_)
        throw std::invalid_argument("coupled lattices need identical windows");
    if (lower.t_ != upper.t_)
        throw std::invalid_argument("coupled lattices out of sync");
    if (!ordered(lower, upper))
        throw std::invalid_argument("coupled_advance requires lower <= upper");

    const std::size_t nsites = lower.spin_.size();

    // union-active set: sites where a ring can change either system. Each
    // such site carries a full rate-1 clock here (the tie coin is resolved by
    // the shared uniform), which keeps the two marginals exact by thinning.
    std::vector<int32_t> list;
    std::vector<int32_t> pos(nsites, -1);
    auto sync = [&](int32_t s) {
        bool want = lower.class_[std::size_t(s)] != 0 || upper.class_[std::size_t(s)] != 0;
        bool have = pos[std::size_t(s)] >= 0;
        if (want && !have) {
            list.push_back(s);
            pos[std::size_t(s)] = int32_t(list.size()) - 1;
        } else if (!want && have) {
            int32_t p = pos[std::size_t(s)];
            list[std::size_t(p)] = list.back();
            pos[std::size_t(list.back())] = p;
            list.pop_back();
            pos[std::size_t(s)] = -1;
        }
    };
    for (std::size_t s = 0; s < nsites; ++s) sync(int32_t(s));

    double t = lower.t_;
    auto resample = [&](SpinLattice& lat, int i, int j, double u) {
        int sum = lat.spin_at(i - 1, j) + lat.spin_at(i + 1, j) +
                  lat.spin_at(i, j - 1) + lat.spin_at(i, j + 1);
        int nv = sum > 0 ? +1 : (sum < 0 ? -1 : (u < 0.5 ? +1 : -1));
        if (nv != lat.spin_at(i, j)) lat.flip(i, j);
    };

    while (true) {
        if (list.empty()) {
            t = until;
            break;
        }
        double dt = rng.exponential(double(list.size()));
        if (t + dt > until) {
            t = until;
            break;
        }
        t += dt;
        int32_t s = list[std::size_t(rng.uniform_below(list.size()))];
        int i = lower.i0_ + s % lower.nx_;
        int j = lower.j0_ + s / lower.nx_;
        double u = rng.uniform();
        resample(lower, i, j, u);
        resample(upper, i, j, u);
        sync(s);
        const int di[4] = {-1, 1, 0, 0};
        const int dj[4] = {0, 0, -1, 1};
        for (int b = 0; b < 4; ++b) {
            int ni = i + di[b], nj = j + dj[b];
            if (lower.in_window(ni, nj)) sync(lower.idx(ni, nj));
        }
        if (check_order && lower.spin_at(i, j) > upper.spin_at(i, j))
            throw std::runtime_error("monotone coupling violated order");
    }
    lower.t_ = upper.t_ = t;
}

} // namespace droplets
