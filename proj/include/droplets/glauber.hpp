#pragma once

#include <cstdint>
#include <vector>

#include "droplets/region.hpp"
#include "droplets/rng.hpp"

namespace droplets {

// Zero-temperature heat-bath dynamics on a finite window of (Z/L)^2 with
// "+" boundary, simulated rejection-free.
//
// Every site carries a rate-1 clock; on a ring the spin resamples to the
// majority of its four neighbors, fair coin on a 2-2 tie. Only sites whose
// resample can flip them matter: h = #disagreeing neighbors, a flip happens
// at rate 1 for h >= 3 and rate 1/2 for h == 2 (the coin), never for h <= 1.
// The event loop samples the next flip directly from these two rate classes,
// which is equivalent in law to the clock construction by thinning.
//
// Sites outside the window are pinned to +1: spins outside any rectangle
// enclosing all "-" spins keep four "+" neighbors forever.
class SpinLattice {
public:
    // spins -1 exactly on lattice sites inside `region`; the window is the
    // region's site bounding box plus `margin` sites on each side
    static SpinLattice init_from_region(int L, const Region& region, int margin = 8);

    int L() const { return L_; }
    double t_micro() const { return t_; }
    // (#h>=3) * 1 + (#h==2) * 1/2
    double total_rate() const;
    std::size_t minus_count() const { return minus_; }

    int spin_at(int i, int j) const; // lattice coordinates; +1 off-window

    // rejection-free advance to `until` (microscopic time units)
    void advance(RngStream& rng, double until);

    // advance until the state is all "+" and return the time of the last
    // flip; throws std::runtime_error past `cap` (cap <= 0: no cap)
    double death_time(RngStream& rng, double cap = -1.0);

    // cell union of side-1/L squares centered on the "-" sites
    Region droplet() const;

    // full O(window) rebuild of the h-classification; tests compare it
    // against the incrementally maintained one
    bool active_set_consistent() const;

    // same-window sitewise partial order
    static bool ordered(const SpinLattice& lower, const SpinLattice& upper);

    // synchronized-clock monotone coupling: both systems share each ring site
    // and tie-breaking uniform. Preserves lower <= upper sitewise; with
    // check_order, asserts it after every event (throws on violation).
    static void coupled_advance(SpinLattice& lower, SpinLattice& upper,
                                RngStream& rng, double until,
                                bool check_order = false);

private:
    SpinLattice() = default;

    int idx(int i, int j) const { return (j - j0_) * nx_ + (i - i0_); }
    bool in_window(int i, int j) const {
        return i >= i0_ && i < i0_ + nx_ && j >= j0_ && j < j0_ + ny_;
    }
    int disagree_count(int i, int j) const;
    void classify(int i, int j);
    void flip(int i, int j);

    int L_ = 0;
    int i0_ = 0, j0_ = 0, nx_ = 0, ny_ = 0;
    double t_ = 0.0;
    std::size_t minus_ = 0;
    std::vector<int8_t> spin_;

    // rate classes: class_[s] in {0: inactive, 1: h==2, 2: h>=3}
    std::vector<uint8_t> class_;
    std::vector<int32_t> pos_;              // position inside its class list
    std::vector<int32_t> members_[3];       // class 0 unused
};

} // namespace droplets
